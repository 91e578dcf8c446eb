"""Empirical equidistribution evidence: cylinder counts, twisted-sum scans,
and the prime-field coefficient collapse.

"Equidistributed" is never reported as a boolean.  A scan produces decaying
normalized sups (evidence) or a witness twist whose sum is exactly full (a
finite disproof certificate at that N); only the latter is ever definitive.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import poly_from_index
from .contfrac import rationality_probe
from .errors import DomainError, PrecisionError
from .exponents import cal_i
from .expsum import ExpPoly, fractional_digit_rows, twisted_sum
from .kinfty import RationalK, kadd, tmap


@dataclass(frozen=True)
class CylinderTable:
    depth: int
    total: int
    counts: dict  # digit prefix tuple (c_1..c_depth) -> count

    def count(self, prefix):
        return self.counts.get(tuple(prefix), 0)


def allowed_depth(f, N):
    """Deepest digit count the coefficient floors support over G_N."""
    depth = None
    for r, c in f.terms:
        if isinstance(c, RationalK):
            continue
        here = -c.floor - r * max(N - 1, 0)
        depth = here if depth is None else min(depth, here)
    return depth


def cylinder_counts(f, N, depth=None, method=None, budget=None):
    """Counts of the first `depth` fractional digits of f(x) over G_N.

    When depth is omitted it defaults to min(3, what the precision allows).
    """
    if depth is None:
        limit = allowed_depth(f, N)
        depth = 3 if limit is None else min(3, limit)
        if depth < 1:
            raise PrecisionError("coefficient floors allow no digit at all")
    rows = fractional_digit_rows(f, N, depth, method=method, budget=budget)
    counts = {}
    for row in rows:
        counts[row] = counts.get(row, 0) + 1
    return CylinderTable(depth, len(rows), counts)


def refine_to_parent(table):
    """Sum a depth-d table back to depth d-1; consistency helper."""
    if table.depth < 2:
        raise DomainError("cannot refine a depth-1 table")
    counts = {}
    for prefix, c in table.counts.items():
        counts[prefix[:-1]] = counts.get(prefix[:-1], 0) + c
    return CylinderTable(table.depth - 1, table.total, counts)


def discrepancy(table, q):
    """max over all depth-d prefixes of |count/total - q^-d|, exact.

    The maximum runs over every prefix, including those with zero count.
    """
    flat = Fraction(1, q ** table.depth)
    worst = Fraction(0)
    for c in table.counts.values():
        worst = max(worst, abs(Fraction(c, table.total) - flat))
    if len(table.counts) < q ** table.depth:
        worst = max(worst, flat)  # some prefix has count zero
    return worst


@dataclass(frozen=True)
class ScanRow:
    N: int
    sup: float
    witness: str | None          # a twist m with an exactly full sum, if any
    discrepancy: Fraction | None


@dataclass(frozen=True)
class Verdict:
    rows: tuple
    flags: dict

    @property
    def failure_certificate(self):
        return any(r.witness is not None for r in self.rows)


def weyl_scan(f, N_list, D, depth=None, method=None, budget=None):
    """Per-N sup over nonzero twists m in G_D of |sum e(m f)| / q^N.

    A decreasing sup profile is evidence for equidistribution; a twist with
    an exactly full histogram certifies failure at that N and is recorded as
    a witness.
    """
    if D < 1:
        raise DomainError("the twist bound D must be positive")
    field = f.field
    rows = []
    for N in sorted(N_list):
        sup = 0.0
        witness = None
        for mi in range(1, field.q ** D):
            m = poly_from_index(field, mi, D)
            hist = twisted_sum(f, m, N, method=method, budget=budget)
            sup = max(sup, hist.normalized())
            if witness is None and hist.is_full():
                witness = str(m)
        disc = None
        if depth:
            disc = discrepancy(cylinder_counts(f, N, depth, method=method,
                                               budget=budget), q=field.q)
        rows.append(ScanRow(N, sup, witness, disc))
    flags = {"failure_certificate": any(r.witness is not None for r in rows)}
    return Verdict(tuple(rows), flags)


@dataclass(frozen=True)
class QPReduction:
    indices: frozenset        # exponents coprime to p reachable from the support
    collapsed: dict           # index k -> collapsed coefficient
    reduced: ExpPoly


def reduce_qp(f):
    """Collapse p-power exponents onto their coprime cores (prime fields only).

    Raising x to the p-th power permutes nothing new in the character: the
    digit-sampling map converts each coefficient of u^(p^v k) into a
    coefficient of u^k, and the reduced polynomial has identical character
    values pointwise (the tests enforce this).
    """
    field = f.field
    if field.m != 1:
        raise DomainError("the reduction requires q = p")
    p = field.p
    support = f.support()
    indices = cal_i(support, p)
    top = max(support, default=0)
    collapsed = {}
    for k in sorted(indices):
        acc = RationalK(field.poly_zero)
        term, v = k, 0
        while term <= top:
            if term in support:
                acc = kadd(acc, tmap(f.coeff(term), v))
            term *= p
            v += 1
        collapsed[k] = acc
    reduced = ExpPoly(field, {**collapsed, 0: f.constant()})
    return QPReduction(frozenset(indices), collapsed, reduced)


@dataclass(frozen=True)
class ObstructionEntry:
    m: str
    status: str   # "rational" | "zero" | "cf-match" | "clear" | "inconclusive"
    detail: str


@dataclass(frozen=True)
class Cor53Report:
    k: int
    entries: tuple

    @property
    def obstructions(self):
        return tuple(e for e in self.entries
                     if e.status in ("rational", "zero", "cf-match"))

    @property
    def clear(self):
        return not self.obstructions


def cor53_probe(f, k, m_bound, cf_bound=8, kappa=2, max_terms=96):
    """Scan twists m for rational structure in the collapsed coefficient at k.

    Any hit is a potential obstruction to the irrationality condition; a
    clean scan is only "no obstruction found up to bounds", never a verdict.
    """
    field = f.field
    if field.m != 1:
        raise DomainError("the probe requires q = p")
    if k not in cal_i(f.support(), field.p):
        raise DomainError(f"{k} is not an index of the reduction")
    entries = []
    for mi in range(1, field.q ** m_bound):
        m = poly_from_index(field, mi, m_bound)
        collapsed = reduce_qp(f.scale_poly(m)).collapsed[k]
        if isinstance(collapsed, RationalK):
            entries.append(ObstructionEntry(str(m), "rational", str(collapsed)))
            continue
        if collapsed.is_zero_to_floor():
            entries.append(ObstructionEntry(
                str(m), "zero", f"zero down to floor {collapsed.floor}"))
            continue
        report = rationality_probe(collapsed, kappa,
                                   range(2, cf_bound + 1), max_terms=max_terms)
        if report.all_hit:
            entries.append(ObstructionEntry(
                str(m), "cf-match", "small-denominator match at every tested N"))
        elif any(e.status == "miss" for e in report.entries):
            entries.append(ObstructionEntry(str(m), "clear", ""))
        else:
            entries.append(ObstructionEntry(str(m), "inconclusive",
                                            "precision exhausted"))
    return Cor53Report(k, tuple(entries))
