"""Exact character sums over G_N, stored as integer histograms.

The additive character takes values in the p-th roots of unity, so a sum of
q^N character values is represented exactly by p nonnegative counts, one per
residue class of the character exponent.  Floats appear only when a magnitude
is finally requested.  The zero test "all counts equal" is exact because p is
prime (the minimal polynomial of a primitive p-th root of unity over Q is
1 + x + ... + x^{p-1}).

Two independent evaluation paths compute the per-point character residues:

* a vectorized path that tabulates the coefficient coordinates of x^r for a
  whole index block and contracts them with precomputed weight vectors, and
* a direct path that walks points one by one through plain field arithmetic.

Both are exact integer computations and must agree; the tests enforce this.
"""
from __future__ import annotations

import cmath
import json
from collections import OrderedDict
from dataclasses import dataclass

import numpy as np

from .algebra import Field, check_budget, parse_poly, poly_from_index
from .errors import BudgetError, DomainError, PrecisionError
from .kinfty import (RationalK, TruncSeries, frac_ord_vs, kadd, kernel_element,
                     kmul_poly, parse_kelem)

#: Largest q^N for which full coefficient tables are cached.
TABLE_LIMIT = 1 << 16

#: Row-block size for streaming evaluation of larger ranges.
BLOCK = 1 << 16


@dataclass(frozen=True)
class CharSum:
    """A sum of p-th roots of unity as per-residue counts."""

    p: int
    counts: tuple

    def __post_init__(self):
        if len(self.counts) != self.p:
            raise DomainError("count vector length must equal p")

    @classmethod
    def from_residues(cls, p, residues):
        counts = np.bincount(np.asarray(residues, dtype=np.int64), minlength=p)
        return cls(p, tuple(int(c) for c in counts))

    @property
    def total(self):
        return sum(self.counts)

    def is_zero(self):
        """Exact test for the complex sum being 0 (requires p prime)."""
        return self.total > 0 and len(set(self.counts)) == 1

    def is_full(self):
        """Exact test for |sum| equal to the number of terms."""
        return self.total > 0 and max(self.counts) == self.total

    def full_residue(self):
        if not self.is_full():
            return None
        return max(range(self.p), key=lambda r: self.counts[r])

    def magnitude(self):
        z = sum(c * cmath.exp(2j * cmath.pi * r / self.p)
                for r, c in enumerate(self.counts))
        return abs(z)

    def normalized(self):
        return self.magnitude() / self.total

    def __add__(self, other):
        if not isinstance(other, CharSum) or other.p != self.p:
            raise DomainError("cannot merge histograms of different p")
        return CharSum(self.p, tuple(a + b for a, b in zip(self.counts, other.counts)))

    def scale(self, k):
        return CharSum(self.p, tuple(k * c for c in self.counts))


def e_of(alpha):
    """Character residue r mod p of alpha, encoding exp(2*pi*i*r/p)."""
    return alpha.field.char_residue(alpha.res())


class ExpPoly:
    """A sparse polynomial sum of coeff_r * u^r with coefficients in K.

    Exponents are positive except an optional constant term at 0; exactly
    zero (rational) coefficients are dropped at construction.
    """

    __slots__ = ("field", "terms")

    def __init__(self, field, coeff_map):
        terms = []
        for r in sorted(coeff_map):
            if r < 0:
                raise DomainError("negative exponent in an ExpPoly")
            c = coeff_map[r]
            if c.field != field:
                raise DomainError("coefficient from the wrong field")
            if isinstance(c, RationalK) and c.is_zero():
                continue
            terms.append((r, c))
        self.field = field
        self.terms = tuple(terms)

    def support(self):
        return frozenset(r for r, _ in self.terms if r >= 1)

    def coeff(self, r):
        for e, c in self.terms:
            if e == r:
                return c
        return RationalK(self.field.poly_zero)

    def constant(self):
        return self.coeff(0)

    def max_exp(self):
        return max((r for r, _ in self.terms), default=0)

    def scale_poly(self, m):
        """The polynomial m*f, every coefficient multiplied by m."""
        return ExpPoly(self.field, {r: kmul_poly(c, m) for r, c in self.terms})

    def evaluate(self, x):
        """f(x) as an element of K, full precision bookkeeping included."""
        acc = RationalK(self.field.poly_zero)
        for r, c in self.terms:
            acc = kadd(acc, kmul_poly(c, x ** r) if r else c)
        return acc

    def __eq__(self, other):
        return (isinstance(other, ExpPoly) and other.field == self.field
                and other.terms == self.terms)

    def __hash__(self):
        return hash(self.terms)

    def __repr__(self):
        inner = ", ".join(f"{r}: {c}" for r, c in self.terms)
        return f"ExpPoly({{{inner}}})"

    # -- JSON wire form -----------------------------------------------------

    def to_json(self):
        out = []
        for r, c in self.terms:
            if isinstance(c, RationalK):
                coeff = {"rat": [str(c.num), str(c.den)]}
            else:
                coeff = {"series": str(c), "floor": c.floor}
            out.append({"exp": r, "coeff": coeff})
        return {"field": self.field.spec_string(), "terms": out}

    @classmethod
    def from_json(cls, obj, field=None, default_seed=0):
        if field is None:
            field = Field.parse(obj["field"])
        coeffs = {}
        for term in obj["terms"]:
            r = int(term["exp"])
            spec = term["coeff"]
            if "rat" in spec:
                num, den = spec["rat"]
                c = RationalK(parse_poly(field, num), parse_poly(field, den))
            elif "series" in spec:
                c = parse_kelem(field, spec["series"])
                if isinstance(c, RationalK):
                    c = c.expand(int(spec["floor"]))
                elif "floor" in spec and int(spec["floor"]) != c.floor:
                    raise DomainError("series floor disagrees with its O-term")
            elif "kernel" in spec:
                seed = int(spec["kernel"].get("seed", default_seed))
                c = kernel_element(field, int(spec["kernel"]["floor"]), seed)
            else:
                raise DomainError(f"unknown coefficient form {sorted(spec)}")
            if r in coeffs:
                raise DomainError(f"duplicate exponent {r}")
            coeffs[r] = c
        return cls(field, coeffs)

    @classmethod
    def parse(cls, field_or_text, text=None, default_seed=0):
        if text is None:
            obj = json.loads(field_or_text)
            return cls.from_json(obj, default_seed=default_seed)
        obj = json.loads(text)
        return cls.from_json(obj, field=field_or_text, default_seed=default_seed)


# ---------------------------------------------------------------------------
# Digit vectors and weight construction.

def required_floor(r, N, depth=1):
    """Deepest digit position read from the coefficient of u^r over G_N."""
    return -(depth + r * max(N - 1, 0))


def _term_digit_vector(coeff, r, N, depth):
    """Digit codes of the coefficient at -1, -2, ..., down to required_floor."""
    need = -required_floor(r, N, depth)
    if isinstance(coeff, TruncSeries) and coeff.floor > -need:
        raise PrecisionError(
            f"coefficient of u^{r} has floor {coeff.floor}; needs {-need} "
            f"for depth-{depth} evaluation over G_{N}")
    return coeff.digits(-need, -1)[::-1]  # index s holds the digit at -(1+s)


def _basis_codes(field):
    return [field.p ** i for i in range(field.m)]


def _trace_weights(field, dvec, offset, L):
    """w[j*m + i] = trace(basis_i * d_{offset+j}); contracts coords to residues."""
    basis = _basis_codes(field)
    w = np.empty(L * field.m, dtype=np.int64)
    for j in range(L):
        d = dvec[offset + j]
        for i, b in enumerate(basis):
            w[j * field.m + i] = field.trace(field.mul(b, d))
    return w


def _coord_weights(field, dvec, offset, L, coord):
    """Like _trace_weights but projecting the product onto one coordinate."""
    basis = _basis_codes(field)
    w = np.empty(L * field.m, dtype=np.int64)
    for j in range(L):
        d = dvec[offset + j]
        for i, b in enumerate(basis):
            w[j * field.m + i] = field.coords(field.mul(b, d))[coord]
    return w


# ---------------------------------------------------------------------------
# Coefficient tables: coordinates of the coefficients of x^r per index block.

_table_cache = OrderedDict()
_TABLE_CACHE_MAX = 12


def _field_key(field):
    return (field.p, field.m, field.modulus)


def _power_len(r, N):
    return r * max(N - 1, 0) + 1


def _digit_block_m1(field, N, lo, hi):
    idx = np.arange(lo, hi, dtype=np.int64)
    q = field.q
    if N == 0:
        return np.zeros((hi - lo, 0), dtype=np.int8)
    cols = [((idx // q ** j) % q).astype(np.int8) for j in range(N)]
    return np.stack(cols, axis=1)


def _power_blocks(field, rs, N, lo, hi):
    """Coefficient coordinate tables for x^r, r in rs, as (rows, L_r*m) int8."""
    rs = sorted(set(r for r in rs if r >= 1))
    out = {}
    if not rs:
        return out
    if N == 0:
        # G_0 = {0}: every positive power is the zero polynomial
        return {r: np.zeros((hi - lo, _power_len(r, N) * field.m), dtype=np.int8)
                for r in rs}
    if field.m == 1:
        p = field.p
        T1 = _digit_block_m1(field, N, lo, hi)
        prev = T1.astype(np.int32)
        if 1 in rs:
            out[1] = T1
        for r in range(2, rs[-1] + 1):
            nxt = np.zeros((hi - lo, _power_len(r, N)), dtype=np.int32)
            for j in range(min(N, T1.shape[1])):
                width = prev.shape[1]
                nxt[:, j:j + width] += prev * T1[:, j:j + 1].astype(np.int32)
            nxt %= p
            prev = nxt
            if r in rs:
                out[r] = nxt.astype(np.int8)
        return out
    # general q: fill per point; only sensible at cached-table scale
    for r in rs:
        out[r] = np.zeros((hi - lo, _power_len(r, N) * field.m), dtype=np.int8)
    for row, i in enumerate(range(lo, hi)):
        x = poly_from_index(field, i, N)
        powers = {}
        acc = field.poly_one
        for r in range(1, rs[-1] + 1):
            acc = acc * x
            if r in out:
                powers[r] = acc
        for r, xr in powers.items():
            tbl = out[r]
            for j, c in enumerate(xr.coeffs):
                for i2, cv in enumerate(field.coords(c)):
                    tbl[row, j * field.m + i2] = cv
    return out


def _tables_for(field, rs, N, lo, hi):
    total = field.q ** N
    if total <= TABLE_LIMIT:
        key = _field_key(field)
        missing = [r for r in rs if (key, N, r) not in _table_cache]
        if missing:
            built = _power_blocks(field, missing, N, 0, total)
            for r, tbl in built.items():
                _table_cache[(key, N, r)] = tbl
        out = {}
        for r in rs:
            _table_cache.move_to_end((key, N, r))
            out[r] = _table_cache[(key, N, r)][lo:hi]
        while len(_table_cache) > _TABLE_CACHE_MAX:
            _table_cache.popitem(last=False)
        return out
    return _power_blocks(field, rs, N, lo, hi)


# ---------------------------------------------------------------------------
# Residues of the character at every point of an index range.

def _residues_table(f, N, lo, hi, depth_index=0):
    field = f.field
    p = field.p
    acc = np.zeros(hi - lo, dtype=np.int64)
    rs = [r for r, _ in f.terms if r >= 1]
    tables = _tables_for(field, rs, N, lo, hi)
    for r, coeff in f.terms:
        dvec = _term_digit_vector(coeff, r, N, depth_index + 1)
        if r == 0:
            acc += field.trace(dvec[depth_index])
            continue
        w = _trace_weights(field, dvec, depth_index, _power_len(r, N))
        acc += tables[r] @ w
    return acc % p


def _residues_direct(f, N, lo, hi, depth_index=0):
    field = f.field
    p = field.p
    terms = []
    const = 0
    for r, coeff in f.terms:
        dvec = _term_digit_vector(coeff, r, N, depth_index + 1)
        if r == 0:
            const = field.trace(dvec[depth_index])
        else:
            terms.append((r, dvec))
    out = np.empty(hi - lo, dtype=np.int64)
    mul, trace = field.mul, field.trace
    for row, i in enumerate(range(lo, hi)):
        x = poly_from_index(field, i, N)
        acc = const
        powers = {}
        for r, dvec in terms:
            xr = powers.get(r)
            if xr is None:
                xr = x ** r
                powers[r] = xr
            for j, c in enumerate(xr.coeffs):
                if c:
                    acc += trace(mul(c, dvec[depth_index + j]))
        out[row] = acc % p
    return out


def weyl_residues(f, N, lo=0, hi=None, method=None, budget=None):
    """Character residues of f(x) for x over an index range of G_N (exact)."""
    field = f.field
    total = field.q ** N
    check_budget(total, budget, "character sum")
    if hi is None:
        hi = total
    if not (0 <= lo <= hi <= total):
        raise DomainError("bad index range")
    if method is None:
        method = "table" if (field.m == 1 or total <= TABLE_LIMIT) else "direct"
    if method not in ("table", "direct"):
        raise DomainError(f"unknown evaluation method {method!r}")
    if method == "direct":
        return _residues_direct(f, N, lo, hi)
    if field.m > 1 and total > TABLE_LIMIT:
        raise BudgetError("coefficient tables over extension fields are "
                          "limited to cached-table scale")
    out = np.empty(hi - lo, dtype=np.int64)
    pos = lo
    while pos < hi:
        end = min(pos + BLOCK, hi)
        out[pos - lo:end - lo] = _residues_table(f, N, pos, end)
        pos = end
    return out


def weyl_sum(f, N, lo=0, hi=None, method=None, budget=None):
    """The exact histogram of character values of f over (a slice of) G_N."""
    res = weyl_residues(f, N, lo=lo, hi=hi, method=method, budget=budget)
    return CharSum.from_residues(f.field.p, res)


def twisted_sum(f, m, N, lo=0, hi=None, method=None, budget=None):
    """weyl_sum of m*f; the twist scales every coefficient by m."""
    return weyl_sum(f.scale_poly(m), N, lo=lo, hi=hi, method=method, budget=budget)


def fractional_digit_rows(f, N, depth, lo=0, hi=None, method=None, budget=None):
    """Per-point leading fractional digits (c_1, ..., c_depth) of f(x).

    Row order matches the enumeration of G_N; digit i is the coefficient of
    t^-i, as a field element code.
    """
    if depth < 1:
        raise DomainError("depth must be at least 1")
    field = f.field
    total = field.q ** N
    check_budget(total, budget, "cylinder count")
    if hi is None:
        hi = total
    if method is None:
        method = "table" if (field.m == 1 or total <= TABLE_LIMIT) else "direct"
    if method == "direct" or (field.m > 1 and total > TABLE_LIMIT):
        return _digit_rows_direct(f, N, depth, lo, hi)
    cols = []
    for i in range(depth):
        cols.append(_digit_col_table(f, N, i, lo, hi))
    stacked = np.stack(cols, axis=1)
    return [tuple(int(v) for v in row) for row in stacked]


def _digit_col_table(f, N, depth_index, lo, hi):
    field = f.field
    p, m = field.p, field.m
    rs = [r for r, _ in f.terms if r >= 1]
    coords = [np.zeros(hi - lo, dtype=np.int64) for _ in range(m)]
    pos = lo
    while pos < hi:
        end = min(pos + BLOCK, hi)
        tables = _tables_for(field, rs, N, pos, end)
        for r, coeff in f.terms:
            dvec = _term_digit_vector(coeff, r, N, depth_index + 1)
            if r == 0:
                d = dvec[depth_index]
                for c in range(m):
                    coords[c][pos - lo:end - lo] += field.coords(d)[c]
                continue
            for c in range(m):
                w = _coord_weights(field, dvec, depth_index, _power_len(r, N), c)
                coords[c][pos - lo:end - lo] += tables[r] @ w
        pos = end
    codes = np.zeros(hi - lo, dtype=np.int64)
    for c in range(m - 1, -1, -1):
        codes = codes * p + (coords[c] % p)
    return codes


def _digit_rows_direct(f, N, depth, lo, hi):
    field = f.field
    terms = []
    for r, coeff in f.terms:
        terms.append((r, _term_digit_vector(coeff, r, N, depth)))
    add, mul = field.add, field.mul
    rows = []
    for i in range(lo, hi):
        x = poly_from_index(field, i, N)
        powers = {r: x ** r for r, _ in terms if r >= 1}
        row = []
        for di in range(depth):
            acc = 0
            for r, dvec in terms:
                if r == 0:
                    acc = add(acc, dvec[di])
                    continue
                for j, c in enumerate(powers[r].coeffs):
                    if c:
                        acc = add(acc, mul(c, dvec[di + j]))
            row.append(acc)
        rows.append(tuple(row))
    return rows


def orthogonality(alpha, N):
    """'full' when the linear sum collapses to q^N, 'zero' otherwise.

    Decided from the certified order of the fractional part of alpha; the
    test suite cross-checks against weyl_sum of alpha*u.
    """
    side = frac_ord_vs(alpha, N)
    return "full" if side == "below" else "zero"
