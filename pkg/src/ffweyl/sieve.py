"""Difference-set experiments: the all-monic modulus, congruence-average
sums, and witness searches for polynomial-image differences.

The modulus g_M is the product of every monic polynomial of degree below M
(the sole degree-0 monic is 1 and contributes nothing).  Its degree explodes
quickly, so a squarefree-kernel mode (product of the distinct monic
irreducibles below M) is available; outputs always say which modulus was
used.  Roots are found per prime-power factor by direct enumeration and
recombined by CRT, so square factors need no lifting step.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import (Poly, check_budget, enumerate_GN, gn_size, irreducibles,
                      poly_crt, poly_from_index, roots_mod)
from .errors import BudgetError, DomainError, HypothesisError
from .expsum import CharSum, e_of
from .kinfty import kmul_poly

#: Default cap on deg g_M for the literal product.
GM_DEGREE_BUDGET = 64


@dataclass(frozen=True)
class DenseSet:
    field: object
    N: int
    elems: frozenset

    def __post_init__(self):
        for x in self.elems:
            if x.coeffs and x.deg >= self.N:
                raise DomainError("element outside G_N")

    @classmethod
    def full(cls, field, N):
        return cls(field, N, frozenset(enumerate_GN(field, N)))

    @classmethod
    def from_elems(cls, field, N, elems):
        return cls(field, N, frozenset(elems))

    @classmethod
    def from_residues(cls, field, N, g, residues):
        """All x in G_N congruent mod g to one of the listed residues."""
        rset = {r % g for r in residues}
        return cls(field, N, frozenset(
            x for x in enumerate_GN(field, N) if (x % g) in rset))

    def density(self):
        return Fraction(len(self.elems), gn_size(self.field, self.N))


def density(A):
    """Exact density of A inside its ambient G_N."""
    return A.density()


@dataclass(frozen=True)
class GMBuild:
    modulus: Poly
    root: Poly | None
    factors: tuple        # ((irreducible, exponent), ...) of the modulus
    mode: str             # "literal" | "squarefree"
    reason: str | None    # set when no root exists, naming the failing factor


def _monics_below(field, M):
    for d in range(1, M):
        for i in range(field.q ** d):
            low = poly_from_index(field, i, d).coeffs
            yield Poly(field, list(low) + [0] * (d - len(low)) + [1])


def gm_build(field, M, phi=None, mode="literal", degree_budget=None,
             budget=None):
    """The all-monic modulus below degree M and, given phi, a root mod it.

    M = 1 gives the empty product 1 with root 0.  Roots are resolved factor
    by factor (prime powers included) and merged by CRT; if some factor has
    no root the build reports it instead of a root.
    """
    if M < 1:
        raise DomainError("M must be positive")
    if mode not in ("literal", "squarefree"):
        raise DomainError(f"unknown mode {mode!r}")
    limit = GM_DEGREE_BUDGET if degree_budget is None else degree_budget
    factors = {}
    if mode == "literal":
        for monic in _monics_below(field, M):
            rem = monic
            for d in range(1, monic.deg + 1):
                for l in irreducibles(field, d):
                    while not (rem % l).coeffs:
                        rem = rem // l
                        factors[l] = factors.get(l, 0) + 1
                if rem.deg == 0:
                    break
    else:
        for d in range(1, M):
            for l in irreducibles(field, d):
                factors[l] = 1
    total_deg = sum(l.deg * e for l, e in factors.items())
    if total_deg > limit:
        raise BudgetError(f"deg g_M = {total_deg} exceeds the budget {limit}")
    modulus = field.poly_one
    for l, e in sorted(factors.items(), key=lambda kv: kv[0].code()):
        modulus = modulus * l ** e
    fact = tuple(sorted(factors.items(), key=lambda kv: kv[0].code()))
    if phi is None:
        return GMBuild(modulus, None, fact, mode, None)
    if M == 1:
        return GMBuild(modulus, field.poly_zero, fact, mode, None)
    congruences = []
    for l, e in fact:
        prime_power = l ** e
        found = roots_mod(phi, prime_power, budget=budget)
        if not found:
            return GMBuild(modulus, None, fact, mode,
                           f"no root modulo {prime_power}")
        congruences.append((found[0], prime_power))
    return GMBuild(modulus, poly_crt(congruences), fact, mode, None)


@dataclass(frozen=True)
class TmnResult:
    histogram: CharSum
    normalized: float
    exact_one: bool
    modulus_degree: int
    mode: str


def t_mn(phi, alpha, M, N, field, gm=None, mode="literal", budget=None):
    """Normalized character average of alpha * phi(g_M x + root) over G_N.

    Exactly 1 (all residues 0) whenever alpha is rational with denominator
    dividing g_M; in particular for any monic denominator of degree < M in
    literal mode, since every such polynomial is one of the factors.
    """
    if gm is None:
        gm = gm_build(field, M, phi, mode=mode, budget=budget)
    if gm.root is None:
        raise HypothesisError(f"modulus has no root: {gm.reason}")
    check_budget(field.q ** N, budget, "congruence average")
    exps = sorted(r for r in phi if r >= 1 and not phi[r].is_zero())
    const = phi.get(0, field.poly_zero)
    residues = []
    for x in enumerate_GN(field, N):
        y = gm.modulus * x + gm.root
        val = const
        power = field.poly_one
        last = 0
        for r in exps:
            power = power * y ** (r - last)
            last = r
            val = val + phi[r] * power
        residues.append(e_of(kmul_poly(alpha, val)))
    hist = CharSum.from_residues(field.p, residues)
    exact_one = hist.is_full() and hist.full_residue() == 0
    return TmnResult(hist, hist.normalized(), exact_one, gm.modulus.deg, gm.mode)


@dataclass(frozen=True)
class IntersectiveWitness:
    a: Poly
    a_prime: Poly
    x: Poly
    value: Poly

    def verify(self):
        return (self.a - self.a_prime == self.value
                and not self.value.is_zero())


def difference_search(A, phi, x_bound, budget=None):
    """First (a, a', x) with a - a' = phi(x) != 0, or None within the bound.

    Scan order is deterministic: x in enumeration order, then a by code.
    A None is a bounded-search report, not a disproof.
    """
    if len(A.elems) < 2:
        raise DomainError("the dense set needs at least two elements")
    field = A.field
    check_budget(gn_size(field, x_bound), budget, "difference search")
    elems = sorted(A.elems, key=lambda v: v.code())
    elem_set = A.elems
    exps = sorted(r for r in phi if r >= 1 and not phi[r].is_zero())
    const = phi.get(0, field.poly_zero)
    for x in enumerate_GN(field, x_bound):
        val = const
        for r in exps:
            val = val + phi[r] * x ** r
        if val.is_zero():
            continue
        for a in elems:
            a_prime = a - val
            if a_prime in elem_set:
                return IntersectiveWitness(a, a_prime, x, val)
    return None
