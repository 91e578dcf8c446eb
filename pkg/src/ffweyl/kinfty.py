"""Elements of F_q((1/t)): exact rationals and truncated Laurent series.

A RationalK is an exact fraction num/den in lowest terms with monic
denominator; every digit of its expansion is available on demand.  A
TruncSeries knows its digits from some top exponent down to an explicit
precision floor.  Digits below the floor are unknown, not zero: operations
propagate the floor pessimistically and anything that would have to read an
unknown digit raises PrecisionError rather than zero-filling.

The floor convention: the digit at the floor exponent itself is stored and
trusted; unknowns start strictly below it.  In text form the floor is the
exponent of the O-term, as in ``t^2 + 1 + 2*t^-1 + O(t^-12)``.
"""
from __future__ import annotations

import random
from fractions import Fraction

from .algebra import NEG_INF, Poly, _format_terms, parse_poly, parse_terms, poly_gcd
from .errors import DomainError, PrecisionError


class RationalK:
    """An exact element num/den of F_q(t), reduced, with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if den is None:
            den = num.field.poly_one
        if den.is_zero():
            raise DomainError("rational with zero denominator")
        g = poly_gcd(num, den)
        if g.deg is not NEG_INF and g.deg > 0:
            num, den = num // g, den // g
        c = den.field.inv(den.lead())
        if c != 1:
            num, den = num.scale(c), den.scale(c)
        self.num = num
        self.den = den

    @property
    def field(self):
        return self.den.field

    def is_zero(self):
        return self.num.is_zero()

    def ord(self):
        if self.num.is_zero():
            return NEG_INF
        return self.num.deg - self.den.deg

    def ord_bound(self):
        return ("exact", self.ord())

    def poly_part(self):
        return self.num // self.den

    def frac(self):
        return RationalK(self.num % self.den, self.den)

    def digit(self, e):
        if e >= 0:
            return self.poly_part().coeff(e)
        return self.digits(e, e)[0]

    def digits(self, lo, hi):
        """Digit codes at exponents lo..hi inclusive, ascending."""
        if hi < lo:
            return []
        out = {}
        if hi >= 0:
            pp = self.num // self.den
            for e in range(max(lo, 0), hi + 1):
                out[e] = pp.coeff(e)
        if lo < 0:
            D = self.den.deg
            s = self.num % self.den
            for j in range(1, -lo + 1):
                e = -j
                if e <= hi:
                    out[e] = s.coeff(D - 1)
                s = s.shift(1) % self.den
        return [out.get(e, 0) for e in range(lo, hi + 1)]

    def res(self):
        return self.digit(-1)

    def expand(self, floor):
        """Truncated-series view down to the given floor (exact digits)."""
        if self.num.is_zero():
            return TruncSeries(self.field, floor, ())
        if floor > self.ord():
            raise DomainError("expansion floor above the leading exponent")
        return TruncSeries(self.field, floor, self.digits(floor, self.ord()))

    def __eq__(self, other):
        return (isinstance(other, RationalK)
                and self.num == other.num and self.den == other.den)

    def __hash__(self):
        return hash((self.num, self.den))

    def __neg__(self):
        return RationalK(-self.num, self.den)

    def __add__(self, other):
        return kadd(self, other)

    def __sub__(self, other):
        return kadd(self, kneg(other))

    def __str__(self):
        if self.den.deg == 0:
            return str(self.num)
        return f"{self.num} / {self.den}"

    def __repr__(self):
        return f"RationalK({str(self)!r})"


class TruncSeries:
    """A Laurent series known from its top exponent down to ``floor``."""

    __slots__ = ("field", "floor", "coeffs")

    def __init__(self, field, floor, coeffs):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        for c in coeffs:
            if not (0 <= c < field.q):
                raise DomainError("series digit out of range")
        self.field = field
        self.floor = floor
        self.coeffs = tuple(coeffs)

    @classmethod
    def from_digits(cls, field, floor, digit_map):
        low = {e: c for e, c in digit_map.items() if c}
        if low and min(low) < floor:
            raise DomainError("digit below the stated floor")
        hi = max(low, default=floor - 1)
        return cls(field, floor, [digit_map.get(e, 0) for e in range(floor, hi + 1)])

    @property
    def top(self):
        return self.floor + len(self.coeffs) - 1

    def is_zero_to_floor(self):
        return not self.coeffs

    def ord(self):
        if not self.coeffs:
            raise PrecisionError(
                f"series is zero down to its floor {self.floor}; order not certifiable")
        return self.top

    def ord_bound(self):
        if self.coeffs:
            return ("exact", self.top)
        return ("below", self.floor)

    def digit(self, e):
        if e < self.floor:
            raise PrecisionError(f"digit at t^{e} is below the floor {self.floor}")
        if e > self.top:
            return 0
        return self.coeffs[e - self.floor]

    def digits(self, lo, hi):
        if lo < self.floor:
            raise PrecisionError(f"digits below floor {self.floor} requested")
        return [self.digit(e) for e in range(lo, hi + 1)]

    def poly_part(self):
        if self.floor > 0:
            raise PrecisionError("floor above 0; polynomial part unknown")
        return Poly(self.field, [self.digit(e) for e in range(0, max(self.top, -1) + 1)])

    def frac(self):
        if self.floor > -1:
            raise PrecisionError("floor above -1; fractional part unknown")
        return TruncSeries(self.field, self.floor,
                           self.coeffs[:max(-1 - self.floor + 1, 0)])

    def res(self):
        return self.digit(-1)

    def __eq__(self, other):
        return (isinstance(other, TruncSeries) and self.field == other.field
                and self.floor == other.floor and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.floor, self.coeffs))

    def __neg__(self):
        fn = self.field._neg
        return TruncSeries(self.field, self.floor, [fn[c] for c in self.coeffs])

    def __add__(self, other):
        return kadd(self, other)

    def __sub__(self, other):
        return kadd(self, kneg(other))

    def __str__(self):
        terms = {self.floor + i: c for i, c in enumerate(self.coeffs) if c}
        otail = f"O(t^{self.floor})"
        if not terms:
            return otail
        return f"{_format_terms(self.field, terms)} + {otail}"

    def __repr__(self):
        return f"TruncSeries({str(self)!r})"


# ---------------------------------------------------------------------------
# Mixed arithmetic.  KElem means RationalK | TruncSeries throughout.

def field_of(alpha):
    return alpha.field


def kneg(alpha):
    return -alpha


def kadd(a, b):
    if isinstance(a, RationalK) and isinstance(b, RationalK):
        return RationalK(a.num * b.den + b.num * a.den, a.den * b.den)
    if isinstance(a, RationalK):
        a, b = b, a
    # a is a series
    field = a.field
    floor = a.floor
    if isinstance(b, TruncSeries):
        floor = max(floor, b.floor)
    tops = []
    for x in (a, b):
        kind, v = x.ord_bound()
        if kind == "exact" and v is not NEG_INF:
            tops.append(v)
    hi = max(tops, default=floor - 1)
    fa = field._add
    out = []
    for e in range(floor, hi + 1):
        out.append(fa[a.digit(e)][b.digit(e)])
    return TruncSeries(field, floor, out)


def kmul_scalar(alpha, c):
    """Multiply by the field element with code c."""
    if c == 0:
        return RationalK(alpha.field.poly_zero)
    if isinstance(alpha, RationalK):
        return RationalK(alpha.num.scale(c), alpha.den)
    row = alpha.field._mul[c]
    return TruncSeries(alpha.field, alpha.floor, [row[x] for x in alpha.coeffs])


def kmul_poly(alpha, h):
    """Multiply by a polynomial; for a series the floor rises by deg h."""
    if h.is_zero():
        return RationalK(alpha.field.poly_zero)
    if isinstance(alpha, RationalK):
        return RationalK(alpha.num * h, alpha.den)
    field = alpha.field
    floor = alpha.floor + h.deg
    if not alpha.coeffs:
        return TruncSeries(field, floor, ())
    fa, fm = field._add, field._mul
    lo, hi = floor, alpha.top + h.deg
    acc = {e: 0 for e in range(lo, hi + 1)}
    for i, hc in enumerate(h.coeffs):
        if not hc:
            continue
        row = fm[hc]
        for j, ac in enumerate(alpha.coeffs):
            if ac:
                e = alpha.floor + j + i
                if e >= lo:
                    acc[e] = fa[acc[e]][row[ac]]
    return TruncSeries(field, floor, [acc[e] for e in range(lo, hi + 1)])


def kmul(a, b):
    """Full product; exact when both factors are rational."""
    if isinstance(a, RationalK) and isinstance(b, RationalK):
        return RationalK(a.num * b.num, a.den * b.den)
    if isinstance(a, RationalK):
        a, b = b, a
    field = a.field
    if isinstance(b, RationalK):
        if b.is_zero():
            return RationalK(field.poly_zero)
        floor = a.floor + b.ord()
        hi_a = a.top if a.coeffs else a.floor - 1
        hi = hi_a + b.ord()
        b_lo = floor - hi_a if a.coeffs else 0
        b_digits = b.digits(b_lo, b.ord()) if a.coeffs else []
        digit_b = lambda e: (b_digits[e - b_lo] if b_lo <= e <= b.ord() else 0)
        window_b = range(b_lo, b.ord() + 1)
    else:
        ka, va = a.ord_bound()
        kb, vb = b.ord_bound()
        bound_a = va if ka == "exact" else a.floor - 1
        bound_b = vb if kb == "exact" else b.floor - 1
        if bound_a is NEG_INF or bound_b is NEG_INF:
            # only possible for an exactly-zero rational; series never certify it
            return RationalK(field.poly_zero)
        floor = max(a.floor + bound_b, b.floor + bound_a)
        hi = bound_a + bound_b
        digit_b = b.digit
        window_b = range(b.floor, (b.top if b.coeffs else b.floor - 1) + 1)
    if hi < floor:
        return TruncSeries(field, floor, ())
    fa, fm = field._add, field._mul
    acc = {e: 0 for e in range(floor, hi + 1)}
    window_a = range(a.floor, (a.top if a.coeffs else a.floor - 1) + 1)
    for i in window_a:
        ai = a.digit(i)
        if not ai:
            continue
        row = fm[ai]
        for j in window_b:
            e = i + j
            if floor <= e <= hi:
                bj = digit_b(j)
                if bj:
                    acc[e] = fa[acc[e]][row[bj]]
    return TruncSeries(field, floor, [acc[e] for e in range(floor, hi + 1)])


def truncate(alpha, floor):
    """Forget digits below the given floor (rationals expand exactly)."""
    if isinstance(alpha, RationalK):
        return alpha.expand(floor)
    if floor < alpha.floor:
        raise PrecisionError("cannot lower a floor; digits there were never known")
    return TruncSeries(alpha.field, floor,
                       alpha.coeffs[floor - alpha.floor:] if alpha.coeffs else ())


def expand_rational(alpha, floor):
    """Truncated-series view of an exact rational down to the given floor."""
    return alpha.expand(floor)


def ord_of(alpha):
    return alpha.ord()


def ord_norm(alpha):
    """(ord, |alpha|) with |alpha| = q^ord as an exact Fraction (0 for ord -inf)."""
    o = alpha.ord()
    if o is NEG_INF:
        return o, Fraction(0)
    q = alpha.field.q
    norm = Fraction(q) ** o
    return o, norm


def frac_res(alpha):
    """(fractional part, residue code) of alpha."""
    return alpha.frac(), alpha.res()


def frac_ord_vs(alpha, N):
    """Compare ord{alpha} with -N; returns 'below' or 'at_or_above'.

    Certified from available digits: any nonzero digit in [-N, -1] settles
    'at_or_above'; all-zero known digits covering [-N, -1] settle 'below'.
    """
    if isinstance(alpha, RationalK):
        o = alpha.frac().ord()
        return "below" if (o is NEG_INF or o < -N) else "at_or_above"
    if alpha.floor > -1:
        raise PrecisionError("fractional digits unknown")
    for e in range(-1, max(alpha.floor, -N) - 1, -1):
        if alpha.digit(e):
            return "at_or_above"
    if alpha.floor <= -N:
        return "below"
    raise PrecisionError(
        f"digits known only to {alpha.floor}; cannot compare ord of the "
        f"fractional part with {-N}")


# ---------------------------------------------------------------------------
# The digit-sampling map T(alpha) = a_{-1} t^-1 + a_{-p-1} t^-2 + ...

def tmap(alpha, v=1):
    """v-fold application of the digit-sampling map (exact on rationals)."""
    if v < 0:
        raise DomainError("negative iteration count")
    out = alpha
    for _ in range(v):
        if isinstance(out, RationalK):
            out = _tmap_rational(out)
        else:
            out = _tmap_series(out)
    return out


def _tmap_rational(a):
    field = a.field
    p = field.p
    den = a.den
    b = a.num % den
    if b.is_zero():
        return RationalK(field.poly_zero)
    D = den.deg
    u = field.poly_t.mod_pow(p, den)
    seen = {}
    digits = []
    s = b
    while s not in seen:
        seen[s] = len(digits)
        digits.append(s.coeff(D - 1))
        s = (s * u) % den
    mu = seen[s]
    lam = len(digits) - mu
    hc = [0] * mu
    for i in range(1, mu + 1):
        hc[mu - i] = digits[i - 1]
    rc = [0] * lam
    for j in range(1, lam + 1):
        rc[lam - j] = digits[mu + j - 1]
    head = Poly(field, hc)
    rep = Poly(field, rc)
    t_lam = field.poly_one.shift(lam) - field.poly_one
    return RationalK(head * t_lam + rep, field.poly_one.shift(mu) * t_lam)


def _tmap_series(a):
    field = a.field
    p = field.p
    if a.floor > -1:
        raise PrecisionError("no sampled digit is above the floor")
    J = (-a.floor - 1) // p + 1
    out = {-j: a.digit(-((j - 1) * p + 1)) for j in range(1, J + 1)}
    return TruncSeries.from_digits(field, -J, out)


def kernel_element(field, floor, seed):
    """A seeded series with zeros at every sampled position, so tmap gives 0.

    Reproducible: equal seeds give identical digits.  The unsampled digits
    are uniform over F_q.
    """
    if floor > -2:
        raise DomainError("kernel elements need floor <= -2 to be nontrivial")
    rng = random.Random(seed)
    p = field.p
    out = {}
    for e in range(-1, floor - 1, -1):
        out[e] = 0 if (-e - 1) % p == 0 else rng.randrange(field.q)
    return TruncSeries.from_digits(field, floor, out)


def experiment_floor(support, N, depth=1, slack=8):
    """Default series floor for sums over G_N: deep enough for residue-exact
    evaluation at every support exponent, plus margin."""
    r_max = max(support, default=0)
    return -(depth + r_max * (N - 1)) - slack


# ---------------------------------------------------------------------------
# Text form: rationals as 'num / den', series with a trailing O-term.

def parse_kelem(field, s):
    s = s.strip()
    if "/" in s:
        num_s, den_s = s.split("/", 1)
        return RationalK(parse_poly(field, num_s), parse_poly(field, den_s))
    if "O(" in s:
        body, otail = s.rsplit("O(", 1)
        otail = otail.strip()
        if not otail.endswith(")"):
            raise DomainError("unterminated O-term")
        inner = otail[:-1].strip()
        if inner in ("1", "t^0"):
            floor = 0
        else:
            if not inner.startswith("t^"):
                raise DomainError(f"bad O-term {inner!r}")
            floor = int(inner[2:])
        body = body.strip()
        if body.endswith("+"):
            body = body[:-1].strip()
        terms = parse_terms(field, body) if body else {}
        return TruncSeries.from_digits(field, floor, terms)
    return RationalK(parse_poly(field, s))


def format_kelem(alpha):
    return str(alpha)
