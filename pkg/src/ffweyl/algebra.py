"""Exact arithmetic in F_p, F_q = F_{p^m}, and the polynomial ring F_q[t].

Field elements are integer codes in [0, q): the base-p digits of a code are
the coordinates of the element in the power basis 1, x, ..., x^{m-1} of the
defining modulus, so the codes 0..p-1 form the prime subfield and for q = p
an element is simply its residue.  Polynomials in t are immutable tuples of
codes, constant term first, trailing zeros stripped; the zero polynomial is
the empty tuple.  Its degree is NEG_INF, a float marker that orders below
every integer degree and can never collide with one.
"""
from __future__ import annotations

import re

from .errors import BudgetError, DomainError

NEG_INF = float("-inf")

#: Default cap on q^N-style enumerations.
DEFAULT_BUDGET = 1 << 24

#: Field sizes the package is validated for (desk scale).
SUPPORTED_Q = frozenset({2, 3, 4, 5, 7, 8, 9})


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# Little helpers for polynomials over F_p (plain coefficient lists, low->high).
# Only used to set up a field modulus; everything else goes through Poly.

def _fp_trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _fp_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _fp_trim(out)


def _fp_divmod(a, b, p):
    if not b:
        raise DomainError("division by the zero polynomial")
    r = list(a)
    q = [0] * max(len(a) - len(b) + 1, 0)
    inv_lead = pow(b[-1], p - 2, p)
    while len(r) >= len(b):
        c = (r[-1] * inv_lead) % p
        k = len(r) - len(b)
        q[k] = c
        for j, bj in enumerate(b):
            r[k + j] = (r[k + j] - c * bj) % p
        _fp_trim(r)
    return _fp_trim(q), r


def _fp_irreducible(c, p):
    # c monic of degree >= 1; trial division by monic polynomials of
    # degree up to deg/2 is plenty at this scale.
    deg = len(c) - 1
    for d in range(1, deg // 2 + 1):
        for code in range(p ** d):
            div = _digits(code, p, d) + [1]
            if not _fp_divmod(c, div, p)[1]:
                return False
    return True


def _digits(n, base, width):
    out = []
    for _ in range(width):
        n, r = divmod(n, base)
        out.append(r)
    return out


def _smallest_modulus(p, m):
    # Smallest monic irreducible of degree m, coefficient codes compared as
    # base-p integers with the constant term least significant.
    for code in range(p ** m):
        c = _digits(code, p, m) + [1]
        if _fp_irreducible(c, p):
            return tuple(c)
    raise DomainError(f"no irreducible modulus of degree {m} over F_{p}")


class Field:
    """The finite field F_{p^m} with dense element tables.

    Instances are immutable and safe to share; all element operations are
    table lookups plus integer arithmetic.
    """

    __slots__ = ("p", "m", "q", "modulus", "_mul", "_add", "_neg", "_inv",
                 "_trace", "poly_zero", "poly_one", "poly_t", "_irr_cache")

    def __init__(self, p, m=1, modulus=None):
        if not _is_prime(p):
            raise DomainError(f"characteristic {p} is not prime")
        if m < 1:
            raise DomainError("extension degree must be positive")
        q = p ** m
        if q not in SUPPORTED_Q:
            raise DomainError(f"q = {q} outside the supported range {sorted(SUPPORTED_Q)}")
        self.p = p
        self.m = m
        self.q = q
        if m == 1:
            if modulus is not None:
                raise DomainError("prime fields take no modulus")
            self.modulus = None
        else:
            if modulus is None:
                modulus = _smallest_modulus(p, m)
            modulus = tuple(c % p for c in modulus)
            if len(modulus) != m + 1 or modulus[-1] != 1:
                raise DomainError("modulus must be monic of degree m")
            if not _fp_irreducible(list(modulus), p):
                raise DomainError("modulus is reducible")
            self.modulus = modulus
        self._build_tables()
        self.poly_zero = Poly(self, ())
        self.poly_one = Poly(self, (1,))
        self.poly_t = Poly(self, (0, 1))
        self._irr_cache = {}

    def _build_tables(self):
        p, m, q = self.p, self.m, self.q
        if m == 1:
            self._add = [[(a + b) % p for b in range(p)] for a in range(p)]
            self._mul = [[(a * b) % p for b in range(p)] for a in range(p)]
            self._neg = [(-a) % p for a in range(p)]
            self._trace = list(range(p))
        else:
            mod = list(self.modulus)
            self._add = [[self._encode([(x + y) % p for x, y in
                                        zip(_digits(a, p, m), _digits(b, p, m))])
                          for b in range(q)] for a in range(q)]
            self._neg = [self._encode([(-x) % p for x in _digits(a, p, m)])
                         for a in range(q)]
            mul = []
            for a in range(q):
                row = []
                ca = _fp_trim(_digits(a, p, m))
                for b in range(q):
                    cb = _fp_trim(_digits(b, p, m))
                    prod = _fp_divmod(_fp_mul(ca, cb, p), mod, p)[1]
                    row.append(self._encode(prod))
                mul.append(row)
            self._mul = mul
            trace = []
            for a in range(q):
                t, x = 0, a
                for _ in range(m):
                    t = self._add[t][x]
                    x = self._pow_raw(x, p)
                if t >= p:
                    raise DomainError("trace left the prime subfield; bad modulus")
                trace.append(t)
            self._trace = trace
        self._inv = [0] * q
        for a in range(1, q):
            self._inv[a] = next(b for b in range(1, q) if self._mul[a][b] == 1)

    def _encode(self, coords):
        code = 0
        for c in reversed(coords):
            code = code * self.p + c
        return code

    def _pow_raw(self, a, e):
        out, base = 1, a
        while e:
            if e & 1:
                out = self._mul[out][base]
            base = self._mul[base][base]
            e >>= 1
        return out

    # -- element operations -------------------------------------------------

    def elements(self):
        return range(self.q)

    def add(self, a, b):
        return self._add[a][b]

    def sub(self, a, b):
        return self._add[a][self._neg[b]]

    def neg(self, a):
        return self._neg[a]

    def mul(self, a, b):
        return self._mul[a][b]

    def inv(self, a):
        if a == 0:
            raise DomainError("inverse of zero")
        return self._inv[a]

    def pow(self, a, e):
        if e < 0:
            return self._pow_raw(self.inv(a), -e)
        if a == 0:
            return 0 if e else 1
        return self._pow_raw(a, e)

    def trace(self, a):
        """Trace down to F_p, returned as a residue in [0, p)."""
        return self._trace[a]

    def char_residue(self, a):
        """Residue r mod p encoding the character value exp(2*pi*i*r/p)."""
        return self._trace[a]

    def coords(self, a):
        return tuple(_digits(a, self.p, self.m))

    def from_coords(self, coords):
        if len(coords) != self.m:
            raise DomainError("coordinate vector has wrong length")
        return self._encode([c % self.p for c in coords])

    # -- polynomial and parsing conveniences ---------------------------------

    def poly(self, coeffs):
        return Poly(self, coeffs)

    def spec_string(self):
        if self.m == 1:
            return f"q={self.q}"
        if self.modulus == _smallest_modulus(self.p, self.m):
            return f"q={self.q}"
        mod = format_fp_poly(self.modulus)
        return f"q={self.q} modulus={mod}"

    @classmethod
    def parse(cls, spec):
        """Parse a field spec string like 'q=9', 'q=2^3' or 'q=4 modulus=x^2+x+1'."""
        parts = re.split(r"[,\s]+", spec.strip())
        q_part = None
        mod_part = None
        for part in parts:
            if not part:
                continue
            if part.startswith("q="):
                q_part = part[2:]
            elif part.startswith("modulus="):
                mod_part = part[8:]
            else:
                raise DomainError(f"unrecognized field spec component {part!r}")
        if q_part is None:
            raise DomainError(f"field spec {spec!r} has no q=")
        if "^" in q_part:
            p_s, m_s = q_part.split("^")
            p, m = int(p_s), int(m_s)
        else:
            q = int(q_part)
            p = next((d for d in range(2, q + 1) if _is_prime(d) and q % d == 0), None)
            if p is None:
                raise DomainError(f"q = {q} is not a prime power")
            m = 0
            while q > 1:
                if q % p:
                    raise DomainError(f"q = {int(q_part)} is not a prime power")
                q //= p
                m += 1
        modulus = parse_fp_poly(mod_part, p) if mod_part else None
        return cls(p, m, modulus)

    def __eq__(self, other):
        return (isinstance(other, Field)
                and (self.p, self.m, self.modulus) == (other.p, other.m, other.modulus))

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))

    def __repr__(self):
        return f"Field({self.spec_string()!r})"


def parse_fp_poly(s, p):
    """Parse a monic modulus like 'x^2+x+1' into an F_p coefficient tuple."""
    coeffs = {}
    for sign, term in _split_terms(s):
        mt = re.fullmatch(r"(?:(\d+)\s*\*?\s*)?(x(?:\^(\d+))?)?", term.strip())
        if mt is None or not term.strip():
            raise DomainError(f"bad modulus term {term!r}")
        c = int(mt.group(1)) if mt.group(1) else 1
        if mt.group(2) is None:
            e = 0
        else:
            e = int(mt.group(3)) if mt.group(3) else 1
        c = (-c if sign == "-" else c) % p
        coeffs[e] = (coeffs.get(e, 0) + c) % p
    deg = max((e for e, c in coeffs.items() if c), default=0)
    return tuple(coeffs.get(i, 0) for i in range(deg + 1))


def format_fp_poly(coeffs):
    terms = []
    for e in range(len(coeffs) - 1, -1, -1):
        c = coeffs[e]
        if not c:
            continue
        if e == 0:
            terms.append(str(c))
        else:
            head = "" if c == 1 else f"{c}*"
            terms.append(f"{head}x" if e == 1 else f"{head}x^{e}")
    return "+".join(terms) if terms else "0"


def _split_terms(s):
    """Split on top-level +/- signs; '[...]' groups and '^-' exponents stay intact."""
    out = []
    sign, buf, depth = "+", [], 0
    prev = ""
    for ch in s:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch in "+-" and depth == 0 and prev != "^":
            if any(not c.isspace() for c in buf):
                out.append((sign, "".join(buf)))
                sign, buf = ch, []
            else:
                # a sign before any term content: leading sign or a sign run
                sign = "-" if (sign == "-") != (ch == "-") else "+"
        else:
            buf.append(ch)
        if not ch.isspace():
            prev = ch
    if any(not c.isspace() for c in buf):
        out.append((sign, "".join(buf)))
    if not out:
        raise DomainError("empty polynomial text")
    return out


class Poly:
    """Immutable polynomial over a Field; coefficient codes low-to-high."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        for c in coeffs:
            if not (0 <= c < field.q):
                raise DomainError(f"coefficient code {c} out of range for {field!r}")
        self.field = field
        self.coeffs = tuple(coeffs)

    @property
    def deg(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def lead(self):
        if not self.coeffs:
            raise DomainError("the zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def _check(self, other):
        if not isinstance(other, Poly):
            raise TypeError(f"expected Poly, got {type(other).__name__}")
        if other.field != self.field:
            raise DomainError("mixed-field polynomial arithmetic")

    def __eq__(self, other):
        return (isinstance(other, Poly) and other.field == self.field
                and other.coeffs == self.coeffs)

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        self._check(other)
        fa = self.field._add
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = fa[out[i]][c]
        return Poly(self.field, out)

    def __neg__(self):
        fn = self.field._neg
        return Poly(self.field, [fn[c] for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return self.field.poly_zero
        fm, fa = self.field._mul, self.field._add
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                row = fm[ai]
                for j, bj in enumerate(b):
                    if bj:
                        out[i + j] = fa[out[i + j]][row[bj]]
        return Poly(self.field, out)

    def scale(self, c):
        """Multiply by the field element with code c."""
        if c == 0:
            return self.field.poly_zero
        row = self.field._mul[c]
        return Poly(self.field, [row[x] for x in self.coeffs])

    def shift(self, k):
        """Multiply by t^k (k >= 0)."""
        if k < 0:
            raise DomainError("negative shift leaves the polynomial ring")
        if not self.coeffs:
            return self
        return Poly(self.field, (0,) * k + self.coeffs)

    def __pow__(self, e):
        if e < 0:
            raise DomainError("negative polynomial power")
        out, base = self.field.poly_one, self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __divmod__(self, other):
        self._check(other)
        if other.is_zero():
            raise DomainError("division by the zero polynomial")
        field = self.field
        fm, fa, fn = field._mul, field._add, field._neg
        inv_lead = field.inv(other.lead())
        db = len(other.coeffs)
        r = list(self.coeffs)
        q = [0] * max(len(r) - db + 1, 0)
        while len(r) >= db:
            c = fm[r[-1]][inv_lead]
            k = len(r) - db
            q[k] = c
            row = fm[c]
            for j, bj in enumerate(other.coeffs):
                r[k + j] = fa[r[k + j]][fn[row[bj]]]
            while r and r[-1] == 0:
                r.pop()
        return Poly(field, q), Poly(field, r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self):
        if self.is_zero():
            return self
        return self.scale(self.field.inv(self.lead()))

    def mod_pow(self, e, modulus):
        """self**e reduced mod modulus, by square and multiply."""
        if e < 0:
            raise DomainError("negative exponent in mod_pow")
        out, base = self.field.poly_one % modulus, self % modulus
        while e:
            if e & 1:
                out = (out * base) % modulus
            base = (base * base) % modulus
            e >>= 1
        return out

    def code(self):
        """Base-q integer code; a deterministic sort key for polynomials."""
        code = 0
        for c in reversed(self.coeffs):
            code = code * self.field.q + c
        return code

    # -- text form ------------------------------------------------------------

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({format_poly(self)!r})"

    @classmethod
    def parse(cls, field, s):
        return parse_poly(field, s)


def format_elem(field, code):
    if field.m == 1:
        return str(code)
    return "[" + ",".join(str(c) for c in reversed(field.coords(code))) + "]"


def _format_terms(field, terms):
    """Render a {exponent: code} mapping in the shared t-power syntax."""
    parts = []
    for e in sorted((e for e, c in terms.items() if c), reverse=True):
        c = terms[e]
        cs = format_elem(field, c)
        if e == 0:
            parts.append(cs)
            continue
        te = "t" if e == 1 else f"t^{e}"
        parts.append(te if cs == "1" else f"{cs}*{te}")
    return " + ".join(parts) if parts else "0"


def format_poly(x):
    return _format_terms(x.field, {e: c for e, c in enumerate(x.coeffs)})


_COEFF_VEC = re.compile(r"\[([^\]]*)\]")


def parse_terms(field, s):
    """Parse the t-power syntax into {exponent: code}; exponents may be negative."""
    terms = {}
    for sign, raw in _split_terms(s):
        term = raw.strip()
        if not term:
            raise DomainError("empty term in polynomial text")
        code = None
        mvec = _COEFF_VEC.match(term)
        if mvec:
            vals = [int(v) for v in mvec.group(1).split(",")] if mvec.group(1).strip() else []
            if len(vals) != field.m:
                raise DomainError(f"coefficient vector {mvec.group(0)} needs {field.m} entries")
            code = field.from_coords(list(reversed(vals)))
            term = term[mvec.end():].strip()
        mt = re.fullmatch(r"(?:(\d+)\s*)?(?:\*\s*)?(t(?:\^(-?\d+))?)?", term)
        if mt is None:
            raise DomainError(f"bad polynomial term {raw!r}")
        if mt.group(1) is not None:
            if code is not None:
                raise DomainError(f"two coefficients in term {raw!r}")
            code = int(mt.group(1)) % field.p
        if code is None:
            if mt.group(2) is None:
                raise DomainError(f"bad polynomial term {raw!r}")
            code = 1
        if mt.group(2) is None:
            e = 0
        else:
            e = int(mt.group(3)) if mt.group(3) else 1
        if sign == "-":
            code = field.neg(code)
        terms[e] = field.add(terms.get(e, 0), code)
    return terms


def parse_poly(field, s):
    terms = parse_terms(field, s)
    if any(e < 0 and c for e, c in terms.items()):
        raise DomainError("negative exponent in a polynomial")
    deg = max((e for e, c in terms.items() if c), default=-1)
    return Poly(field, [terms.get(i, 0) for i in range(deg + 1)])


# ---------------------------------------------------------------------------
# Enumeration, irreducibles, roots.

def gn_size(field, N):
    return field.q ** N


def check_budget(count, budget=None, what="enumeration"):
    limit = DEFAULT_BUDGET if budget is None else budget
    if count > limit:
        raise BudgetError(f"{what} of {count} points exceeds budget {limit}")


def poly_from_index(field, i, N):
    """The i-th polynomial of G_N; index digits in base q, constant term fastest."""
    q = field.q
    coeffs = []
    for _ in range(N):
        i, r = divmod(i, q)
        coeffs.append(r)
    return Poly(field, coeffs)


def enumerate_GN(field, N, budget=None):
    """All q^N polynomials of degree < N, in index order.

    The order is lexicographic on coefficient vectors with the constant term
    varying fastest, so consumers may partition work by index range and the
    i-th element is poly_from_index(field, i, N).
    """
    total = gn_size(field, N)
    check_budget(total, budget)
    for i in range(total):
        yield poly_from_index(field, i, N)


def irreducibles(field, M, budget=None):
    """All monic irreducible polynomials of degree exactly M, sorted by code."""
    if M < 1:
        raise DomainError("irreducibles need positive degree")
    cached = field._irr_cache.get(M)
    if cached is not None:
        return cached
    check_budget(field.q ** M, budget, "irreducible search")
    divisors = []
    for d in range(1, M // 2 + 1):
        divisors.extend(irreducibles(field, d, budget))
    out = []
    for i in range(field.q ** M):
        f = Poly(field, _digits(i, field.q, M) + [1])
        if all((f % g).coeffs for g in divisors):
            out.append(f)
    out = tuple(out)
    field._irr_cache[M] = out
    return out


def is_irreducible(f):
    if f.deg is NEG_INF or f.deg < 1:
        return False
    g = f.monic()
    for d in range(1, g.deg // 2 + 1):
        for h in irreducibles(f.field, d):
            if not (g % h).coeffs:
                return False
    return True


def roots_mod(phi, g, budget=None):
    """All x in G_{deg g} with phi(x) = 0 (mod g).

    phi is a sparse exponent map {r: Poly coefficient}, r >= 0.  The empty
    tuple is a valid answer.
    """
    if not isinstance(g, Poly) or g.is_zero():
        raise DomainError("roots_mod needs a nonzero modulus")
    field = g.field
    N = len(g.coeffs) - 1
    check_budget(field.q ** N, budget, "root search")
    const = phi.get(0, field.poly_zero) % g
    exps = sorted(r for r in phi if r >= 1 and not phi[r].is_zero())
    roots = []
    for x in enumerate_GN(field, N, budget):
        acc = const
        for r in exps:
            acc = (acc + phi[r] * x.mod_pow(r, g)) % g
        if acc.is_zero():
            roots.append(x)
    return tuple(roots)


def poly_gcd(a, b):
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a, b):
    """Monic g plus u, v with u*a + v*b = g."""
    field = a.field
    r0, r1 = a, b
    u0, u1 = field.poly_one, field.poly_zero
    v0, v1 = field.poly_zero, field.poly_one
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        u0, u1 = u1, u0 - q * u1
        v0, v1 = v1, v0 - q * v1
    if r0.is_zero():
        return r0, u0, v0
    c = field.inv(r0.lead())
    return r0.scale(c), u0.scale(c), v0.scale(c)


def poly_crt(pairs):
    """Combine congruences x = r_i (mod m_i) for pairwise coprime moduli."""
    if not pairs:
        raise DomainError("poly_crt needs at least one congruence")
    r, m = pairs[0]
    r = r % m
    for r2, m2 in pairs[1:]:
        g, u, _ = poly_xgcd(m, m2)
        if g.deg != 0:
            raise DomainError("poly_crt moduli are not coprime")
        t = (u * (r2 - r)) % m2
        r = r + m * t
        m = m * m2
        r %= m
    return r
