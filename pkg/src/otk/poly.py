"""Exact univariate polynomials over Z and Q.

Coefficients are stored ascending and normalized: an integral value is kept
as a Python ``int``, anything else as a ``fractions.Fraction`` in lowest
terms. Arithmetic results are returned as :class:`IntPolynomial` whenever
every coefficient is integral, so ``isinstance(p, IntPolynomial)`` always
answers the integrality question.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from otk import gfp


class PolynomialError(ValueError):
    pass


def _norm(c):
    if isinstance(c, bool):
        return int(c)
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, str):
        return _norm(Fraction(c))
    if hasattr(c, "numerator") and hasattr(c, "denominator"):
        return _norm(Fraction(c.numerator, c.denominator))
    raise TypeError(f"exact coefficient expected, got {type(c).__name__}")


def _wrap(coeffs):
    cs = [_norm(c) for c in coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    if all(isinstance(c, int) for c in cs):
        return IntPolynomial._raw(cs)
    return RatPolynomial._raw(cs)


class RatPolynomial:
    """Immutable polynomial with rational coefficients, ascending order."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_norm(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def _raw(cls, cs):
        obj = object.__new__(cls)
        obj.coeffs = tuple(cs)
        return obj

    # -- constructors -------------------------------------------------

    @classmethod
    def constant(cls, c):
        return _wrap([c])

    @classmethod
    def monomial(cls, k: int, c=1):
        return _wrap([0] * k + [c])

    @classmethod
    def from_roots(cls, roots):
        p = _wrap([1])
        for r in roots:
            p = p * _wrap([-r, 1])
        return p

    # -- basic properties ---------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def is_monic(self) -> bool:
        return self.lc == 1

    def __getitem__(self, k):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, RatPolynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == _wrap([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return f"{type(self).__name__}({list(self.coeffs)!r})"

    def __str__(self):
        return to_string(self)

    # -- arithmetic -----------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, RatPolynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return _wrap([other])
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        return _wrap([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    __radd__ = __add__

    def __neg__(self):
        return _wrap([-c for c in self.coeffs])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if not a or not b:
            return _wrap([])
        r = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    r[i + j] += x * y
        return _wrap(r)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = _wrap([1])
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __divmod__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        a = [Fraction(c) for c in self.coeffs]
        db = o.degree
        lc = Fraction(o.lc)
        if len(a) <= db:
            return _wrap([]), self
        q = [0] * (len(a) - db)
        for k in range(len(a) - 1, db - 1, -1):
            c = a[k] / lc
            if c:
                q[k - db] = c
                for j, y in enumerate(o.coeffs):
                    a[k - db + j] -= c * y
        return _wrap(q), _wrap(a[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other):
        q, r = divmod(self, other)
        if r:
            raise PolynomialError(f"{other} does not divide {self}")
        return q

    def scale(self, c):
        return _wrap([c * x for x in self.coeffs])

    # -- evaluation and transforms --------------------------------------

    def __call__(self, x):
        """Horner evaluation; works for any ring element supporting + and *."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_exact(self, x) -> Fraction:
        x = Fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self):
        return _wrap([i * c for i, c in enumerate(self.coeffs)][1:])

    def compose(self, inner: "RatPolynomial"):
        acc = _wrap([])
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def reciprocal(self):
        """X^deg * P(1/X)."""
        return _wrap(self.coeffs[::-1])

    def is_reciprocal(self) -> bool:
        return bool(self.coeffs) and self.coeffs == self.coeffs[::-1]

    def monic(self):
        if self.is_zero():
            return self
        lc = Fraction(self.lc)
        return _wrap([Fraction(c) / lc for c in self.coeffs])

    def content(self) -> Fraction:
        """Positive rational c with self/c primitive in Z[X]."""
        if self.is_zero():
            return Fraction(0)
        den = 1
        for c in self.coeffs:
            if isinstance(c, Fraction):
                den = den * c.denominator // math.gcd(den, c.denominator)
        num = 0
        for c in self.coeffs:
            num = math.gcd(num, int(c * den))
        return Fraction(num, den)

    def primitive_part(self) -> "IntPolynomial":
        """Primitive integer polynomial with positive leading coefficient."""
        if self.is_zero():
            return IntPolynomial([])
        c = self.content()
        if self.lc < 0:
            c = -c
        return IntPolynomial([x / c for x in self.coeffs])

    def to_int(self) -> "IntPolynomial":
        return IntPolynomial(self.coeffs)

    def to_list(self):
        return [c if isinstance(c, int) else str(c) for c in self.coeffs]


class IntPolynomial(RatPolynomial):
    """Polynomial whose coefficients are all integers."""

    __slots__ = ()

    def __init__(self, coeffs: Iterable = ()):
        super().__init__(coeffs)
        for c in self.coeffs:
            if not isinstance(c, int):
                raise PolynomialError(f"non-integral coefficient {c}")

    def to_list(self):
        return list(self.coeffs)


X = IntPolynomial([0, 1])


# -- text format ---------------------------------------------------------

_TERM = re.compile(r"([+-]?)(\d*)(\*?x(?:\^(\d+))?)?")


def parse_poly(text) -> IntPolynomial:
    """Parse ``x^4-2`` or ``[-2,0,0,0,1]`` (ascending) into an IntPolynomial."""
    if isinstance(text, RatPolynomial):
        return text.to_int()
    if isinstance(text, (list, tuple)):
        try:
            return IntPolynomial([int(c) for c in text])
        except (TypeError, ValueError) as exc:
            raise PolynomialError(f"bad coefficient list {text!r}") from exc
    s = str(text).strip().replace(" ", "").lower()
    if not s:
        raise PolynomialError("empty polynomial")
    if s.startswith("["):
        if not s.endswith("]"):
            raise PolynomialError(f"unterminated coefficient list {text!r}")
        body = s[1:-1]
        try:
            return IntPolynomial([int(c) for c in body.split(",") if c != ""])
        except ValueError as exc:
            raise PolynomialError(f"bad coefficient list {text!r}") from exc
    coeffs: dict[int, int] = {}
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise PolynomialError(f"cannot parse {text!r} at position {pos}")
        sign, digits, var, power = m.groups()
        if pos > 0 and not sign:
            raise PolynomialError(f"missing operator in {text!r} at position {pos}")
        if not digits and not var:
            raise PolynomialError(f"cannot parse {text!r} at position {pos}")
        if var and var.startswith("*") and not digits:
            raise PolynomialError(f"dangling '*' in {text!r}")
        c = int(digits) if digits else 1
        if sign == "-":
            c = -c
        k = (int(power) if power else 1) if var else 0
        coeffs[k] = coeffs.get(k, 0) + c
        pos = m.end()
    top = max(coeffs)
    return IntPolynomial([coeffs.get(k, 0) for k in range(top + 1)])


def to_string(p: RatPolynomial, var: str = "x") -> str:
    if p.is_zero():
        return "0"
    parts = []
    for k in range(p.degree, -1, -1):
        c = p.coeffs[k]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if k == 0:
            body = str(a)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            if a == 1:
                body = mono
            elif isinstance(a, Fraction):
                body = f"({a})*{mono}"
            else:
                body = f"{a}*{mono}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# -- ring operations -------------------------------------------------------


def poly_arith(a: RatPolynomial, b: RatPolynomial, op: str):
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "divmod":
        return divmod(a, b)
    raise ValueError(f"unknown operation {op!r}")


def _clear(p: RatPolynomial):
    """Return (integer coefficient list, d) with p = P/d."""
    den = 1
    for c in p.coeffs:
        if isinstance(c, Fraction):
            den = den * c.denominator // math.gcd(den, c.denominator)
    return [int(c * den) for c in p.coeffs], den


def _icontent(a):
    g = 0
    for c in a:
        g = math.gcd(g, c)
    return g


def _prem(a, b):
    """Pseudo-remainder of integer coefficient lists: lc(b)^(da-db+1) a = q b + r."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    e = len(a) - len(b) + 1
    while len(r) - 1 >= db and r:
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [x * lb for x in r]
        for j, y in enumerate(b):
            r[shift + j] -= lr * y
        r.pop()
        while r and r[-1] == 0:
            r.pop()
        e -= 1
    if e > 0:
        f = lb**e
        r = [x * f for x in r]
    return r


def _subresultant_gcd(a, b):
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return a
    ca, cb = _icontent(a), _icontent(b)
    d = math.gcd(ca, cb)
    a = [x // ca for x in a]
    b = [x // cb for x in b]
    g = h = 1
    while True:
        delta = len(a) - len(b)
        r = _prem(a, b)
        if not r:
            break
        if len(r) == 1:
            return [d]
        a, b = b, [x // (g * h**delta) for x in r]
        g = a[-1]
        h = g**delta // h ** (delta - 1) if delta else h
    cb = _icontent(b)
    return [d * x // cb for x in b]


def poly_gcd(a: RatPolynomial, b: RatPolynomial) -> RatPolynomial:
    """Monic gcd over Q via the fraction-free subresultant scheme."""
    if a.is_zero() and b.is_zero():
        raise PolynomialError("gcd(0, 0) is undefined")
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    A, _ = _clear(a)
    B, _ = _clear(b)
    return _wrap(_subresultant_gcd(A, B)).monic()


def resultant(a: RatPolynomial, b: RatPolynomial):
    """Res(a, b) = lc(a)^deg(b) * prod_{a(r)=0} b(r), via subresultants."""
    if a.is_zero() or b.is_zero():
        raise PolynomialError("resultant with the zero polynomial")
    A, da = _clear(a)
    B, db = _clear(b)
    scale = Fraction(1, da ** (len(B) - 1) * db ** (len(A) - 1))
    return _norm(scale * _int_resultant(A, B))


def _int_resultant(a, b):
    m, n = len(a) - 1, len(b) - 1
    if n == 0:
        return b[0] ** m
    if m == 0:
        return a[0] ** n
    ca, cb = _icontent(a), _icontent(b)
    a = [x // ca for x in a]
    b = [x // cb for x in b]
    t = ca**n * cb**m
    s = 1
    if m < n:
        a, b = b, a
        if m % 2 and n % 2:
            s = -s
    g = h = 1
    while True:
        da, db = len(a) - 1, len(b) - 1
        delta = da - db
        if da % 2 and db % 2:
            s = -s
        r = _prem(a, b)
        if not r:
            return 0
        a, b = b, [x // (g * h**delta) for x in r]
        g = a[-1]
        if delta:
            h = g**delta // h ** (delta - 1)
        if len(b) == 1:
            break
    da = len(a) - 1
    if da == 0:
        return s * t * h
    num = b[0] ** da
    den = h ** (da - 1)
    return s * t * (num // den) if num % den == 0 else _norm(Fraction(s * t * num, den))


def discriminant(a: RatPolynomial):
    n = a.degree
    r = resultant(a, a.derivative())
    return _norm(Fraction((-1) ** (n * (n - 1) // 2) * r) / a.lc)


def squarefree_part(a: RatPolynomial) -> RatPolynomial:
    if a.degree < 1:
        return a.monic()
    return (a // poly_gcd(a, a.derivative())).monic()


def compose_quadratic(P: RatPolynomial, q) -> RatPolynomial:
    """P(X^2 + q)."""
    if P.is_zero():
        raise PolynomialError("zero polynomial")
    return P.compose(_wrap([q, 0, 1]))


# -- irreducibility over Q ---------------------------------------------------


@dataclass(frozen=True)
class IrreducibilityResult:
    """Decision with its evidence.

    ``method`` is one of linear, eisenstein, mod_p, degree_sieve,
    exhaustive (irreducible) or factor (reducible, with ``factor`` set).
    """

    irreducible: bool
    method: str
    data: dict = field(default_factory=dict)
    factor: IntPolynomial | None = None

    def __bool__(self):
        return self.irreducible


def primes(limit: int):
    sieve = bytearray([1]) * (limit + 1)
    sieve[:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i, v in enumerate(sieve) if v]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _small_prime_factors(n: int, limit: int = 100_000):
    n = abs(n)
    out = []
    for p in primes(min(limit, max(2, math.isqrt(n) + 1))):
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
    if n > 1 and is_prime(n):
        out.append(n)
    return out


def eisenstein_prime(P: IntPolynomial):
    """Least prime at which P is Eisenstein, or None."""
    a = P.coeffs
    g = _icontent(a[:-1])
    if g == 0:
        return None
    for p in _small_prime_factors(g):
        if a[-1] % p and a[0] % (p * p):
            return p
    return None


def _subset_sums(degrees):
    sums = {0}
    for d in degrees:
        sums |= {s + d for s in sums}
    return sums


def is_irreducible_over_Q(P: RatPolynomial, prime_limit: int = 200) -> IrreducibilityResult:
    """Decide irreducibility in Q[X], with a certificate either way."""
    if P.degree < 1:
        raise PolynomialError("constant polynomial")
    P = P.primitive_part()
    n = P.degree
    if n == 1:
        return IrreducibilityResult(True, "linear")
    g = poly_gcd(P, P.derivative())
    if g.degree > 0:
        return IrreducibilityResult(False, "factor", {"reason": "repeated factor"}, g.primitive_part())
    for r in (0, 1, -1):
        if P(r) == 0:
            return IrreducibilityResult(False, "factor", {"reason": f"rational root {r}"}, X - r)

    p = eisenstein_prime(P)
    if p is not None:
        return IrreducibilityResult(True, "eisenstein", {"p": p})

    sieve = set(range(n + 1))
    sieve_primes = {}
    best = None
    for p in primes(prime_limit):
        if P.lc % p == 0:
            continue
        pat = gfp.degree_pattern(P.coeffs, p)
        if pat is None:
            continue
        if pat == [n]:
            return IrreducibilityResult(True, "mod_p", {"p": p})
        sieve &= _subset_sums(pat)
        sieve_primes[p] = pat
        if best is None or len(pat) < len(sieve_primes[best]):
            best = p
        if sieve == {0, n}:
            return IrreducibilityResult(True, "degree_sieve", {"patterns": sieve_primes})
    if best is None:
        raise PolynomialError("no usable prime below the limit")
    return _zassenhaus(P, best)


def _sym(c, m):
    c %= m
    return c - m if c > m // 2 else c


def _hensel_pair(f, g, h, p, K):
    """Lift f = g*h (mod p) to mod p**K. g is monic; lc(h) = lc(f)."""
    pK = p**K
    f = [c % pK for c in f]
    g0 = gfp.reduce(g, p)
    h0 = gfp.reduce(h, p)
    one, s, t = gfp.ext_gcd(g0, h0, p)
    if one != [1]:
        raise PolynomialError("factors are not coprime mod p")
    g = list(g0)
    h = list(h0)
    h[-1] = f[-1]
    pk = p
    for _ in range(K - 1):
        gh = gfp.mul(g, h, pK)
        e = [(f[i] if i < len(f) else 0) - (gh[i] if i < len(gh) else 0) for i in range(max(len(f), len(gh)))]
        e = gfp.trim([(c % pK) // pk % p for c in e])
        q, dg = gfp.divmod_(gfp.mul(t, e, p), g0, p)
        dh = gfp.add(gfp.mul(s, e, p), gfp.mul(q, h0, p), p)
        g = [((g[i] if i < len(g) else 0) + pk * (dg[i] if i < len(dg) else 0)) % pK for i in range(len(g))]
        h = [((h[i] if i < len(h) else 0) + pk * (dh[i] if i < len(dh) else 0)) % pK for i in range(len(h))]
        pk *= p
    return g, h


def _zassenhaus(P: IntPolynomial, p: int) -> IrreducibilityResult:
    """Exhaustive factor search: modular factors lifted past the coefficient bound."""
    n = P.degree
    lc = P.lc
    norm2 = math.isqrt(sum(c * c for c in P.coeffs)) + 1
    bound = abs(lc) * 2 ** (n - 1) * norm2
    K = 1
    while p**K <= 2 * bound:
        K += 1
    pK = p**K
    _, facs = gfp.factor(P.coeffs, p)
    mods = [f for f, _ in facs]
    r = len(mods)
    lifted = []
    cur = list(P.coeffs)
    for i in range(r - 1):
        rest = [lc % p]
        for f in mods[i + 1 :]:
            rest = gfp.mul(rest, f, p)
        gi, cur = _hensel_pair(cur, mods[i], rest, p, K)
        lifted.append(gi)
    inv = pow(lc, -1, pK)
    lifted.append([(c * inv) % pK for c in cur])
    for k in range(1, r // 2 + 1):
        for S in itertools.combinations(range(r), k):
            cand = [lc % pK]
            for i in S:
                cand = gfp.mul(cand, lifted[i], pK)
            h = IntPolynomial([_sym(c, pK) for c in cand]).primitive_part()
            if 0 < h.degree < n and not (P % h):
                return IrreducibilityResult(False, "factor", {"p": p, "k": K}, h)
    return IrreducibilityResult(True, "exhaustive", {"p": p, "k": K, "bound": bound, "modular_factors": r})
