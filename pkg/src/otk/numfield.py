"""Arithmetic in F = Q[X]/(f) for a monic irreducible integer polynomial f.

Elements are power-basis coordinates over Q. Norms, traces and
characteristic polynomials are computed exactly from resultants; sign and
size questions at the archimedean places go through certified enclosures
of the roots of f.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from mpmath import iv

from otk.poly import (
    IntPolynomial,
    RatPolynomial,
    _norm,
    _wrap,
    is_irreducible_over_Q,
    parse_poly,
    resultant,
    squarefree_part,
)
from otk.realroots import (
    EmbeddingSet,
    ReducibleError,
    Signature,
    iv_dps,
    iv_interval,
    refine_embeddings,
    refine_interval,
    signature as _signature,
)


class FieldError(ValueError):
    pass


class NumberField:
    """Q[X]/(f) with f monic, irreducible and integral."""

    def __init__(self, defining, check: bool = True):
        f = parse_poly(defining) if not isinstance(defining, RatPolynomial) else defining.to_int()
        if f.degree < 1:
            raise FieldError("defining polynomial must have positive degree")
        if f.lc != 1:
            raise FieldError(f"defining polynomial {f} is not monic")
        if check:
            res = is_irreducible_over_Q(f)
            if not res.irreducible:
                raise ReducibleError(f, res)
        self.defining: IntPolynomial = f
        self.degree = f.degree
        self._signature: Signature | None = None
        self._emb: EmbeddingSet | None = None
        self._lock = threading.Lock()

    def __repr__(self):
        return f"NumberField({str(self.defining)!r})"

    def __eq__(self, other):
        return isinstance(other, NumberField) and other.defining == self.defining

    def __hash__(self):
        return hash(self.defining)

    @property
    def signature(self) -> Signature:
        if self._signature is None:
            self._signature = _signature(self.defining, check=False)
        return self._signature

    def embeddings(self, eps=Fraction(1, 10**20)) -> EmbeddingSet:
        """Certified roots of f with radius <= eps; refined lazily and cached."""
        eps = Fraction(eps)
        with self._lock:
            if self._emb is None or self._emb.precision > eps:
                self._emb = refine_embeddings(self.defining, eps, check=False)
            return self._emb

    def __call__(self, value) -> "FieldElement":
        return self.element(value)

    def element(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldError("element of a different field")
            return value
        if isinstance(value, RatPolynomial):
            return FieldElement(self, (value % self.defining).coeffs)
        if isinstance(value, str):
            return self.parse_element(value)
        if isinstance(value, (int, Fraction)):
            return FieldElement(self, (value,))
        return FieldElement(self, tuple(value))

    def parse_element(self, text: str) -> "FieldElement":
        body = text.strip()
        if not (body.startswith("(") and body.endswith(")")):
            raise FieldError(f"element must look like (c0, c1, ...): {text!r}")
        parts = [p.strip() for p in body[1:-1].split(",") if p.strip()]
        if len(parts) > self.degree:
            raise FieldError(f"too many coordinates for degree {self.degree}")
        return FieldElement(self, tuple(Fraction(p) for p in parts))

    @property
    def gen(self) -> "FieldElement":
        return FieldElement(self, (0, 1)) if self.degree > 1 else self.element(-self.defining.coeffs[0])

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, (1,))

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, ())


class FieldElement:
    __slots__ = ("field", "coords")

    def __init__(self, field: NumberField, coords: Sequence):
        cs = [_norm(c) for c in coords]
        if len(cs) > field.degree:
            cs = list((_wrap(cs) % field.defining).coeffs)
        cs += [0] * (field.degree - len(cs))
        self.field = field
        self.coords = tuple(cs)

    # -- representation -------------------------------------------------------

    @property
    def poly(self) -> RatPolynomial:
        return _wrap(self.coords)

    def __repr__(self):
        return f"FieldElement({self.field.defining}, {self.to_text()})"

    def to_text(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coords) + ")"

    def to_list(self):
        return [c if isinstance(c, int) else str(c) for c in self.coords]

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.coords == other.coords
        if isinstance(other, (int, Fraction)):
            return self.coords == FieldElement(self.field, (other,)).coords
        return NotImplemented

    def __hash__(self):
        return hash((self.field.defining, self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __bool__(self):
        return not self.is_zero()

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    # -- arithmetic -------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, (other,))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, [a + b for a, b in zip(self.coords, o.coords)])

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, [-a for a in self.coords])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, ((self.poly * o.poly) % self.field.defining).coeffs)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverting zero")
        s = _inverse_mod(self.poly, self.field.defining)
        return FieldElement(self.field, s.coeffs)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- invariants ---------------------------------------------------------------

    def char_poly(self) -> RatPolynomial:
        return char_poly(self)

    def min_poly(self) -> RatPolynomial:
        return min_poly(self)

    def norm(self):
        return norm(self)

    def trace(self):
        return trace(self)

    def is_integral(self) -> bool:
        return isinstance(min_poly(self), IntPolynomial)

    def is_totally_positive(self) -> bool:
        return is_totally_positive(self)

    def embed(self, dps: int = 30) -> list:
        """Rigorous enclosures of sigma_1(x)..sigma_{s+t}(x) (mpmath iv numbers)."""
        emb = self.field.embeddings(Fraction(1, 10 ** (dps + 5)))
        boxes = emb.enclosures(dps + 10)
        with iv_dps(dps + 10):
            return [_iv_horner(self.poly, z) for z in boxes]

    def approx(self) -> list[complex]:
        """sigma_1(x)..sigma_{s+t}(x) as Python complex numbers."""
        out = []
        for v in self.embed(20):
            if isinstance(v, iv.mpc):
                out.append(complex(float(v.real.mid), float(v.imag.mid)))
            else:
                out.append(complex(float(v.mid), 0.0))
        return out


def _iv_horner(p: RatPolynomial, z):
    acc = iv.mpf(0)
    for c in reversed(p.coeffs):
        c = Fraction(c)
        acc = acc * z + iv.mpf(c.numerator) / c.denominator
    return acc


def _inverse_mod(a: RatPolynomial, m: RatPolynomial) -> RatPolynomial:
    r0, r1 = m, a % m
    t0, t1 = _wrap([]), _wrap([1])
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        t0, t1 = t1, t0 - q * t1
    if r0.degree != 0:
        raise ZeroDivisionError("element is not invertible")
    return t0.scale(1 / Fraction(r0.lc)) % m


# -- module-level operations --------------------------------------------------------


def elem_arith(x: FieldElement, y: FieldElement | None, op: str) -> FieldElement:
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "inv":
        return x.inverse()
    raise ValueError(f"unknown operation {op!r}")


def _interpolate(xs, ys) -> RatPolynomial:
    """Newton interpolation through (xs[i], ys[i]) over Q."""
    n = len(xs)
    coef = [Fraction(y) for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    p = _wrap([coef[-1]])
    for i in range(n - 2, -1, -1):
        p = p * _wrap([-xs[i], 1]) + coef[i]
    return p


def char_poly(x: FieldElement) -> RatPolynomial:
    """Res_X(f(X), Y - w(X)) where x = w(alpha); degree n, monic."""
    f = x.field.defining
    n = f.degree
    w = x.poly
    ys = list(range(n + 1))
    vals = [resultant(f, _wrap([y]) - w) if not (_wrap([y]) - w).is_zero() else 0 for y in ys]
    return _interpolate(ys, vals)


def min_poly(x: FieldElement) -> RatPolynomial:
    c = char_poly(x)
    m = squarefree_part(c)
    k, r = divmod(c.degree, m.degree)
    if r or m**k != c:
        raise AssertionError("characteristic polynomial is not a power of the minimal polynomial")
    return m


def norm(x: FieldElement):
    f = x.field.defining
    if x.is_zero():
        return 0
    return resultant(f, x.poly)


def trace(x: FieldElement):
    c = char_poly(x)
    return _norm(-c[c.degree - 1])


def is_totally_positive(x: FieldElement) -> bool:
    """x > 0 under every real embedding, decided on Sturm-isolated intervals."""
    if x.is_zero():
        raise FieldError("zero is neither positive nor negative")
    F = x.field
    if F.signature.s == 0:
        raise FieldError("field has no real embeddings")
    emb = F.embeddings(Fraction(1, 10**6))
    w = x.poly
    for a, b in emb.real_roots:
        if _sign_at_root(F.defining, a, b, w) < 0:
            return False
    return True


def _sign_at_root(f: IntPolynomial, a: Fraction, b: Fraction, w: RatPolynomial) -> int:
    """Sign of w at the unique root of f in [a, b]; w must not vanish there."""
    dps = 30
    while True:
        with iv_dps(dps):
            v = _iv_horner(w, iv_interval(a, b))
            if v.a > 0:
                return 1
            if v.b < 0:
                return -1
        a, b = refine_interval(f, a, b, (b - a) / 2**32)
        if a == b:
            val = w.eval_exact(a)
            if val == 0:
                raise FieldError("element vanishes at a real place")
            return 1 if val > 0 else -1
        dps += 20


# -- linear algebra over Q -------------------------------------------------------------


def solve_rational(columns: list[Sequence], target: Sequence):
    """Solve sum_k c_k * columns[k] = target exactly; None if inconsistent."""
    rows = len(target)
    m = len(columns)
    A = [[Fraction(columns[k][i]) for k in range(m)] + [Fraction(target[i])] for i in range(rows)]
    piv_cols = []
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, rows) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c]
        A[r] = [v * inv for v in A[r]]
        for i in range(rows):
            if i != r and A[i][c] != 0:
                fac = A[i][c]
                A[i] = [vi - fac * vr for vi, vr in zip(A[i], A[r])]
        piv_cols.append(c)
        r += 1
        if r == rows:
            break
    for i in range(r, rows):
        if A[i][m] != 0:
            return None
    sol = [Fraction(0)] * m
    for i, c in enumerate(piv_cols):
        sol[c] = A[i][m]
    return sol


def express_in_powers(x: FieldElement, gamma: FieldElement, m: int):
    """Rational coefficients c with x = sum c_k gamma^k (k < m), or None."""
    powers = [gamma.field.one]
    for _ in range(m - 1):
        powers.append(powers[-1] * gamma)
    sol = solve_rational([p.coords for p in powers], x.coords)
    if sol is None:
        return None
    return _wrap(sol)


def same_subfield(x: FieldElement, y: FieldElement) -> bool:
    """Q(x) == Q(y) inside the same field."""
    dx = min_poly(x).degree
    dy = min_poly(y).degree
    return dx == dy and express_in_powers(x, y, dy) is not None


# -- subfields of index two -----------------------------------------------------------------


@dataclass(frozen=True)
class SubfieldCertificate:
    """Exact evidence that F = Q[X]/(f) is quadratic over E = Q[Y]/(g).

    ``generator`` is w with gamma = w(alpha) a root of g in F; the monic
    quadratic X^2 + b(Y) X + c(Y) over E has alpha as a root (under
    Y -> gamma) and divides f over E.
    """

    field_poly: IntPolynomial
    subfield_poly: IntPolynomial
    generator: RatPolynomial
    quad_b: RatPolynomial
    quad_c: RatPolynomial
    route: str = ""

    @property
    def quadratic_factor(self):
        return (self.quad_c, self.quad_b, _wrap([1]))

    def subfield(self) -> NumberField:
        return NumberField(self.subfield_poly, check=False)

    def gamma(self, F: NumberField) -> FieldElement:
        return F.element(self.generator)

    def to_field(self, F: NumberField, e: FieldElement) -> FieldElement:
        """Image of an element of E in F (Y -> gamma)."""
        return F.element(e.poly(self.gamma(F)))

    def cofactor(self):
        """f divided by the quadratic over E; raises if the division is inexact."""
        E = self.subfield()
        f = [E.element(c) for c in self.field_poly.coeffs]
        q = [E.element(self.quad_c), E.element(self.quad_b), E.one]
        quo, rem = poly_divmod_over(f, q)
        if any(not r.is_zero() for r in rem):
            raise FieldError("quadratic factor does not divide f over E")
        return quo

    def verify(self) -> bool:
        """Re-run every exact check; True iff the certificate is valid."""
        f, g = self.field_poly, self.subfield_poly
        n = f.degree
        if n % 2 or g.degree != n // 2 or g.lc != 1:
            return False
        if not is_irreducible_over_Q(g).irreducible:
            return False
        if _signature(g, check=False).t != 0:
            return False
        F = NumberField(f, check=False)
        gamma = self.gamma(F)
        if not F.element(g(gamma)).is_zero():
            return False
        alpha = F.gen
        b = F.element(self.quad_b(gamma))
        c = F.element(self.quad_c(gamma))
        if not (alpha * alpha + b * alpha + c).is_zero():
            return False
        try:
            self.cofactor()
        except FieldError:
            return False
        return True


def poly_divmod_over(a: list[FieldElement], b: list[FieldElement]):
    """Long division of coefficient lists (ascending) over a number field."""
    a = list(a)
    while a and a[-1].is_zero():
        a.pop()
    db = len(b) - 1
    if db < 0 or b[-1].is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    inv = b[-1].inverse()
    if len(a) <= db:
        return [], a
    q = [None] * (len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k] * inv
        q[k - db] = c
        if not c.is_zero():
            for j, y in enumerate(b):
                a[k - db + j] = a[k - db + j] - c * y
    return q, a[:db]


def relative_norm_to_subfield(x: FieldElement, sub: SubfieldCertificate) -> FieldElement:
    """Nm_{F/E}(x) = x * tau(x), as an element of E = Q[Y]/(g)."""
    if x.field.defining != sub.field_poly:
        raise FieldError("certificate belongs to a different field")
    E = sub.subfield()
    b = E.element(sub.quad_b)
    c = E.element(sub.quad_c)
    # reduce x(X) modulo X^2 + bX + c with coefficients in E
    coeffs = [E.element(v) for v in x.poly.coeffs]
    _, rem = poly_divmod_over(coeffs, [c, b, E.one])
    rem = list(rem) + [E.zero] * (2 - len(rem))
    A, B = rem[0], rem[1]
    return A * A - A * B * b + B * B * c
