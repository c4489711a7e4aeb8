"""Floating-point checks of the geometry on H^s x C.

The potential phi(z) = prod_j 1/(2 Im z_j) + |z_{s+1}|^2, the affine action
of O_F and the positive units, and the homothety identity
phi(R_u z) = |sigma_{s+1}(u)|^2 phi(z) are all evaluated on seeded random
samples. Nothing here is a proof; the exact modules carry the certificates
and these checks confirm the numerical shadows of those facts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np
from mpmath import iv

from otk.numfield import FieldElement, NumberField
from otk.poly import discriminant
from otk.realroots import iv_bounds, iv_dps
from otk.units import UnitElement, dilation_factor, positive_unit_rank


class GeometryError(ValueError):
    pass


# -- points and the action ---------------------------------------------------------------


@dataclass(frozen=True)
class GeomPoint:
    z: tuple  # s values in H, then one value in C

    def __post_init__(self):
        if any(w.imag <= 0 for w in self.z[:-1]):
            raise GeometryError("H coordinates need positive imaginary part")

    @property
    def s(self) -> int:
        return len(self.z) - 1

    def array(self) -> np.ndarray:
        return np.asarray(self.z, dtype=complex)


def _embedded(x: FieldElement) -> np.ndarray:
    s = x.field.signature.s
    vals = x.approx()
    return np.asarray(vals[: s + 1], dtype=complex)


@dataclass(frozen=True)
class ActionElement:
    kind: str  # "translation" or "rotation"
    element: FieldElement
    embedded: np.ndarray = field(compare=False, repr=False)

    @classmethod
    def translation(cls, a: FieldElement) -> "ActionElement":
        return cls("translation", a, _embedded(a))

    @classmethod
    def rotation(cls, u: UnitElement) -> "ActionElement":
        if not u.totally_positive:
            raise GeometryError("rotation needs a totally positive unit")
        return cls("rotation", u.element, _embedded(u.element))


def act(e: ActionElement, z):
    """T_a(z) = z + sigma(a), R_u(z) = sigma(u) z; z is a GeomPoint or an (N, s+1) array."""
    arr = z.array() if isinstance(z, GeomPoint) else np.asarray(z)
    out = arr + e.embedded if e.kind == "translation" else arr * e.embedded
    return GeomPoint(tuple(out)) if isinstance(z, GeomPoint) else out


# -- potential and Hessian ----------------------------------------------------------------


def _as_array(z):
    arr = z.array() if isinstance(z, GeomPoint) else np.asarray(z, dtype=complex)
    if np.any(arr[..., :-1].imag <= 0):
        raise GeometryError("H coordinates need positive imaginary part")
    return arr


def potential(z):
    arr = _as_array(z)
    phi1 = np.prod(1.0 / (2.0 * arr[..., :-1].imag), axis=-1)
    return phi1 + np.abs(arr[..., -1]) ** 2


def hessian(z):
    """Complex Hessian of phi: the H^s block from phi_1 and the constant 2 in the C corner."""
    arr = _as_array(z)
    h = arr[..., :-1]
    d = h - np.conj(h)  # 2i Im z_j
    phi1 = np.prod(1.0 / (2.0 * h.imag), axis=-1)
    s = h.shape[-1]
    H = np.zeros(arr.shape[:-1] + (s + 1, s + 1), dtype=complex)
    inv = 1.0 / d
    H[..., :s, :s] = -phi1[..., None, None] * inv[..., :, None] * inv[..., None, :]
    idx = np.arange(s)
    H[..., idx, idx] = -2.0 * phi1[..., None] * inv**2
    H[..., s, s] = 2.0
    return H


def is_positive_definite(H) -> bool:
    H = np.asarray(H, dtype=complex)
    if not np.allclose(H, np.conj(np.swapaxes(H, -1, -2)), rtol=1e-12, atol=0):
        raise GeometryError("matrix is not Hermitian")
    try:
        np.linalg.cholesky(H)
    except np.linalg.LinAlgError:
        return False
    return True


def sample_points(s: int, count: int, seed: int = 0) -> np.ndarray:
    """Im log-uniform in [1e-2, 1e2]; real parts and z_{s+1} uniform in [-10, 10]."""
    rng = np.random.default_rng(seed)
    im = 10.0 ** rng.uniform(-2.0, 2.0, size=(count, s))
    re = rng.uniform(-10.0, 10.0, size=(count, s))
    c = rng.uniform(-10.0, 10.0, size=(count, 2))
    return np.concatenate([re + 1j * im, (c[:, 0] + 1j * c[:, 1])[:, None]], axis=1)


# -- reports --------------------------------------------------------------------------------------


@dataclass
class Check:
    name: str
    passed: bool
    worst: float
    tol: float
    worst_index: int = -1
    detail: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "worst": float(self.worst),
            "tol": float(self.tol),
            "worst_index": int(self.worst_index),
            **self.detail,
        }


def _check(name, errors, tol, **detail) -> Check:
    errors = np.asarray(errors, dtype=float).ravel()
    if errors.size == 0:
        return Check(name, True, 0.0, tol, -1, detail)
    k = int(np.argmax(errors))
    worst = float(errors[k])
    return Check(name, bool(worst <= tol), worst, tol, k, detail)


def check_hessian(samples) -> Check:
    H = hessian(samples)
    ok = np.array([is_positive_definite(h) for h in H]) if len(H) else np.array([True])
    bad = np.nonzero(~ok)[0]
    err = (~ok).astype(float)
    return _check("hessian_positive_definite", err, 0.0, failures=int(bad.size), samples=len(samples))


def check_homothety(u: UnitElement, samples, tol: float = 1e-9, translation: FieldElement | None = None):
    """phi(R_u z) = c phi(z), log phi(R_u z) - log phi(z) constant, Hessian invariant under T_a."""
    c = dilation_factor(u).value
    R = ActionElement.rotation(u)
    phi = potential(samples)
    phi_u = potential(act(R, samples))
    rel = np.abs(phi_u - c * phi) / np.abs(c * phi)
    logs = np.log(phi_u) - np.log(phi)
    spread = np.abs(logs - np.log(c))
    label = u.element.to_text()
    out = [
        _check(f"homothety {label}", rel, tol, factor=c),
        _check(f"log_constant {label}", spread, tol, spread=float(np.ptp(logs)) if len(logs) else 0.0),
    ]
    if translation is not None:
        T = ActionElement.translation(translation)
        H0 = hessian(samples)
        H1 = hessian(act(T, samples))
        scale = np.max(np.abs(H0), axis=(-1, -2))
        err = np.max(np.abs(H1 - H0), axis=(-1, -2)) / scale
        out.append(_check(f"hessian_translation {translation.to_text()}", err, min(tol, 1e-12)))
    return out


def _residual(x, y):
    return np.max(np.abs(x - y) / (1.0 + np.abs(y)), axis=-1)


def check_group_law(a: FieldElement, b: FieldElement, u: UnitElement, v: UnitElement, samples, tol: float = 1e-12):
    """(T_a R_u)(T_b R_v) = T_{a+ub} R_{uv} and T_a R_u T_a^-1 R_u^-1 = T_{(1-u)a}."""
    Ta, Tb = ActionElement.translation(a), ActionElement.translation(b)
    Ru, Rv = ActionElement.rotation(u), ActionElement.rotation(v)
    lhs = act(Ta, act(Ru, act(Tb, act(Rv, samples))))
    uv = u * v
    rhs = act(ActionElement.translation(a + u.element * b), act(ActionElement.rotation(uv), samples))
    law = _residual(lhs, rhs)
    Ru_inv = ActionElement.rotation(u.inverse())
    Ta_inv = ActionElement.translation(-a)
    comm = act(Ta, act(Ru, act(Ta_inv, act(Ru_inv, samples))))
    expect = act(ActionElement.translation((1 - u.element) * a), samples)
    com = _residual(comm, expect)
    tag = f"a={a.to_text()} u={u.element.to_text()}"
    return [_check(f"group_law {tag}", law, tol), _check(f"commutator {tag}", com, tol)]


def lattice_rank(F: NumberField, dps: int = 30, max_dps: int = 480) -> int:
    """Rank of the real-flattened embedding matrix of 1, alpha, ..., alpha^(n-1).

    The determinant is enclosed with interval arithmetic; its square must
    also bracket the exact value |disc f| / 4^t.
    """
    n = F.degree
    sig = F.signature
    target = Fraction(abs(discriminant(F.defining))) / 4**sig.t
    while dps <= max_dps:
        vals = [(F.gen**k).embed(dps) for k in range(n)]
        with iv_dps(dps + 10):
            rows = []
            for v in vals:
                row = list(v[: sig.s])
                for w in v[sig.s :]:
                    row += [w.real, w.imag]
                rows.append(row)
            d = iv.det(iv.matrix(rows)) if n > 1 else rows[0][0]
            lo, hi = iv_bounds(d)
            lo2, hi2 = iv_bounds(d * d)
        if lo > 0 or hi < 0:
            if not lo2 <= target <= hi2:
                raise GeometryError("lattice determinant disagrees with the discriminant")
            return n
        dps *= 2
    raise GeometryError("determinant not certified nonzero")


@dataclass(frozen=True)
class FixedPoint:
    point: tuple
    residual: float
    h_coords_real: bool


def check_fixed_point(a: FieldElement, u: UnitElement, tol: float = 1e-10) -> FixedPoint:
    """sigma(a/(1-u)) is the unique fixed point of T_a R_u; its H coordinates are real."""
    if u.element == 1:
        raise GeometryError("u = 1 has no fixed point")
    x = a / (1 - u.element)
    p = _embedded(x)
    image = _embedded(u.element) * p + _embedded(a)
    res = float(np.max(np.abs(image - p) / (1.0 + np.abs(p))))
    s = a.field.signature.s
    real = bool(np.all(np.abs(p[:s].imag) == 0))
    if res > tol:
        raise GeometryError(f"fixed-point residual {res:.3e} exceeds {tol:.1e}")
    return FixedPoint(tuple(p), res, real)


def dilation_rank_numeric(units, log_tol: float = 1e-20, dps: int = 60, maxcoeff: int = 10**6) -> int:
    """Rank of the logs of dilation factors, via integer-relation search."""
    with mpmath.workdps(dps):
        logs = []
        for u in units:
            df = dilation_factor(u, dps=dps)
            mid = (df.lower + df.upper) / 2
            logs.append(mpmath.log(mpmath.mpf(mid.numerator) / mid.denominator))
        basis = []
        for x in logs:
            if abs(x) < log_tol:
                continue
            if basis:
                rel = mpmath.pslq(basis + [x], tol=mpmath.mpf(log_tol), maxcoeff=maxcoeff, maxsteps=10**5)
                if rel is not None and rel[-1] != 0:
                    continue
            basis.append(x)
        return len(basis)


# -- the whole suite --------------------------------------------------------------------


def suite_units(F: NumberField, bound: int = 3, lattice_trials: int = 150) -> list[UnitElement]:
    """Independent totally positive units, from the box search topped up by the lattice search."""
    return list(positive_unit_rank(F, bound, lattice_trials=lattice_trials).exhibited)


def run_suite(F: NumberField, samples: int = 1000, seed: int = 0, tol: float = 1e-9, units_bound: int = 3) -> dict:
    s = F.signature.s
    if F.signature.t != 1 or s < 1:
        raise GeometryError(f"need signature (s, 1), got ({s}, {F.signature.t})")
    pts = sample_points(s, samples, seed)
    checks = [check_hessian(pts)]
    units = suite_units(F, units_bound)
    alpha = F.gen
    group_tol = min(tol, 1e-12)
    for u in units:
        checks += check_homothety(u, pts, tol, translation=alpha)
    if units:
        u = units[0]
        v = units[1] if len(units) > 1 else units[0]
        checks += check_group_law(alpha, F.one, u, v, pts, group_tol)
        checks += check_group_law(F.one, alpha, u, u, pts, group_tol)
    rank = lattice_rank(F)
    fixed = check_fixed_point(F.one, units[0]) if units else None
    drank = dilation_rank_numeric(units) if units else 0
    return {
        "passed": all(c.passed for c in checks) and (fixed is None or fixed.h_coords_real),
        "samples": samples,
        "seed": seed,
        "tol": tol,
        "units": [u.element.to_list() for u in units],
        "lattice_rank": rank,
        "dilation_rank": drank,
        "fixed_point_residual": fixed.residual if fixed else None,
        "checks": [c.as_dict() for c in checks],
    }
