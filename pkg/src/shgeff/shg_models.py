"""Effective SHG coefficients of a uniaxial crystal.

The o-wave and e-wave polarizations are

    a = (sin phi, -cos phi, 0)
    b = (-cos theta cos phi, -cos theta sin phi, sin theta) = (a2 z1, -a1 z1, z2)

with ``z = (cos theta, sin theta)``.  The two type-I coefficients
``d_eff1 = max T b a a`` and ``d_eff2 = max T a b b`` are four-variable
problems on ``|a| = |z| = 1``; the maximum over ``z`` is available in closed
form (norm of a 2-vector, top eigenvalue of a 2x2 matrix), so both reduce to
a one-dimensional search over ``phi``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .tensor_core import (
    SYMMETRY_TOL,
    as_tensor3,
    q_forms_batch,
    r_forms_batch,
    require_piezo,
    trilinear,
)

TWO_PI = 2.0 * math.pi


class PhaseMatchType(str, enum.Enum):
    """Phase-matching configuration; value is the CLI spelling."""

    OO_E = "ooe"
    EE_O = "eeo"
    OE_E = "oee"
    EO_O = "eoo"

    @property
    def label(self) -> str:
        return {"ooe": "oo-e", "eeo": "ee-o", "oee": "oe-e", "eoo": "eo-o"}[self.value]

    @classmethod
    def parse(cls, value) -> "PhaseMatchType":
        if isinstance(value, cls):
            return value
        key = str(value).lower().replace("-", "").replace("_", "")
        for member in cls:
            if key in (member.value, member.name.lower().replace("_", "")):
                return member
        raise ValueError(f"unknown phase-matching type {value!r}")


# Which polarization fills each tensor slot: "b a a" means sum T_ijk b_i a_j a_k.
_SLOTS = {
    PhaseMatchType.OO_E: "baa",
    PhaseMatchType.EE_O: "abb",
    PhaseMatchType.OE_E: "bab",
    PhaseMatchType.EO_O: "aba",
}


@dataclass(frozen=True)
class AngleSet:
    """Propagation angles in radians, theta in [0, pi], phi in [0, 2 pi)."""

    theta: float
    phi: float

    def __post_init__(self):
        if not (math.isfinite(self.theta) and math.isfinite(self.phi)):
            raise ValueError("angles must be finite")
        if not (0.0 <= self.theta <= math.pi and 0.0 <= self.phi < TWO_PI):
            raise ValueError(f"angles not canonical: theta={self.theta!r}, phi={self.phi!r}; "
                             "use AngleSet.canonical")

    @classmethod
    def canonical(cls, theta: float, phi: float) -> tuple["AngleSet", int]:
        """Map arbitrary angles into the canonical box.

        Returns the angle set and a parity ``+1``/``-1``.  Reflecting
        ``theta -> -theta`` needs ``phi -> phi + pi``, which sends
        ``(a, b) -> (-a, -b)`` and so flips the sign of every coefficient;
        the parity records that flip.
        """
        theta = math.remainder(float(theta), TWO_PI)  # (-pi, pi]
        parity = 1
        if theta < 0.0:
            theta = -theta
            phi = phi + math.pi
            parity = -1
        phi = float(phi) % TWO_PI
        if phi >= TWO_PI:  # float rounding of tiny negatives
            phi = 0.0
        return cls(theta, phi), parity

    @property
    def degrees(self) -> tuple[float, float]:
        return math.degrees(self.theta), math.degrees(self.phi)


@dataclass(frozen=True)
class PolarizationPair:
    a: np.ndarray
    b: np.ndarray
    angles: AngleSet


@dataclass(frozen=True)
class SolverOptions:
    grid_points: int = 3600
    refine_tol: float = 1e-12
    verify_tol: float = 1e-10
    symmetry_tol: float = SYMMETRY_TOL


@dataclass
class OptResult:
    """Result of a reduced maximization.

    ``chi_eff(t, pm, angles_star)`` equals ``sign * value``.  ``sign`` is
    ``-1`` only for ``d_eff1`` optima whose e-wave needs ``sin(theta) < 0``;
    those are reported at the sign-flipped canonical angles.
    """

    value: float
    a_star: np.ndarray
    z_star: tuple[float, float]
    angles_star: AngleSet
    evaluations: int
    method: str
    sign: int = 1
    degenerate: bool = False
    verified: bool = True
    verify_error: float = 0.0
    pm: PhaseMatchType = PhaseMatchType.OO_E


@dataclass
class ScanGrid:
    theta: np.ndarray
    phi: np.ndarray
    values: np.ndarray = field(repr=False)
    pm: PhaseMatchType = PhaseMatchType.OO_E

    @property
    def argmax(self) -> tuple[int, int]:
        idx = np.unravel_index(int(np.argmax(np.abs(self.values))), self.values.shape)
        return int(idx[0]), int(idx[1])

    @property
    def max_abs(self) -> float:
        i, j = self.argmax
        return float(abs(self.values[i, j]))

    def rows(self):
        """Yield ``(theta, phi, value)`` in theta-major order."""
        for i, th in enumerate(self.theta):
            for j, ph in enumerate(self.phi):
                yield float(th), float(ph), float(self.values[i, j])

    def to_csv(self, path_or_file) -> None:
        lines = ["theta,phi,value"]
        lines.extend(f"{th:.17g},{ph:.17g},{v:.17g}" for th, ph, v in self.rows())
        text = "\n".join(lines) + "\n"
        if hasattr(path_or_file, "write"):
            path_or_file.write(text)
        else:
            with open(path_or_file, "w", newline="\n", encoding="utf-8") as fh:
                fh.write(text)


def o_polarization(phi: float) -> np.ndarray:
    return np.array([math.sin(phi), -math.cos(phi), 0.0])


def e_polarization(theta: float, phi: float) -> np.ndarray:
    ct = math.cos(theta)
    return np.array([-ct * math.cos(phi), -ct * math.sin(phi), math.sin(theta)])


def polarization_pair(theta: float, phi: float) -> PolarizationPair:
    angles, parity = AngleSet.canonical(theta, phi)
    return PolarizationPair(o_polarization(angles.phi), e_polarization(angles.theta, angles.phi),
                            angles)


def _angles(angles) -> tuple[float, float]:
    if isinstance(angles, AngleSet):
        return angles.theta, angles.phi
    theta, phi = angles
    return float(theta), float(phi)


def chi_eff(t, pm, angles) -> float:
    """Effective coefficient for one phase-matching type at ``angles = (theta, phi)``."""
    pm = PhaseMatchType.parse(pm)
    theta, phi = _angles(angles)
    vecs = {"a": o_polarization(phi), "b": e_polarization(theta, phi)}
    u, v, w = (vecs[s] for s in _SLOTS[pm])
    return float(np.einsum("ijk,i,j,k->", t, u, v, w))


def chi_eff_grid(t, pm, theta, phi) -> np.ndarray:
    """Vectorized :func:`chi_eff` over broadcast arrays of angles."""
    pm = PhaseMatchType.parse(pm)
    theta, phi = np.broadcast_arrays(np.asarray(theta, float), np.asarray(phi, float))
    sp, cp, st, ct = np.sin(phi), np.cos(phi), np.sin(theta), np.cos(theta)
    vecs = {
        "a": np.stack([sp, -cp, np.zeros_like(sp)], axis=-1),
        "b": np.stack([-ct * cp, -ct * sp, st], axis=-1),
    }
    u, v, w = (vecs[s] for s in _SLOTS[pm])
    return trilinear(t, u, v, w)


def eig2_max(m11: float, m12: float, m22: float) -> tuple[float, np.ndarray]:
    """Largest eigenvalue and unit eigenvector of ``[[m11, m12], [m12, m22]]``.

    The eigenvector's first nonzero component is positive; for a multiple of
    the identity ``(1, 0)`` is returned.
    """
    lam = 0.5 * (m11 + m22 + math.hypot(m11 - m22, 2.0 * m12))
    if m12 == 0.0:
        v = np.array([1.0, 0.0]) if m11 >= m22 else np.array([0.0, 1.0])
        return lam, v
    c1 = np.array([m12, lam - m11])
    c2 = np.array([lam - m22, m12])
    v = c1 if np.abs(c1).max() >= np.abs(c2).max() else c2
    v = v / np.abs(v).max()  # rescale first so tiny entries do not underflow
    v = v / np.linalg.norm(v)
    if v[0] < 0 or (v[0] == 0 and v[1] < 0):
        v = -v
    return lam, v


def _eig2_max_values(m11, m12, m22):
    return 0.5 * (m11 + m22 + np.hypot(m11 - m22, 2.0 * m12))


def _o_components(phi):
    return np.sin(phi), -np.cos(phi)


def _deff1_objective(t, phi):
    a1, a2 = _o_components(phi)
    q1, q2, q3 = q_forms_batch(t, a1, a2)
    return np.hypot(a2 * q1 - a1 * q2, q3)


def _deff2_objective(t, phi):
    a1, a2 = _o_components(phi)
    return _eig2_max_values(*r_forms_batch(t, a1, a2))


def periodic_peaks(f, grid_points: int = 3600, refine_tol: float = 1e-12,
                   max_candidates: int = 16):
    """Refined local maxima of a vectorized 2 pi-periodic function of one angle.

    Samples ``grid_points`` uniform points on [0, 2 pi) and refines every
    discrete local maximum (best ``max_candidates`` of them) with a bounded
    Brent search inside its neighbouring grid cells.

    Returns ``(peaks, evaluations)`` with ``peaks`` a list of ``(phi, value)``
    sorted by decreasing value.
    """
    if grid_points < 8:
        raise ValueError("grid_points must be at least 8")
    h = TWO_PI / grid_points
    phis = np.arange(grid_points) * h
    vals = np.asarray(f(phis), dtype=float)
    nfev = grid_points
    left, right = np.roll(vals, 1), np.roll(vals, -1)
    idx = np.flatnonzero((vals >= left) & (vals >= right))
    if idx.size == 0:
        idx = np.array([int(np.argmax(vals))])
    # highest first, ties by lowest index
    idx = idx[np.lexsort((idx, -vals[idx]))][:max_candidates]
    peaks = []
    for i in idx:
        center = phis[i]
        res = minimize_scalar(lambda p: -float(f(np.array([p]))[0]),
                              bounds=(center - h, center + h), method="bounded",
                              options={"xatol": refine_tol, "maxiter": 500})
        nfev += res.nfev
        if -res.fun > vals[i]:
            peaks.append((float(res.x) % TWO_PI, float(-res.fun)))
        else:
            peaks.append((float(center), float(vals[i])))
    peaks.sort(key=lambda pv: -pv[1])
    return peaks, nfev


def maximize_periodic(f, grid_points: int = 3600, refine_tol: float = 1e-12):
    """Global maximum of a 2 pi-periodic function: ``(phi_star, value, evaluations)``."""
    peaks, nfev = periodic_peaks(f, grid_points, refine_tol)
    return peaks[0][0], peaks[0][1], nfev


def _scale(t) -> float:
    return float(np.max(np.abs(t))) if np.size(t) else 0.0


def d_eff1(t, opts: SolverOptions | None = None) -> OptResult:
    """Largest oo-e coefficient via the one-variable reduction.

    ``max_z  z1 (a2 Q1 - a1 Q2) + z2 Q3`` is the norm of
    ``w = (a2 Q1 - a1 Q2, Q3)``, attained at ``z = w / |w|``.
    """
    opts = opts or SolverOptions()
    t = as_tensor3(t)
    peaks, nfev = periodic_peaks(lambda p: _deff1_objective(t, p),
                                 opts.grid_points, opts.refine_tol)
    # Among tied optima prefer one reachable with sin(theta) >= 0 (sign +1).
    top = peaks[0][1]
    tied = [p for p, v in peaks if v >= top - 1e-13 * max(abs(top), 1e-300)]
    q3s = [q_forms_batch(t, *_o_components(p))[2] for p in tied]
    phi = tied[int(np.argmax(q3s))]
    a = o_polarization(phi)
    q1, q2, q3 = q_forms_batch(t, a[0], a[1])
    w = np.array([a[1] * q1 - a[0] * q2, q3])
    norm_w = float(np.hypot(*w))
    degenerate = norm_w <= 1e-14 * max(_scale(t), 1e-300)
    if degenerate:
        angles, sign = AngleSet(math.pi / 2, phi), 1
        value = 0.0
    else:
        value = norm_w
        z = w / norm_w
        angles, sign = AngleSet.canonical(math.atan2(z[1], z[0]), phi)
    return _finish(t, PhaseMatchType.OO_E, value, angles, sign, nfev, degenerate,
                   "grid+brent(phi); z closed form", opts)


def d_eff2(t, opts: SolverOptions | None = None) -> OptResult:
    """Largest ee-o coefficient via the one-variable reduction.

    For fixed ``a`` the objective is ``z^T M(a) z`` with
    ``M = [[R11, R12], [R12, R22]]``; its maximum over the unit circle is the
    top eigenvalue.  Requires ``T_ijk = T_ikj``.

    Raises:
        SymmetryError: for tensors that are not piezoelectric-type.
    """
    opts = opts or SolverOptions()
    t = as_tensor3(t)
    require_piezo(t, opts.symmetry_tol)
    phi, value, nfev = maximize_periodic(lambda p: _deff2_objective(t, p),
                                         opts.grid_points, opts.refine_tol)
    a = o_polarization(phi)
    r11, r12, r22 = (float(r) for r in r_forms_batch(t, a[0], a[1]))
    value, z = eig2_max(r11, r12, r22)
    if z[1] < 0:  # quadratic in z
        z = -z
    z = z + 0.0
    degenerate = abs(value) <= 1e-14 * max(_scale(t), 1e-300)
    if degenerate:
        value = 0.0
    angles = AngleSet(math.atan2(z[1], z[0]), phi)
    return _finish(t, PhaseMatchType.EE_O, value, angles, 1, nfev, degenerate,
                   "grid+brent(phi); z top eigenvector", opts)


def _finish(t, pm, value, angles, sign, nfev, degenerate, method, opts) -> OptResult:
    direct = chi_eff(t, pm, angles)
    err = abs(direct - sign * value)
    return OptResult(
        value=float(value),
        a_star=o_polarization(angles.phi),
        z_star=(math.cos(angles.theta), math.sin(angles.theta)),
        angles_star=angles,
        evaluations=int(nfev),
        method=method,
        sign=sign,
        degenerate=bool(degenerate),
        verified=err <= opts.verify_tol,
        verify_error=float(err),
        pm=pm,
    )


def angle_scan(t, pm, n_theta: int, n_phi: int) -> ScanGrid:
    """Tabulate ``chi_eff`` on ``theta in [0, pi]`` (inclusive) x ``phi in [0, 2 pi)``."""
    if n_theta < 2 or n_phi < 2:
        raise ValueError("angle_scan needs at least 2 points per axis")
    pm = PhaseMatchType.parse(pm)
    theta = np.linspace(0.0, math.pi, n_theta)
    phi = np.arange(n_phi) * (TWO_PI / n_phi)
    values = chi_eff_grid(t, pm, theta[:, None], phi[None, :]) + 0.0
    return ScanGrid(theta, phi, values, pm)
