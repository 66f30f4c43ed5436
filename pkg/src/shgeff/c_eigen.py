"""Largest C-eigenvalue of a piezoelectric-type tensor.

A C-eigentriple ``(lam, x, y)`` with unit ``x, y`` solves

    T y y = lam x,        T x y = lam y.

The largest C-eigenvalue is ``max T x y y`` over the two unit spheres, which
is maximized here by alternating exact block updates from many starts:

* ``y`` <- top eigenvector of the symmetric matrix ``M(x)_jk = sum_i T_ijk x_i``,
* ``x`` <- ``T y y / |T y y|``.

Both updates are exact maximizations of ``T x y y`` in one block, so the
objective never decreases.  The fixed points are C-eigentriples; global
optimality is not guaranteed and comes from the multistart only.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .tensor_core import SYMMETRY_TOL, as_tensor3, contract_xy, contract_yy, require_piezo

UNIT_TOL = 1e-12
DEFAULT_SEED = 0x5EED


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class CEigenTriple:
    lam: float
    x: np.ndarray
    y: np.ndarray


@dataclass(frozen=True)
class CEigenConfig:
    tol: float = 1e-13
    residual_tol: float = 1e-10
    max_iter: int = 500
    n_random: int = 12
    seed: int = DEFAULT_SEED
    symmetry_tol: float = SYMMETRY_TOL


@dataclass
class CEigenReport:
    best: CEigenTriple
    starts: int
    iterations: list[int]
    residual: float
    degenerate: bool = False
    converged: bool = True
    best_start: int = 0
    method: str = "multistart-alternating"
    history: list[float] = field(default_factory=list, repr=False)

    @property
    def lam(self) -> float:
        return self.best.lam


def _check_unit(v, name):
    v = np.asarray(v, dtype=float)
    if v.shape != (3,):
        raise ValueError(f"{name} must be a 3-vector")
    if abs(np.linalg.norm(v) - 1.0) > UNIT_TOL:
        raise ValueError(f"{name} must be a unit vector (|{name}| = {np.linalg.norm(v)!r})")
    return v


def lambda_of_y(t, y) -> float:
    """``max_x T x y y = |T y y|`` for a unit vector ``y``."""
    y = _check_unit(y, "y")
    return float(np.linalg.norm(contract_yy(t, y)))


def residual(t, triple: CEigenTriple) -> float:
    """``|T y y - lam x| + |T x y - lam y|``."""
    x = _check_unit(triple.x, "x")
    y = _check_unit(triple.y, "y")
    lam = triple.lam
    return float(np.linalg.norm(contract_yy(t, y) - lam * x)
                 + np.linalg.norm(contract_xy(t, x, y) - lam * y))


def sign_quadruple(triple: CEigenTriple) -> list[CEigenTriple]:
    lam, x, y = triple.lam, np.asarray(triple.x), np.asarray(triple.y)
    return [
        CEigenTriple(lam, x, y),
        CEigenTriple(lam, x, -y),
        CEigenTriple(-lam, -x, y),
        CEigenTriple(-lam, -x, -y),
    ]


def rank_one_error(t, triple: CEigenTriple) -> float:
    """Frobenius distance from ``t`` to ``lam * x o y o y``."""
    x, y = np.asarray(triple.x, float), np.asarray(triple.y, float)
    approx = triple.lam * np.einsum("i,j,k->ijk", x, y, y)
    return float(np.linalg.norm(np.asarray(t, float) - approx))


def default_starts(n_random: int = 12, seed: int = DEFAULT_SEED) -> np.ndarray:
    """Signed axes, signed main diagonals, then seeded random unit vectors."""
    axes = np.vstack([np.eye(3), -np.eye(3)])
    diags = np.array(list(itertools.product((1.0, -1.0), repeat=3))) / math.sqrt(3.0)
    rng = np.random.default_rng(seed)
    rand = rng.standard_normal((n_random, 3))
    rand /= np.linalg.norm(rand, axis=1, keepdims=True)
    return np.vstack([axes, diags, rand])


def _top_eigvec(m, y_prev, gap_tol=1e-10):
    w, v = np.linalg.eigh(m)
    scale = max(1.0, abs(w[-1]))
    top = v[:, w >= w[-1] - gap_tol * scale]
    if top.shape[1] == 1:
        y = top[:, 0]
    else:
        # Repeated top eigenvalue: stay as close as possible to the previous iterate.
        y = None
        if y_prev is not None:
            proj = top @ (top.T @ y_prev)
            if np.linalg.norm(proj) > 1e-8:
                y = proj / np.linalg.norm(proj)
        if y is None:
            cands = [c * (1 if c[np.flatnonzero(np.abs(c) > 1e-15)[0]] > 0 else -1)
                     for c in top.T]
            y = max(cands, key=lambda c: tuple(np.round(c, 12)))
    if y_prev is not None:
        if np.dot(y, y_prev) < 0:
            y = -y
    else:
        nz = np.flatnonzero(np.abs(y) > 1e-15)
        if nz.size and y[nz[0]] < 0:
            y = -y
    return y / np.linalg.norm(y)


def alternate(t, x0, cfg: CEigenConfig | None = None):
    """One alternating run from ``x0``.

    Returns ``(triple, iterations, converged, history)``, or ``None`` when the
    run hits ``T y y = 0`` (no ascent direction from this start).
    """
    cfg = cfg or CEigenConfig()
    x = np.asarray(x0, dtype=float) / np.linalg.norm(x0)
    y = None
    lam_prev = -math.inf
    history = []
    scale = float(np.max(np.abs(t)))
    for it in range(1, cfg.max_iter + 1):
        y = _top_eigvec(np.einsum("ijk,i->jk", t, x), y)
        g = contract_yy(t, y)
        ng = float(np.linalg.norm(g))
        if ng <= 1e-15 * max(scale, 1e-300):
            return None
        x = g / ng
        lam = ng
        if lam < lam_prev - 1e-12 * scale:
            raise AssertionError(f"alternating ascent decreased: {lam_prev!r} -> {lam!r}")
        history.append(lam)
        triple = CEigenTriple(lam, x, y)
        if lam - lam_prev < cfg.tol and residual(t, triple) <= cfg.residual_tol:
            return triple, it, True, history
        lam_prev = lam
    return triple, cfg.max_iter, residual(t, triple) <= cfg.residual_tol, history


def solve_lambda_max(t, cfg: CEigenConfig | None = None) -> CEigenReport:
    """Largest C-eigenvalue with its left/right C-eigenvectors.

    Raises:
        SymmetryError: if ``t`` is not symmetric in its last two indices.
    """
    cfg = cfg or CEigenConfig()
    t = as_tensor3(t)
    require_piezo(t, cfg.symmetry_tol)
    starts = default_starts(cfg.n_random, cfg.seed)
    best = None
    iterations = []
    for k, x0 in enumerate(starts):
        out = alternate(t, x0, cfg)
        if out is None:
            iterations.append(0)
            continue
        triple, its, conv, hist = out
        iterations.append(its)
        if best is None or triple.lam > best[0].lam:
            best = (triple, conv, k, hist)
    if best is None:
        e1 = np.array([1.0, 0.0, 0.0])
        zero = CEigenTriple(0.0, e1, e1.copy())
        return CEigenReport(zero, len(starts), iterations, residual(t, zero), degenerate=True)
    triple, conv, k, hist = best
    return CEigenReport(triple, len(starts), iterations, residual(t, triple),
                        converged=conv, best_start=k, history=hist)
