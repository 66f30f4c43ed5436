"""Brute-force maximizers used as ground truth.

Both oracles evaluate the defining sums directly on a uniform angle grid and
polish the best grid cells with a derivative-free compass search.  They never
touch the Q/R reductions or the alternating solver, so agreement between the
two code paths is evidence rather than tautology.

Grids are nested under doubling: ``theta_i = i pi / n`` (``i = 0..n``) and
``phi_j = 2 pi j / n`` (``j = 0..n-1``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .shg_models import AngleSet, PhaseMatchType, chi_eff_grid
from .tensor_core import as_tensor3

MIN_GRID = 16
N_CANDIDATES = 8


@dataclass
class OracleResult:
    value: float
    argmax: tuple
    coarse_value: float
    grid_n: int
    evaluations: int = 0
    x: np.ndarray | None = None
    y: np.ndarray | None = None


def compass_search(f, x0, step0, min_step=1e-10):
    """Maximize ``f`` by compass (coordinate pattern) search with step halving.

    ``f`` is vectorized: it maps an ``(m, d)`` array of points to ``m``
    values.  Each poll evaluates the ``2 d`` coordinate moves together and
    takes the best improving one; without improvement the step is halved.
    Returns ``(x, f(x), evaluations)``; the value never drops below ``f(x0)``.
    """
    x = np.array(x0, dtype=float)
    d = x.size
    step = np.broadcast_to(np.asarray(step0, dtype=float), x.shape).copy()
    fx = float(f(x[None, :])[0])
    nfev = 1
    dirs = np.vstack([np.eye(d), -np.eye(d)])
    while np.max(step) >= min_step:
        trial = x + dirs * step
        vals = f(trial)
        nfev += len(trial)
        k = int(np.argmax(vals))
        if vals[k] > fx:
            x, fx = trial[k], float(vals[k])
        else:
            step *= 0.5
    return x, fx, nfev


def _grid(n):
    if n < MIN_GRID:
        raise ValueError(f"oracle grid needs n >= {MIN_GRID}, got {n}")
    return np.arange(n + 1) * (math.pi / n), np.arange(n) * (2.0 * math.pi / n)


def _peak_candidates(vals, k=N_CANDIDATES):
    """Flat indices of the ``k`` highest 8-neighbour local maxima (phi periodic)."""
    padded = np.pad(vals, ((1, 1), (0, 0)), constant_values=-np.inf)
    mask = np.ones(vals.shape, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            shifted = np.roll(padded, dj, axis=1)[1 + di:1 + di + vals.shape[0]]
            mask &= vals >= shifted
    flat = np.flatnonzero(mask)
    if flat.size == 0:
        flat = np.array([int(np.argmax(vals))])
    order = np.lexsort((flat, -vals.ravel()[flat]))
    return flat[order][:k]


def grid_max_deff(t, pm, n: int = 256) -> OracleResult:
    """Max of ``|chi_eff(t, pm, theta, phi)|`` by grid search plus compass refinement."""
    t = as_tensor3(t)
    pm = PhaseMatchType.parse(pm)
    theta, phi = _grid(n)
    vals = np.abs(chi_eff_grid(t, pm, theta[:, None], phi[None, :]))
    coarse = float(vals.max())
    nfev = vals.size

    def f(p):
        return np.abs(chi_eff_grid(t, pm, p[:, 0], p[:, 1]))

    best_p, best_v = None, -math.inf
    for idx in _peak_candidates(vals):
        i, j = np.unravel_index(idx, vals.shape)
        p, v, k = compass_search(f, (theta[i], phi[j]), (math.pi / n, 2 * math.pi / n))
        nfev += k
        if v > best_v:
            best_p, best_v = p, v
    angles, _ = AngleSet.canonical(best_p[0], best_p[1])
    return OracleResult(max(best_v, coarse), (angles.theta, angles.phi), coarse, n, nfev)


def _sphere_points(alpha, beta):
    sa = np.sin(alpha)
    return np.stack([sa * np.cos(beta), sa * np.sin(beta), np.cos(alpha) + 0 * beta], axis=-1)


def _norm_tyy(t, y):
    return np.linalg.norm(np.einsum("ijk,...j,...k->...i", t, y, y), axis=-1)


def grid_max_ceig(t, n: int = 512) -> OracleResult:
    """Max over unit ``y`` of ``|T y y|`` (the largest C-eigenvalue for piezo-type ``t``).

    ``y`` is parameterized by polar angle ``alpha`` and azimuth ``beta``; each
    pole is sampled once.
    """
    t = as_tensor3(t)
    alpha, beta = _grid(n)
    vals = _norm_tyy(t, _sphere_points(alpha[:, None], beta[None, :]))
    vals[0, 1:] = -np.inf
    vals[-1, 1:] = -np.inf
    coarse = float(vals.max())
    nfev = (n - 1) * n + 2

    def f(p):
        return _norm_tyy(t, _sphere_points(p[:, 0], p[:, 1]))

    best_p, best_v = None, -math.inf
    for idx in _peak_candidates(vals):
        i, j = np.unravel_index(idx, vals.shape)
        p, v, k = compass_search(f, (alpha[i], beta[j]), (math.pi / n, 2 * math.pi / n))
        nfev += k
        if v > best_v:
            best_p, best_v = p, v
    y = _sphere_points(best_p[0], best_p[1])
    g = np.einsum("ijk,j,k->i", t, y, y)
    ng = np.linalg.norm(g)
    x = g / ng if ng > 0 else np.array([1.0, 0.0, 0.0])
    return OracleResult(max(best_v, coarse), (float(best_p[0]), float(best_p[1])), coarse, n,
                        nfev, x=x, y=y)
