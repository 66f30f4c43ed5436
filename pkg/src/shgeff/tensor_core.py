"""Dense 3x3x3 tensors: validation, symmetry classes, Voigt notation and contractions.

Tensors are plain ``numpy`` arrays of shape ``(3, 3, 3)``.  Indices are
0-based in code; docstrings and file formats use the crystallographic
1-based convention (``T_123`` is ``t[0, 1, 2]``).
"""
from __future__ import annotations

import enum
import itertools
from typing import NamedTuple

import numpy as np

SYMMETRY_TOL = 1e-12

# Voigt pair index (0-based) for each (j, k): 11->1, 22->2, 33->3, 23->4, 13->5, 12->6
VOIGT_INDEX = np.array([[0, 5, 4],
                        [5, 1, 3],
                        [4, 3, 2]])
VOIGT_PAIRS = [(0, 0), (1, 1), (2, 2), (1, 2), (0, 2), (0, 1)]


class SymmetryError(ValueError):
    """Raised when a tensor lacks the index symmetry an operation needs."""

    def __init__(self, message, worst_index=None, deviation=None):
        super().__init__(message)
        self.worst_index = worst_index
        self.deviation = deviation


class SymmetryClass(str, enum.Enum):
    GENERAL = "General"
    PIEZO_TYPE = "PiezoType"
    KLEINMAN = "Kleinman"


class QForms(NamedTuple):
    q1: float
    q2: float
    q3: float


class RForms(NamedTuple):
    r11: float
    r12: float
    r22: float


def as_tensor3(t) -> np.ndarray:
    """Validate and return a read-only float copy of a 3x3x3 tensor."""
    arr = np.array(t, dtype=float)
    if arr.shape != (3, 3, 3):
        raise ValueError(f"expected a 3x3x3 tensor, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("tensor entries must be finite")
    arr.setflags(write=False)
    return arr


def _as_vec3(v) -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    if arr.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {arr.shape}")
    return arr


def from_voigt(d) -> np.ndarray:
    """Expand a 3x6 contracted matrix into a tensor symmetric in its last two indices."""
    d = np.array(d, dtype=float)
    if d.shape != (3, 6):
        raise ValueError(f"expected a 3x6 Voigt matrix, got shape {d.shape}")
    if not np.all(np.isfinite(d)):
        raise ValueError("Voigt entries must be finite")
    return as_tensor3(d[:, VOIGT_INDEX])


def piezo_deviation(t) -> tuple[float, tuple[int, int, int]]:
    """Largest |T_ijk - T_ikj| and the (1-based) index where it occurs."""
    t = np.asarray(t, dtype=float)
    dev = np.abs(t - t.transpose(0, 2, 1))
    idx = np.unravel_index(int(np.argmax(dev)), dev.shape)
    return float(dev[idx]), tuple(int(i) + 1 for i in idx)


def to_voigt(t, tol: float = SYMMETRY_TOL) -> np.ndarray:
    """Contract a piezoelectric-type tensor to its 3x6 Voigt matrix.

    Raises:
        SymmetryError: if ``|T_ijk - T_ikj| > tol`` anywhere; the error
            carries the worst 1-based index triple.
    """
    t = as_tensor3(t)
    dev, worst = piezo_deviation(t)
    if dev > tol:
        raise SymmetryError(
            f"tensor is not symmetric in its last two indices: "
            f"|T{worst} - T{(worst[0], worst[2], worst[1])}| = {dev:.3g} > {tol:g}",
            worst_index=worst, deviation=dev)
    d = np.empty((3, 6))
    for col, (j, k) in enumerate(VOIGT_PAIRS):
        d[:, col] = t[:, j, k]
    return d


def classify_symmetry(t, tol: float = SYMMETRY_TOL) -> SymmetryClass:
    """Most specific of General / PiezoType / Kleinman satisfied within ``tol``."""
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    t = np.asarray(t, dtype=float)
    if np.max(np.abs(t - t.transpose(0, 2, 1))) > tol:
        return SymmetryClass.GENERAL
    for perm in itertools.permutations(range(3)):
        if np.max(np.abs(t - t.transpose(perm))) > tol:
            return SymmetryClass.PIEZO_TYPE
    return SymmetryClass.KLEINMAN


def require_piezo(t, tol: float = SYMMETRY_TOL) -> None:
    dev, worst = piezo_deviation(t)
    if dev > tol:
        raise SymmetryError(
            f"piezoelectric-type symmetry required (T_ijk = T_ikj); "
            f"worst deviation {dev:.3g} at {worst}", worst_index=worst, deviation=dev)


def symmetrize_piezo(t) -> np.ndarray:
    """Average over the last two indices."""
    t = np.asarray(t, dtype=float)
    return as_tensor3(0.5 * (t + t.transpose(0, 2, 1)))


def symmetrize_full(t) -> np.ndarray:
    """Average over all six index permutations (Kleinman projection)."""
    t = np.asarray(t, dtype=float)
    acc = sum(t.transpose(p) for p in itertools.permutations(range(3)))
    return as_tensor3(acc / 6.0)


def rotate(t, rot) -> np.ndarray:
    """Apply ``T'_ijk = R_ip R_jq R_kr T_pqr``."""
    return as_tensor3(np.einsum("ip,jq,kr,pqr->ijk", rot, rot, rot, t))


def trilinear(t, u, v, w) -> np.ndarray:
    """Batched ``sum_ijk T_ijk u_i v_j w_k`` over the leading axes of ``u, v, w``."""
    t = np.asarray(t, dtype=float)
    u, v, w = np.broadcast_arrays(u, v, w)
    m = (u @ t.reshape(3, 9)).reshape(u.shape[:-1] + (3, 3))
    return np.einsum("...j,...j->...", (m @ w[..., None])[..., 0], v)


def contract_xyy(t, x, y) -> float:
    """``sum_ijk T_ijk x_i y_j y_k``."""
    return float(np.einsum("ijk,i,j,k->", t, _as_vec3(x), _as_vec3(y), _as_vec3(y)))


def contract_yy(t, y) -> np.ndarray:
    """Vector with components ``sum_jk T_ijk y_j y_k``."""
    y = _as_vec3(y)
    return np.einsum("ijk,j,k->i", t, y, y)


def contract_xy(t, x, y) -> np.ndarray:
    """Vector with components ``sum_ij T_ijk x_i y_j``."""
    return np.einsum("ijk,i,j->k", t, _as_vec3(x), _as_vec3(y))


def _check_in_plane(a) -> np.ndarray:
    a = _as_vec3(a)
    if a[2] != 0.0:
        raise ValueError(f"o-wave polarization must have a3 = 0, got a3 = {a[2]!r}")
    return a


def q_forms_batch(t, a1, a2):
    """Vectorized Q_i = sum_{j,k in {1,2}} T_ijk a_j a_k over arrays of (a1, a2)."""
    t = np.asarray(t, dtype=float)
    a1 = np.asarray(a1, dtype=float)
    a2 = np.asarray(a2, dtype=float)
    out = []
    for i in range(3):
        out.append(t[i, 0, 0] * a1 * a1 + (t[i, 0, 1] + t[i, 1, 0]) * a1 * a2
                   + t[i, 1, 1] * a2 * a2)
    return tuple(out)


def r_forms_batch(t, a1, a2):
    """Vectorized (R11, R12, R22) for a piezoelectric-type tensor.

    ``T a b b = z1^2 R11 + 2 z1 z2 R12 + z2^2 R22`` with ``b = (a2 z1, -a1 z1, z2)``.
    """
    t = np.asarray(t, dtype=float)
    a1 = np.asarray(a1, dtype=float)
    a2 = np.asarray(a2, dtype=float)
    T = lambda i, j, k: t[i - 1, j - 1, k - 1]  # noqa: E731
    r11 = ((T(1, 1, 1) - 2 * T(2, 1, 2)) * a1 * a2 ** 2
           + (T(2, 2, 2) - 2 * T(1, 1, 2)) * a1 ** 2 * a2
           + T(1, 2, 2) * a1 ** 3
           + T(2, 1, 1) * a2 ** 3)
    r12 = (T(1, 1, 3) - T(2, 2, 3)) * a1 * a2 - T(1, 2, 3) * a1 ** 2 + T(2, 1, 3) * a2 ** 2
    r22 = T(1, 3, 3) * a1 + T(2, 3, 3) * a2
    return r11, r12, r22


def q_forms(t, a) -> QForms:
    """Quadratic forms Q_1..Q_3 of the in-plane vector ``a`` (requires a3 = 0)."""
    a = _check_in_plane(a)
    return QForms(*(float(q) for q in q_forms_batch(t, a[0], a[1])))


def r_forms(t, a) -> RForms:
    """Coefficient forms R11, R12, R22 of ``T a b b`` (requires a3 = 0).

    Assumes ``T_ijk = T_ikj``; for a general tensor apply it to
    :func:`symmetrize_piezo` first.
    """
    a = _check_in_plane(a)
    return RForms(*(float(r) for r in r_forms_batch(t, a[0], a[1])))


def random_piezo(rng, low=-1.0, high=1.0) -> np.ndarray:
    """Piezoelectric-type tensor with its 18 independent entries uniform in [low, high]."""
    return from_voigt(rng.uniform(low, high, size=(3, 6)))


def random_kleinman(rng, low=-1.0, high=1.0) -> np.ndarray:
    """Fully symmetric tensor with its 10 independent entries uniform in [low, high]."""
    t = np.zeros((3, 3, 3))
    for idx in itertools.combinations_with_replacement(range(3), 3):
        v = rng.uniform(low, high)
        for perm in set(itertools.permutations(idx)):
            t[perm] = v
    return as_tensor3(t)
