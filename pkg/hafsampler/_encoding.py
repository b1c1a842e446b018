"""Compile a graph into the edge-mixture sampling program.

After the diagonal fix ``A_ii = sum_{j != i} A_ij`` the adjacency matrix is
completely positive: ``A = H H^T`` where column ``(i, j)`` of ``H`` holds
``sqrt(A_ij)`` at rows ``i`` and ``j``. Normalizing each column gives
``V`` (entries 1/2 at ``i`` and ``j``), the squared column sums give
``D^2 = diag(4 A_ij)`` and ``Q = D^2 / Tr[D^2]``. Drawing circuit ``(i, j)``
with probability ``q_(i,j) = A_ij / S`` and emitting both endpoints is the
whole sampler; :class:`EdgeModel` stores exactly that.

The same module holds the GBS-side calibration: Takagi values, the
mean-photon scale and loss-compensated squeezing.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import bisect

from ._errors import CalibrationError, EmptySectorError, GraphValidationError
from ._types import Graph

logger = logging.getLogger(__name__)

_BRACKET_MARGIN = 1e-12
_MAX_BISECT_ITER = 200
_PHOTON_TOL = 1e-9


def _square(m) -> np.ndarray:
    mat = np.array(m.adj if isinstance(m, Graph) else m, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise GraphValidationError(f"expected a square matrix, got shape {mat.shape}")
    if not np.array_equal(mat, mat.T):
        raise GraphValidationError("expected a symmetric matrix")
    return mat


def diagonal_dominant_fix(m) -> np.ndarray:
    """Copy of ``m`` whose diagonal equals the off-diagonal row sums."""
    mat = _square(m)
    off = mat - np.diag(np.diag(mat))
    if np.any(off < 0):
        raise GraphValidationError("diagonal fix needs nonnegative off-diagonal entries")
    np.fill_diagonal(mat, off.sum(axis=1))
    return mat


def build_H(m) -> np.ndarray:
    """``M x M^2`` factor with ``H @ H.T == m`` for a diagonally fixed ``m``.

    Column ``M*i + j`` (0-based, ``i < j``) is ``b^(i,j)``: ``sqrt(m[i, j])``
    at rows ``i`` and ``j``. All other columns, including ``M*i + i``, are zero.
    """
    mat = _square(m)
    M = mat.shape[0]
    off = mat - np.diag(np.diag(mat))
    if np.any(off < 0):
        raise GraphValidationError("H factor needs nonnegative off-diagonal entries")
    row_sums = off.sum(axis=1)
    if not np.allclose(np.diag(mat), row_sums, rtol=1e-12, atol=1e-12):
        raise GraphValidationError(
            "matrix is not diagonally fixed; apply diagonal_dominant_fix first")
    H = np.zeros((M, M * M))
    iu, ju = np.triu_indices(M, 1)
    cols = M * iu + ju
    root = np.sqrt(mat[iu, ju])
    H[iu, cols] = root
    H[ju, cols] = root
    return H


@dataclass(frozen=True, eq=False)
class EdgeModel:
    """Positive-weight edges with their selection probabilities.

    ``q_(i,j) = A_ij / S`` with ``S = sum_{i<j} A_ij``; ``trace_coeff``
    is ``Tr[D^2] = 4 S`` so that ``trace_coeff * q_(i,j) / 4 == A_ij``.
    """

    n: int
    endpoints: np.ndarray  # (E, 2) int, i < j, row-major order
    weights: np.ndarray    # (E,) A_ij > 0
    cumprob: np.ndarray    # (E,) strictly increasing, last == 1
    trace_coeff: float

    @property
    def num_edges(self) -> int:
        return len(self.weights)

    @property
    def total_weight(self) -> float:
        return self.trace_coeff / 4.0

    @property
    def q(self) -> np.ndarray:
        return np.diff(self.cumprob, prepend=0.0)

    @property
    def edges(self) -> list[tuple[int, int, float]]:
        return [(int(i), int(j), float(w))
                for (i, j), w in zip(self.endpoints, self.weights)]

    def pick(self, u: np.ndarray) -> np.ndarray:
        """Edge indices for uniforms ``u`` in [0, 1) by CDF inversion."""
        idx = np.searchsorted(self.cumprob, u, side="right")
        return np.minimum(idx, self.num_edges - 1)

    def reconstruct(self) -> np.ndarray:
        """``V D^2 V^T``: equals the diagonally fixed adjacency matrix."""
        out = np.zeros((self.n, self.n))
        coeff = self.trace_coeff * self.q / 4.0
        i, j = self.endpoints[:, 0], self.endpoints[:, 1]
        out[i, j] = coeff
        out[j, i] = coeff
        np.add.at(out, (i, i), coeff)
        np.add.at(out, (j, j), coeff)
        return out


def build_edge_model(g: Graph) -> EdgeModel:
    edges = g.edges()
    if not edges:
        raise EmptySectorError("graph has no edges; nothing to sample")
    endpoints = np.array([(i, j) for i, j, _ in edges], dtype=np.intp)
    weights = np.array([w for _, _, w in edges], dtype=float)
    total = float(np.sum(weights))
    cumprob = np.cumsum(weights / total)
    cumprob[-1] = 1.0
    for arr in (endpoints, weights, cumprob):
        arr.setflags(write=False)
    logger.debug("edge model: %d edges, S=%g", len(weights), total)
    return EdgeModel(n=g.n, endpoints=endpoints, weights=weights,
                     cumprob=cumprob, trace_coeff=4.0 * total)


def takagi_singular_values(m) -> np.ndarray:
    """Takagi values of a real symmetric matrix: |eigenvalues|, nonincreasing."""
    mat = _square(m)
    vals = np.abs(np.linalg.eigvalsh(mat))
    return np.sort(vals)[::-1]


@dataclass(frozen=True, eq=False)
class SqueezeSpec:
    """Squeezing program ``tanh r_i = c * lambda_i`` for a target mean photon number.

    ``eta`` is the transmission the squeezers were compensated for; the
    lossless program has ``eta == 1``.
    """

    singvals: np.ndarray
    scale: float
    squeezers: np.ndarray
    mean_photons: float
    eta: float = 1.0

    @property
    def r_max(self) -> float:
        return float(np.max(self.squeezers)) if len(self.squeezers) else 0.0

    @property
    def detected_mean_photons(self) -> float:
        """Mean photon number after transmission ``eta``."""
        return float(self.eta * np.sum(np.sinh(self.squeezers) ** 2))

    def to_dict(self) -> dict:
        return {
            "singvals": [float(x) for x in self.singvals],
            "scale": float(self.scale),
            "squeezers": [float(x) for x in self.squeezers],
            "mean_photons": float(self.mean_photons),
            "eta": float(self.eta),
            "r_max": self.r_max,
        }


def _mean_photons(c: float, lam: np.ndarray) -> float:
    x2 = (c * lam) ** 2
    return float(np.sum(x2 / (1.0 - x2)))


def calibrate_scale(singvals, k: float) -> SqueezeSpec:
    """Find ``c`` in (0, 1/lambda_max) with ``sum sinh^2(atanh(c lambda_i)) == k``."""
    lam = np.sort(np.abs(np.asarray(singvals, dtype=float)))[::-1]
    if lam.size == 0 or lam[0] <= 0:
        raise CalibrationError("all singular values are zero")
    if not k > 0:
        raise CalibrationError(f"target mean photon number must be positive, got {k}")
    hi = (1.0 - _BRACKET_MARGIN) / lam[0]
    if _mean_photons(hi, lam) < k:
        raise CalibrationError(f"target {k} photons is beyond the calibration bracket")
    try:
        c = bisect(lambda c: _mean_photons(c, lam) - k, 0.0, hi,
                   xtol=1e-300, rtol=4 * np.finfo(float).eps,
                   maxiter=_MAX_BISECT_ITER)
    except RuntimeError as exc:
        raise CalibrationError(str(exc)) from exc
    r = np.arctanh(c * lam)
    mean = float(np.sum(np.sinh(r) ** 2))
    if abs(mean - k) > _PHOTON_TOL:
        raise CalibrationError(f"calibration residual {abs(mean - k):.3g} exceeds {_PHOTON_TOL}")
    logger.info("calibrated scale c=%.12g for %g photons (r_max=%.4f)", c, k, float(r[0]))
    return SqueezeSpec(singvals=lam, scale=float(c), squeezers=r, mean_photons=mean)


def loss_compensate(r, eta: float):
    """Input squeezing ``r'`` with ``eta * sinh^2(r') == sinh^2(r)``."""
    if not 0.0 < eta <= 1.0:
        raise ValueError(f"transmission eta must lie in (0, 1], got {eta}")
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0):
        raise ValueError("squeezing parameters must be nonnegative")
    out = np.arcsinh(np.sqrt(np.sinh(r_arr) ** 2 / eta))
    if eta == 1.0:
        out = r_arr.copy()
    return float(out) if np.ndim(out) == 0 else out


def compensate_spec(spec: SqueezeSpec, eta: float) -> SqueezeSpec:
    """Spec whose squeezers are raised to offset transmission ``eta``."""
    if spec.eta != 1.0:
        raise ValueError("spec is already loss-compensated")
    return replace(spec, squeezers=np.asarray(loss_compensate(spec.squeezers, eta)), eta=eta)


def squeeze_spec(g: Graph, k: float, eta: float = 1.0) -> SqueezeSpec:
    """Calibrate the GBS program for ``g`` to ``k`` mean photons (after loss)."""
    spec = calibrate_scale(takagi_singular_values(g.adj), k)
    if eta != 1.0:
        spec = compensate_spec(spec, eta)
    return spec
