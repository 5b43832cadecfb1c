"""
Diffusion geometry from the leading eigenpairs of the random-walk matrix.

P = D^{-1} W is conjugate to the symmetric S = D^{-1/2} W D^{-1/2}; the
eigenvectors v_k of S give right eigenvectors psi_k = sqrt(vol) D^{-1/2} v_k
of P, normalized in l2(pi) so that psi_1 = 1 and

    D_t(i, j)^2 = sum_k lambda_k^(2t) (psi_k(i) - psi_k(j))^2

reproduces the dense diffusion distance exactly when all n modes are kept.
"""
import logging
import numbers

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from srland.exceptions import NumericalError, ParameterError
from srland.models.types import DiffusionModel, MarkovChain
from srland.utils.helpers import knn_table, row_distances

logger = logging.getLogger(__name__)

DEFAULT_T = 30
DEFAULT_M = 50
EIGEN_TOL = 1e-10
MAX_DENSE_N = 2000
_DENSE_EIGEN_N = 64
_START_SEED = 0


def default_m(n: int) -> int:
    return min(DEFAULT_M, n)


def _symmetric_conjugate(chain: MarkovChain) -> scipy.sparse.csr_matrix:
    scale = scipy.sparse.diags(1.0 / np.sqrt(chain.degrees))
    S = (scale @ chain.weights @ scale).tocsr()
    # symmetrize away rounding asymmetry
    return ((S + S.T) * 0.5).tocsr()


def _fix_signs(vecs: np.ndarray) -> np.ndarray:
    lead = np.argmax(np.abs(vecs), axis=0)
    signs = np.sign(vecs[lead, np.arange(vecs.shape[1])])
    signs[signs == 0] = 1.0
    return vecs * signs


def top_eigenpairs(chain: MarkovChain, m: int) -> DiffusionModel:
    """The m eigenpairs of P with largest |lambda|, sorted by decreasing |lambda|."""
    n = chain.n
    if not 1 <= m <= n:
        raise ParameterError(f"number of eigenpairs must lie in [1, {n}], got {m}")
    S = _symmetric_conjugate(chain)
    if n <= _DENSE_EIGEN_N or m >= n - 1:
        vals, vecs = scipy.linalg.eigh(S.toarray())
    else:
        v0 = np.random.default_rng(_START_SEED).standard_normal(n)
        try:
            vals, vecs = scipy.sparse.linalg.eigsh(S, k=m, which='LM', v0=v0,
                                                   tol=EIGEN_TOL, maxiter=50 * m * m)
        except scipy.sparse.linalg.ArpackNoConvergence as e:
            residuals = [float(np.abs(S @ e.eigenvectors[:, c] - e.eigenvalues[c] * e.eigenvectors[:, c]).max())
                         for c in range(len(e.eigenvalues))]
            raise NumericalError(
                f"eigensolver did not converge: {len(e.eigenvalues)} of {m} eigenpairs converged, "
                f"residuals {residuals}") from e
    order = np.argsort(-np.abs(vals), kind='stable')[:m]
    vals = vals[order]
    vecs = _fix_signs(vecs[:, order])
    psi = np.sqrt(chain.degrees.sum()) * vecs / np.sqrt(chain.degrees)[:, None]
    model = DiffusionModel(vals, psi)
    worst = eigen_residual(chain, model)
    logger.info("eigenpairs: m=%d lambda in [%.4g, %.4g], max relative residual %.2e",
                m, vals[-1], vals[0], worst)
    if worst > 1e-8:
        logger.warning("eigenvector residual %.2e exceeds 1e-8", worst)
    return model


def eigen_residual(chain: MarkovChain, model: DiffusionModel) -> float:
    """max_k |P psi_k - lambda_k psi_k|_inf / |psi_k|_inf."""
    psi = model.eigenvectors
    resid = np.abs(chain.transitions @ psi - psi * model.eigenvalues).max(axis=0)
    return float((resid / np.abs(psi).max(axis=0)).max())


def _check_time(t) -> int:
    if isinstance(t, bool):
        raise ParameterError("diffusion time must be an integer")
    if isinstance(t, numbers.Integral):
        t = int(t)
    elif isinstance(t, numbers.Real) and float(t).is_integer():
        t = int(t)
    else:
        raise ParameterError(f"diffusion time must be a nonnegative integer, got {t}")
    if t < 0:
        raise ParameterError(f"diffusion time must be nonnegative, got {t}")
    return t


def embed(model: DiffusionModel, t: int = DEFAULT_T) -> np.ndarray:
    """Diffusion coordinates E[i, k] = lambda_k^t psi_k(i)."""
    t = _check_time(t)
    return model.eigenvectors * model.eigenvalues ** t


def exact_transition_power(chain: MarkovChain, t: int) -> np.ndarray:
    t = _check_time(t)
    if chain.n > MAX_DENSE_N:
        raise ParameterError(
            f"dense diffusion distances are limited to n <= {MAX_DENSE_N} (got n={chain.n}); "
            "use the spectral embedding instead")
    return np.linalg.matrix_power(chain.transitions.toarray(), t)


def exact_diffusion_distances(chain: MarkovChain, t: int) -> np.ndarray:
    """All-pairs dense diffusion distances from the t-th power of P."""
    Pt = exact_transition_power(chain, t)
    scaled = Pt / np.sqrt(chain.stationary)
    out = np.empty((chain.n, chain.n))
    for i in range(chain.n):
        diff = scaled - scaled[i]
        out[i] = np.sqrt(np.einsum('ij,ij->i', diff, diff))
    return out


def diffusion_distance_exact(chain: MarkovChain, t: int, i: int, j: int) -> float:
    Pt = exact_transition_power(chain, t)
    diff = (Pt[i] - Pt[j]) / np.sqrt(chain.stationary)
    return float(np.sqrt(np.dot(diff, diff)))


def dt_nearest(E: np.ndarray, i: int, count: int) -> np.ndarray:
    """Exact linear scan for the `count` rows nearest row i (i excluded), ties to lower index."""
    n = E.shape[0]
    if not 1 <= count < n:
        raise ParameterError(f"neighbour count must lie in [1, {n - 1}], got {count}")
    others = np.delete(np.arange(n), i)
    dist = row_distances(E, i, others)
    order = np.lexsort((others, dist))
    return others[order[:count]]


def dt_neighbor_table(E: np.ndarray, count: int):
    """dt_nearest for every row at once, through a ball tree over the embedding."""
    return knn_table(E, count, algorithm='ball_tree')
