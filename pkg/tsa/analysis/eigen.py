"""
Dense eigensolvers for the small matrices of the analysis.

jacobi_eigh handles the symmetric Gram matrix; eigen_general handles the
real, possibly non-symmetric interaction matrix through Householder
reduction to Hessenberg form and Francis double-shift QR.
"""
import logging
import math
from typing import List, Tuple

import numpy as np

from tsa.config import Config
from tsa.errors import ConvergenceError, DimensionError

logger = logging.getLogger(__name__)

EPS = np.finfo(float).eps
SORT_DECIMALS = 10


def _square(matrix, what: str) -> np.ndarray:
    matrix = np.array(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DimensionError(f"{what} must be a square matrix, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise DimensionError(f"{what} has non-finite entries")
    return matrix


def jacobi_eigh(J, tol: float = Config.JACOBI_TOLERANCE,
                max_sweeps: int = Config.JACOBI_MAX_SWEEPS) -> Tuple[np.ndarray, np.ndarray, int]:
    """
    Cyclic Jacobi eigen decomposition of a symmetric matrix

    Args:
        J: Symmetric matrix
        tol: Stop once the off-diagonal Frobenius norm is <= tol * ||J||_F
        max_sweeps: Sweep cap

    Returns:
        (eigenvalues descending, orthonormal eigenvector columns, sweeps used)

    Raises:
        DimensionError: J is not square and symmetric
        ConvergenceError: the sweep cap was reached
    """
    A = _square(J, "Gram matrix")
    n = A.shape[0]
    if not np.array_equal(A, A.T):
        raise DimensionError("Gram matrix is not symmetric")

    V = np.eye(n)
    norm = np.linalg.norm(A)
    sweeps = 0
    if norm == 0.0:
        return np.zeros(n), V, sweeps

    while True:
        off = np.linalg.norm(A - np.diag(np.diag(A)))
        if off <= tol * norm:
            break
        if sweeps >= max_sweeps:
            raise ConvergenceError(
                f"Jacobi eigensolver did not converge in {max_sweeps} sweeps "
                f"(off-diagonal norm {off:.3e}, matrix norm {norm:.3e})"
            )
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                app = A[p, p]
                aqq = A[q, q]
                tau = (aqq - app) / (2.0 * apq)
                t = (1.0 if tau >= 0.0 else -1.0) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c

                col_p = A[:, p].copy()
                col_q = A[:, q].copy()
                A[:, p] = c * col_p - s * col_q
                A[:, q] = s * col_p + c * col_q
                A[p, :] = A[:, p]
                A[q, :] = A[:, q]
                A[p, p] = app - t * apq
                A[q, q] = aqq + t * apq
                A[p, q] = A[q, p] = 0.0

                vec_p = V[:, p].copy()
                vec_q = V[:, q].copy()
                V[:, p] = c * vec_p - s * vec_q
                V[:, q] = s * vec_p + c * vec_q
        sweeps += 1

    eigenvalues = np.diag(A).copy()
    order = np.argsort(-eigenvalues, kind='stable')
    logger.debug(f"Jacobi converged in {sweeps} sweeps for a {n}x{n} matrix")
    return eigenvalues[order], V[:, order], sweeps


def _householder(x: np.ndarray):
    """Unit vector v with (I - 2 v v^T) x parallel to e_1, or None for x = 0"""
    norm = np.linalg.norm(x)
    if norm == 0.0:
        return None
    v = x.astype(float).copy()
    v[0] += math.copysign(norm, v[0])
    return v / np.linalg.norm(v)


def hessenberg(A) -> np.ndarray:
    """Upper Hessenberg matrix similar to A (Householder reduction)"""
    H = _square(A, "Matrix")
    n = H.shape[0]
    for k in range(n - 2):
        v = _householder(H[k + 1:, k])
        if v is None:
            continue
        H[k + 1:, k:] -= 2.0 * np.outer(v, v @ H[k + 1:, k:])
        H[:, k + 1:] -= 2.0 * np.outer(H[:, k + 1:] @ v, v)
        H[k + 2:, k] = 0.0
    return H


def _eig2x2(a: float, b: float, c: float, d: float) -> List[complex]:
    """Eigenvalues of [[a, b], [c, d]]; complex roots come as an exact conjugate pair"""
    half_trace = 0.5 * (a + d)
    disc = (0.5 * (a - d)) ** 2 + b * c
    if disc >= 0.0:
        root = math.sqrt(disc)
        first = half_trace + math.copysign(root, half_trace)
        if first != 0.0:
            second = (a * d - b * c) / first
        else:
            second = half_trace - math.copysign(root, half_trace)
        return [complex(first, 0.0), complex(second, 0.0)]
    root = math.sqrt(-disc)
    return [complex(half_trace, root), complex(half_trace, -root)]


def _francis_step(H: np.ndarray, lo: int, hi: int, shift_mode: str = 'standard'):
    """One implicit double-shift QR sweep on the unreduced block H[lo:hi+1, lo:hi+1]"""
    size = hi - lo + 1
    if shift_mode == 'standard':
        trace = H[hi - 1, hi - 1] + H[hi, hi]
        det = H[hi - 1, hi - 1] * H[hi, hi] - H[hi - 1, hi] * H[hi, hi - 1]
    else:
        # ad hoc shifts that break cycles
        if shift_mode == 'top':
            spread = abs(H[lo + 1, lo]) + abs(H[lo + 2, lo + 1])
            centre = 0.75 * spread + H[lo, lo]
        else:
            spread = abs(H[hi, hi - 1]) + abs(H[hi - 1, hi - 2])
            centre = 0.75 * spread + H[hi, hi]
        trace = 2.0 * centre
        det = centre * centre + 0.4375 * spread * spread

    x = H[lo, lo] * H[lo, lo] + H[lo, lo + 1] * H[lo + 1, lo] - trace * H[lo, lo] + det
    y = H[lo + 1, lo] * (H[lo, lo] + H[lo + 1, lo + 1] - trace)
    z = H[lo + 1, lo] * H[lo + 2, lo + 1]

    for k in range(size - 2):
        v = _householder(np.array([x, y, z]))
        row = lo + k
        if v is not None:
            first_col = lo + max(0, k - 1)
            block = H[row:row + 3, first_col:hi + 1]
            H[row:row + 3, first_col:hi + 1] = block - 2.0 * np.outer(v, v @ block)
            last_row = lo + min(k + 4, size)
            block = H[lo:last_row, row:row + 3]
            H[lo:last_row, row:row + 3] = block - 2.0 * np.outer(block @ v, v)
        x = H[row + 1, row]
        y = H[row + 2, row]
        if k < size - 3:
            z = H[row + 3, row]

    v = _householder(np.array([x, y]))
    if v is not None:
        block = H[hi - 1:hi + 1, hi - 2:hi + 1]
        H[hi - 1:hi + 1, hi - 2:hi + 1] = block - 2.0 * np.outer(v, v @ block)
        block = H[lo:hi + 1, hi - 1:hi + 1]
        H[lo:hi + 1, hi - 1:hi + 1] = block - 2.0 * np.outer(block @ v, v)

    for i in range(lo + 2, hi + 1):
        H[i, lo:i - 1] = 0.0


def hessenberg_qr_eigenvalues(A, max_iterations: int = Config.QR_MAX_ITERATIONS) -> np.ndarray:
    """
    Eigenvalues of a real square matrix by Francis double-shift QR

    Raises:
        ConvergenceError: a block needed more than max_iterations sweeps to deflate
    """
    H = hessenberg(A)
    n = H.shape[0]
    scale = np.linalg.norm(H)
    eigenvalues: List[complex] = []
    hi = n - 1
    iterations = 0

    while hi >= 0:
        lo = hi
        while lo > 0:
            neighbourhood = abs(H[lo - 1, lo - 1]) + abs(H[lo, lo])
            if neighbourhood == 0.0:
                neighbourhood = scale
            if abs(H[lo, lo - 1]) <= EPS * neighbourhood:
                H[lo, lo - 1] = 0.0
                break
            lo -= 1

        if lo == hi:
            eigenvalues.append(complex(H[hi, hi], 0.0))
            hi -= 1
            iterations = 0
        elif lo == hi - 1:
            eigenvalues.extend(_eig2x2(H[hi - 1, hi - 1], H[hi - 1, hi], H[hi, hi - 1], H[hi, hi]))
            hi -= 2
            iterations = 0
        else:
            if iterations >= max_iterations:
                raise ConvergenceError(
                    f"QR iteration did not deflate a {hi - lo + 1}x{hi - lo + 1} block "
                    f"in {max_iterations} sweeps"
                )
            iterations += 1
            shift_mode = {10: 'top', 20: 'bottom'}.get(iterations, 'standard')
            _francis_step(H, lo, hi, shift_mode)

    return np.array(eigenvalues, dtype=complex)


def _null_vectors(A: np.ndarray, eigenvalue: complex, count: int) -> np.ndarray:
    """count unit vectors spanning (approximately) the null space of A - eigenvalue*I"""
    n = A.shape[0]
    if eigenvalue.imag == 0.0:
        shifted = A - eigenvalue.real * np.eye(n)
    else:
        shifted = A.astype(complex) - eigenvalue * np.eye(n)
    _, singular_values, vh = np.linalg.svd(shifted)
    threshold = max(1.0, np.linalg.norm(A)) * 1e-8
    available = max(1, int(np.sum(singular_values <= threshold)))
    vectors = vh[-min(count, available):].conj().T
    while vectors.shape[1] < count:
        vectors = np.hstack([vectors, vectors[:, -1:]])
    return vectors.astype(complex)


def normalise_phase(vector: np.ndarray) -> np.ndarray:
    """Unit norm, largest-magnitude component real and positive"""
    vector = np.asarray(vector, dtype=complex)
    vector = vector / np.linalg.norm(vector)
    pivot = int(np.argmax(np.abs(vector)))
    vector = vector * (np.conj(vector[pivot]) / abs(vector[pivot]))
    vector[pivot] = abs(vector[pivot])
    return vector


def clear_signed_zeros(values) -> np.ndarray:
    """Complex copy with every -0.0 part replaced by +0.0"""
    values = np.asarray(values, dtype=complex)
    cleared = np.empty(values.shape, dtype=complex)
    cleared.real = values.real + 0.0
    cleared.imag = values.imag + 0.0
    return cleared


def eigen_general(P) -> Tuple[np.ndarray, np.ndarray]:
    """
    Complex eigen decomposition of a real square matrix

    Eigenvalues are sorted by decreasing modulus, then real part, then
    imaginary part. Eigenvectors are the matching unit columns with their
    largest-magnitude component real and positive; a conjugate eigenvalue
    gets the conjugate eigenvector. Zero parts are always +0.0.

    Args:
        P: Real square matrix

    Returns:
        (eigenvalues, eigenvectors as columns)

    Raises:
        DimensionError: P is not square or not finite
        ConvergenceError: QR iteration failed to converge
    """
    A = _square(P, "Interaction matrix")
    n = A.shape[0]
    if n == 0:
        return np.zeros(0, dtype=complex), np.zeros((0, 0), dtype=complex)

    eigenvalues = hessenberg_qr_eigenvalues(A)
    scale = max(1.0, np.linalg.norm(A))

    def sort_key(i: int):
        # values equal up to rounding noise compare as ties
        value = eigenvalues[i] / scale
        return (-round(abs(value), SORT_DECIMALS), -round(value.real, SORT_DECIMALS), -round(value.imag, SORT_DECIMALS))

    eigenvalues = eigenvalues[sorted(range(n), key=sort_key)]

    vectors = np.zeros((n, n), dtype=complex)
    i = 0
    while i < n:
        value = eigenvalues[i]
        group = 1
        while i + group < n and abs(eigenvalues[i + group] - value) <= 1e-8 * scale:
            group += 1

        partner = None
        if value.imag < 0.0:
            matches = [j for j in range(i) if abs(eigenvalues[j] - np.conj(value)) <= 1e-8 * scale]
            partner = matches[0] if len(matches) >= group else None

        if partner is not None:
            for g in range(group):
                vectors[:, i + g] = np.conj(vectors[:, partner + g])
        else:
            basis = _null_vectors(A, value, group)
            for g in range(group):
                vectors[:, i + g] = normalise_phase(basis[:, g])
        i += group

    logger.debug(f"General eigen decomposition of a {n}x{n} matrix: {np.round(eigenvalues, 6).tolist()}")
    return clear_signed_zeros(eigenvalues), clear_signed_zeros(vectors)
