"""Dense 2x2 / 4x4 complex kernels and indefinite inner products.

Index convention for the bipartite split: the spinor component with
zero-based index ``2*i + k`` belongs to factor-A index ``i`` and factor-B
index ``k``.  A owns the coarse (block) index, B the fine one, which is
exactly what :func:`numpy.kron` produces.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import InvalidArgumentError

ATOL = 1e-10

SIGMA0 = np.eye(2, dtype=complex)
SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SIGMA0, SIGMA1, SIGMA2, SIGMA3)

# Taylor order used once the argument is scaled below _EXPM_THETA; the
# truncation error 0.5**18/18! is far below double precision.
_EXPM_THETA = 0.5
_EXPM_ORDER = 18


def as_matrix(m, dim=None) -> np.ndarray:
    """Coerce ``m`` to a square complex array of dimension 2 or 4."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] not in (2, 4):
        raise InvalidArgumentError(f"expected a 2x2 or 4x4 matrix, got shape {a.shape}")
    if dim is not None and a.shape[0] != dim:
        raise InvalidArgumentError(f"expected a {dim}x{dim} matrix, got shape {a.shape}")
    return a


def as_vector(v, dim) -> np.ndarray:
    a = np.asarray(v, dtype=complex)
    if a.shape != (dim,):
        raise InvalidArgumentError(f"expected {dim} components, got shape {a.shape}")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def max_abs(m) -> float:
    """Max-entry norm, the measure used for every identity check."""
    a = np.asarray(m)
    return float(np.max(np.abs(a))) if a.size else 0.0


def allclose(a, b, atol: float = ATOL) -> bool:
    return max_abs(np.asarray(a) - np.asarray(b)) <= atol


def anticommutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b + b @ a


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product of two 2x2 matrices (or two 2-vectors)."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape or a.shape not in ((2, 2), (2,)):
        raise InvalidArgumentError(
            f"tensor_product needs two 2x2 matrices or two 2-vectors, got {a.shape} and {b.shape}"
        )
    return np.kron(a, b)


def kappa_inner(kappa, psi, phi) -> complex:
    """``psi^dagger kappa phi`` on a two-component factor space."""
    kappa = as_matrix(kappa, 2)
    return complex(np.vdot(as_vector(psi, 2), kappa @ as_vector(phi, 2)))


def spinor_inner(gamma4, psi, phi) -> complex:
    """Indefinite spinor scalar product ``psi^dagger gamma4 phi``."""
    gamma4 = as_matrix(gamma4, 4)
    return complex(np.vdot(as_vector(psi, 4), gamma4 @ as_vector(phi, 4)))


def spinor_norm(gamma4, psi) -> float:
    """``<psi, psi>``; real for Hermitian ``gamma4``."""
    return spinor_inner(gamma4, psi, psi).real


def adjoint_row(psi, gamma4) -> np.ndarray:
    """Dirac adjoint: the row ``psi^dagger gamma4``."""
    return np.conj(as_vector(psi, 4)) @ as_matrix(gamma4, 4)


def mat_exp(h, tau: float) -> np.ndarray:
    """Return ``exp(-i h tau)`` by scaling and squaring a Taylor polynomial.

    The argument is halved until its 1-norm is at most 0.5, the series is
    summed to order 18 with Horner's scheme, and the result squared back.
    Works for 2x2 and 4x4 inputs.
    """
    h = as_matrix(h)
    tau = float(tau)
    if not math.isfinite(tau) or not np.all(np.isfinite(h)):
        raise InvalidArgumentError("mat_exp needs finite entries and a finite tau")
    a = -1j * tau * h
    n = h.shape[0]
    norm1 = float(np.max(np.sum(np.abs(a), axis=0)))
    squarings = 0
    if norm1 > _EXPM_THETA:
        squarings = int(math.ceil(math.log2(norm1 / _EXPM_THETA)))
        a = a / (2.0**squarings)
    eye = np.eye(n, dtype=complex)
    result = eye.copy()
    for k in range(_EXPM_ORDER, 0, -1):
        result = eye + (a @ result) / k
    for _ in range(squarings):
        result = result @ result
    return result


def operator_schmidt_terms(m):
    """Operator-Schmidt decomposition of a 4x4 matrix across the A|B split.

    Returns a list of ``(coefficient, A_k, B_k)`` with coefficients sorted
    in descending order and ``sum c_k A_k (x) B_k == m``.  The factors are
    orthonormal in the Hilbert-Schmidt inner product.  Vanishing terms are
    kept, so the list always has four entries; use
    :func:`operator_schmidt_rank` for the rank.
    """
    m = as_matrix(m, 4)
    # realign m[(i,k),(j,l)] -> r[(i,j),(k,l)]
    r = m.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)
    u, s, vh = np.linalg.svd(r)
    return [
        (float(s[k]), u[:, k].reshape(2, 2), vh[k, :].reshape(2, 2))
        for k in range(4)
    ]


def operator_schmidt_rank(m, atol: float = ATOL) -> int:
    return sum(1 for c, _, _ in operator_schmidt_terms(m) if c > atol)


def local_residual(m) -> float:
    """Size of the part of ``m`` that is not of the form X(x)1 + 1(x)Y.

    Projects out the components along ``sigma_a (x) sigma_b`` with both
    ``a`` and ``b`` nonzero; local operators have none.
    """
    m = as_matrix(m, 4)
    worst = 0.0
    for a in range(1, 4):
        for b in range(1, 4):
            basis = np.kron(PAULI[a], PAULI[b])
            coeff = np.trace(basis @ m) / 4.0
            worst = max(worst, abs(coeff))
    return worst
