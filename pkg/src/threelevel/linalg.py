"""Small dense linear algebra and polynomial helpers.

Everything here works on plain numpy arrays. Density matrices are 3x3
(one qutrit) or 9x9 (two qutrits, row index ``3*a + b``).
"""
from enum import Enum

import numpy as np

from .errors import InvalidArgumentError

HERMITIAN_TOL = 1e-8
EIG_CLAMP = 1e-9


class RootMultiplicity(str, Enum):
    DISTINCT = "distinct"
    DOUBLE = "double"
    TRIPLE = "triple"


def _cubic(p, c2, c1, c0):
    return ((p + c2) * p + c1) * p + c0


def solve_cubic_complex(c2, c1, c0):
    """Roots of the monic cubic ``p**3 + c2*p**2 + c1*p + c0``.

    Roots come from the eigenvalues of the companion matrix, followed by a
    single Newton step that is kept only when it lowers the residual (Newton
    stalls next to a multiple root).

    Returns
    -------
    roots : ndarray of complex, shape (3,)
        Sorted by real part, then imaginary part.
    """
    coeffs = np.array([c2, c1, c0], dtype=complex)
    if not np.all(np.isfinite(coeffs)):
        raise InvalidArgumentError(f"non-finite cubic coefficients {coeffs}")
    c2, c1, c0 = coeffs
    companion = np.array([[-c2, -c1, -c0],
                          [1.0, 0.0, 0.0],
                          [0.0, 1.0, 0.0]], dtype=complex)
    roots = np.linalg.eigvals(companion)
    polished = []
    for r in roots:
        f = _cubic(r, c2, c1, c0)
        df = (3.0 * r + 2.0 * c2) * r + c1
        if df != 0:
            r_new = r - f / df
            if abs(_cubic(r_new, c2, c1, c0)) < abs(f):
                r = r_new
        polished.append(r)
    return np.array(sorted(polished, key=lambda z: (z.real, z.imag)))


def cubic_residual_ok(roots, c2, c1, c0, rtol=1e-10):
    """True when every root satisfies ``|q(r)| < rtol * max(1, |r|**3)``."""
    return all(abs(_cubic(r, c2, c1, c0)) < rtol * max(1.0, abs(r) ** 3) for r in roots)


def default_root_tol(roots):
    return 1e-7 * max(1.0, float(np.max(np.abs(roots))))


def classify_root_multiplicity(roots, tol):
    """Classify three roots as distinct, double+single or triple.

    A chain where two of the three pairs are within ``tol`` but the outer
    pair is not is reported as triple, since no pair can be cleanly split
    off.
    """
    if not tol > 0:
        raise InvalidArgumentError("tol must be positive")
    r = np.asarray(roots, dtype=complex)
    close = sum(abs(r[i] - r[j]) < tol for i, j in ((0, 1), (0, 2), (1, 2)))
    if close == 0:
        return RootMultiplicity.DISTINCT
    if close == 1:
        return RootMultiplicity.DOUBLE
    return RootMultiplicity.TRIPLE


def is_hermitian(m, tol=HERMITIAN_TOL):
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and np.max(np.abs(m - m.conj().T)) < tol


def _check_hermitian(m, tol=HERMITIAN_TOL):
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidArgumentError(f"expected a square matrix, got shape {m.shape}")
    err = np.max(np.abs(m - m.conj().T))
    if err >= tol:
        raise InvalidArgumentError(f"matrix is not Hermitian (max deviation {err:.3e})")
    return 0.5 * (m + m.conj().T)


def eig_hermitian(h):
    """Eigen-decomposition of a Hermitian matrix.

    The input is symmetrized as ``(H + H^dagger)/2`` before solving.

    Returns
    -------
    eigenvalues : ndarray of float
        Ascending.
    eigenvectors : ndarray of complex
        Orthonormal columns.
    """
    h = _check_hermitian(h)
    return np.linalg.eigh(h)


def partial_transpose(rho, subsystem="A"):
    """Partial transpose of a two-qutrit operator.

    ``rho`` is 9x9 with composite index ``3*a + b``; ``subsystem`` selects
    which factor is transposed.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (9, 9):
        raise InvalidArgumentError(f"partial_transpose needs a 9x9 matrix, got {rho.shape}")
    t = rho.reshape(3, 3, 3, 3)  # [a, b, a', b']
    if subsystem == "A":
        t = t.transpose(2, 1, 0, 3)
    elif subsystem == "B":
        t = t.transpose(0, 3, 2, 1)
    else:
        raise InvalidArgumentError(f"subsystem must be 'A' or 'B', not {subsystem!r}")
    return t.reshape(9, 9)


def clamped_eigenvalues(rho, clamp=EIG_CLAMP):
    """Eigenvalues of a density matrix with tiny negatives set to zero."""
    w = eig_hermitian(rho)[0]
    return np.where((w < 0) & (w >= -clamp), 0.0, w)


def von_neumann_entropy(rho):
    """Entropy ``-sum(l * log2(l))`` in bits."""
    rho = np.asarray(rho, dtype=complex)
    tr = np.trace(rho)
    if abs(tr - 1.0) > 1e-6:
        raise InvalidArgumentError(f"density matrix trace {tr.real:.8f} is not 1")
    w = clamped_eigenvalues(rho)
    if np.any(w < 0):
        raise InvalidArgumentError(f"density matrix has eigenvalue {w.min():.3e} < 0")
    w = w[w > 0]
    return float(max(0.0, -np.sum(w * np.log2(w))))
