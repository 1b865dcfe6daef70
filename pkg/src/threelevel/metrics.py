"""Information-theoretic figures of merit for the evolving atomic state."""
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError
from .linalg import EIG_CLAMP, eig_hermitian, is_hermitian, partial_transpose, von_neumann_entropy
from .vtype import ANGLE_NAMES, PureInitialStateV, density_derivative_v, density_matrix_v

QFI_CUT = 1e-12
FD_STEP = 1e-6


def _check_state(rho, what="density matrix"):
    rho = np.asarray(rho, dtype=complex)
    if not is_hermitian(rho):
        raise InvalidArgumentError(f"{what} is not Hermitian")
    if abs(np.trace(rho) - 1) > 1e-8:
        raise InvalidArgumentError(f"{what} trace is {np.trace(rho).real:.10f}, expected 1")
    return 0.5 * (rho + rho.conj().T)


def qfi(rho, drho, cut=QFI_CUT):
    """Quantum Fisher information from a state and its parameter derivative.

    Uses the eigenbasis of ``rho`` and the matrix elements
    ``D_nm = <psi_n| drho |psi_m>``::

        F = sum_{l_n > cut} D_nn^2 / l_n
            + 2 sum_{n != m, l_n + l_m > cut} |D_nm|^2 / (l_n + l_m)

    Off-diagonal terms use ``(l_m - l_n) <psi_n|d psi_m> = D_nm``, so no
    eigenvector derivative is formed; inside a degenerate eigenspace the
    same expression stays basis independent.
    """
    rho = _check_state(rho)
    drho = np.asarray(drho, dtype=complex)
    if not is_hermitian(drho):
        raise InvalidArgumentError("state derivative is not Hermitian")
    if abs(np.trace(drho)) > 1e-8:
        raise InvalidArgumentError("state derivative must be traceless")
    w, V = eig_hermitian(rho)
    if w.min() < -EIG_CLAMP:
        raise InvalidArgumentError(f"state has negative eigenvalue {w.min():.3e}")
    w = np.clip(w, 0.0, None)
    D = V.conj().T @ (0.5 * (drho + drho.conj().T)) @ V
    pair = w[:, None] + w[None, :]
    mask = pair > cut
    diag = np.eye(len(w), dtype=bool)
    mask_diag = mask & diag & (w[:, None] > cut)
    mask_off = mask & ~diag
    absd2 = np.abs(D) ** 2
    first = np.sum(absd2[mask_diag] / w[np.where(mask_diag)[0]])
    second = 2 * np.sum(absd2[mask_off] / pair[mask_off])
    return float(max(0.0, first + second))


@dataclass(frozen=True)
class QfiRequest:
    parameter: str
    point: tuple = (np.pi / 4, np.pi / 4, np.pi / 2, np.pi / 2)
    derivative_mode: str = "analytic"

    def __post_init__(self):
        if self.parameter not in ANGLE_NAMES:
            raise InvalidArgumentError(f"parameter must be one of {ANGLE_NAMES}")
        if len(self.point) != 4 or not all(np.isfinite(self.point)):
            raise InvalidArgumentError("evaluation point needs four finite angles")
        if self.derivative_mode not in ("analytic", "finite-difference"):
            raise InvalidArgumentError(f"unknown derivative mode {self.derivative_mode!r}")


def _fd_derivative(prop, point, parameter, t, step=FD_STEP):
    k = ANGLE_NAMES.index(parameter)
    hi, lo = list(point), list(point)
    hi[k] += step
    lo[k] -= step
    r_hi = density_matrix_v(prop, PureInitialStateV.from_angles(*hi), t)
    r_lo = density_matrix_v(prop, PureInitialStateV.from_angles(*lo), t)
    return (r_hi - r_lo) / (2 * step)


def qfi_evolution(prop, request, grid):
    """QFI of one initial-state angle along a time grid."""
    grid = np.asarray(grid, dtype=float)
    init = PureInitialStateV.from_angles(*request.point)
    rhos = density_matrix_v(prop, init, grid)
    if request.derivative_mode == "analytic":
        drhos = density_derivative_v(prop, request.point, grid, request.parameter)
    else:
        drhos = _fd_derivative(prop, request.point, request.parameter, grid)
    return np.array([qfi(r, d) for r, d in zip(rhos, drhos)])


def negativity(rho):
    """Negativity ``(sum |eig(rho^T_A)| - 1) / 2`` of a two-qutrit state."""
    rho = _check_state(rho, "two-qutrit state")
    if rho.shape != (9, 9):
        raise InvalidArgumentError("negativity expects a 9x9 two-qutrit state")
    eta = np.linalg.eigvalsh(partial_transpose(rho, "A"))
    return float(max(0.0, (np.sum(np.abs(eta)) - 1) / 2))


def l1_coherence(rho):
    """Sum of absolute off-diagonal entries."""
    rho = np.asarray(rho, dtype=complex)
    if not is_hermitian(rho):
        raise InvalidArgumentError("l1 coherence expects a Hermitian matrix")
    a = np.abs(rho)
    return float(np.sum(a) - np.trace(a))


def rel_entropy_coherence(rho):
    """``S(diag(rho)) - S(rho)`` in bits."""
    rho = _check_state(rho)
    diag = np.diag(np.diag(rho).real).astype(complex)
    return float(max(0.0, von_neumann_entropy(diag) - von_neumann_entropy(rho)))
