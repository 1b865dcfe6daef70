"""The V-type dynamical map as a qutrit superoperator.

Superoperators act on column-stacked density matrices: ``vec(X)[3*col + row]
= X[row, col]`` (numpy ``order="F"``). Two-qutrit operators use the composite
index ``3*a + b`` with subsystem A first.
"""
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError


def vec(x):
    return np.asarray(x, dtype=complex).flatten(order="F")


def unvec(v):
    v = np.asarray(v, dtype=complex)
    d = int(round(np.sqrt(v.size)))
    return v.reshape((d, d), order="F")


def _ket_bra(i, j, d=3):
    m = np.zeros((d, d), dtype=complex)
    m[i, j] = 1.0
    return m


@dataclass(frozen=True)
class Superoperator:
    """Linear map on d x d matrices stored as a d^2 x d^2 matrix."""

    matrix: np.ndarray

    @property
    def dim(self):
        return int(round(np.sqrt(self.matrix.shape[0])))

    def apply(self, rho):
        rho = np.asarray(rho, dtype=complex)
        if rho.shape != (self.dim, self.dim):
            raise InvalidArgumentError(f"expected a {self.dim}x{self.dim} operator, got {rho.shape}")
        return unvec(self.matrix @ vec(rho))

    def trace_row_error(self):
        """Deviation of ``Tr o map`` from ``Tr``, as a max-abs error."""
        d = self.dim
        tr = vec(np.eye(d))
        return float(np.max(np.abs(tr @ self.matrix - tr)))


QutritSuperoperator = Superoperator


def build_v_channel(prop, t):
    """The map rho(0) -> rho(t) of the V-type atom at a single time ``t``.

    Six basis actions are written out; those on |0><1|, |0><2| and |1><2|
    are their Hermitian conjugates.
    """
    E, F, G, H = (complex(x) for x in prop.efgh(float(t)))
    k = _ket_bra
    act = {}
    act[0, 0] = k(0, 0)
    act[1, 1] = ((1 - abs(E) ** 2 - abs(H) ** 2) * k(0, 0) + abs(E) ** 2 * k(1, 1)
                 + abs(H) ** 2 * k(2, 2) + E * H.conjugate() * k(1, 2) + E.conjugate() * H * k(2, 1))
    act[2, 2] = ((1 - abs(F) ** 2 - abs(G) ** 2) * k(0, 0) + abs(F) ** 2 * k(1, 1)
                 + abs(G) ** 2 * k(2, 2) + F * G.conjugate() * k(1, 2) + F.conjugate() * G * k(2, 1))
    act[1, 0] = E * k(1, 0) + H * k(2, 0)
    act[2, 0] = F * k(1, 0) + G * k(2, 0)
    act[2, 1] = ((-F * E.conjugate() - G * H.conjugate()) * k(0, 0) + F * E.conjugate() * k(1, 1)
                 + G * H.conjugate() * k(2, 2) + F * H.conjugate() * k(1, 2)
                 + E.conjugate() * G * k(2, 1))
    for i, j in ((1, 0), (2, 0), (2, 1)):
        act[j, i] = act[i, j].conj().T
    S = np.empty((9, 9), dtype=complex)
    for (i, j), out in act.items():
        S[:, 3 * j + i] = vec(out)
    return Superoperator(S)


def amplitude_map(prop, t):
    """Same map assembled as ``A rho A^dagger + |0><0| Tr[(1 - A^dagger A) rho]``.

    ``A`` is the amplitude transfer matrix. Kept as an independent cross-check
    of the basis-action form.
    """
    A = prop.transfer_matrix(float(t))
    loss = np.eye(3) - A.conj().T @ A
    S = np.empty((9, 9), dtype=complex)
    for j in range(3):
        for i in range(3):
            x = _ket_bra(i, j)
            out = A @ x @ A.conj().T + np.trace(loss @ x) * _ket_bra(0, 0)
            S[:, 3 * j + i] = vec(out)
    return Superoperator(S)


def choi_matrix(sop):
    """``sum_ij map(|i><j|) (x) |i><j|``, unnormalised; trace = d when trace preserving."""
    d = sop.dim
    C = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            C += np.kron(unvec(sop.matrix[:, d * j + i]), _ket_bra(i, j, d))
    return C


def _kron_vec_permutation(d):
    """P with ``vec(A (x) B) = P (vec(A) (x) vec(B))`` for d x d factors."""
    n = d * d
    P = np.zeros((n * n, n * n))
    for r in range(d):
        for c in range(d):
            for s in range(d):
                for e in range(d):
                    # A[r, c] B[s, e] sits at row d*r + s, column d*c + e of A (x) B
                    src = n * (d * c + r) + (d * e + s)
                    dst = n * (d * c + e) + (d * r + s)
                    P[dst, src] = 1.0
    return P


_PERM3 = _kron_vec_permutation(3)


def extend_channel(sop, mode):
    """Lift a qutrit map to two qutrits.

    ``mode="unilateral"`` gives ``map (x) id``; ``"bilateral"`` gives
    ``map (x) map`` (independent, identical reservoirs).
    """
    if sop.dim != 3:
        raise InvalidArgumentError("extend_channel expects a qutrit map")
    if mode == "unilateral":
        other = np.eye(9, dtype=complex)
    elif mode == "bilateral":
        other = sop.matrix
    else:
        raise InvalidArgumentError(f"mode must be 'unilateral' or 'bilateral', not {mode!r}")
    return Superoperator(_PERM3 @ np.kron(sop.matrix, other) @ _PERM3.T)


PSI_AB = np.zeros(9, dtype=complex)
PSI_AB[[0, 4, 8]] = 1 / np.sqrt(3)


def werner_state(epsilon):
    """``(1 - eps)/9 I + eps |Psi><Psi|`` with ``|Psi> = (|00> + |11> + |22>)/sqrt(3)``."""
    if not 0.0 <= epsilon <= 1.0:
        raise InvalidArgumentError(f"epsilon must lie in [0, 1], got {epsilon}")
    return (1 - epsilon) / 9 * np.eye(9, dtype=complex) + epsilon * np.outer(PSI_AB, PSI_AB.conj())
