"""Exact dynamics of a Lambda-type atom (excited |3> over lower |1>, |2>)
in a vacuum Lorentzian reservoir.

The lower amplitudes only pick up phases, ``c_j(t) = c_j(0) exp(i w_j t)``,
while the excited amplitude decays as ``c3(t) = xi(t) c3(0)`` with
``xi(t) = sum_i D_i exp(b_i t)`` over the roots of

    R(p) = p^3 + (M1 + M2) p^2 + (M1 M2 + g1 lam/2 + g2 lam/2) p
           + g1 lam/2 M2 + g2 lam/2 M1,     M_j = lam + i (w0 - w_j).

Photons emitted through each channel leave the atom in |1> or |2>; the
resulting populations ``alpha1, alpha2`` and ground-state coherence
``Theta`` are double integrals over c3 that reduce to finite sums of
exponentials. Only non-degenerate roots are supported.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DegeneracyError, InvalidArgumentError
from .linalg import RootMultiplicity, classify_root_multiplicity, default_root_tol, solve_cubic_complex


@dataclass(frozen=True)
class LambdaAtomParams:
    """Transition frequencies |1>-|3>, |2>-|3> and emission rates into each."""

    omega1: float
    omega2: float
    gamma1: float
    gamma2: float

    def __post_init__(self):
        if not all(np.isfinite(v) for v in (self.omega1, self.omega2, self.gamma1, self.gamma2)):
            raise InvalidArgumentError("atom parameters must be finite")
        if self.gamma1 < 0 or self.gamma2 < 0:
            raise InvalidArgumentError("emission rates must be >= 0")

    @property
    def gamma12(self):
        return float(np.sqrt(self.gamma1 * self.gamma2))

    def detunings(self, spec):
        return spec.omega0 - self.omega1, spec.omega0 - self.omega2


@dataclass(frozen=True)
class PureInitialStateLambda:
    """Initial amplitudes on (|1>, |2>, |3>)."""

    c1: complex
    c2: complex
    c3: complex

    def __post_init__(self):
        norm = abs(self.c1) ** 2 + abs(self.c2) ** 2 + abs(self.c3) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise InvalidArgumentError(f"initial state norm is {norm!r}, expected 1")


def _pair_table(roots, lam, dl, dr):
    """Coefficient tables X1..X4 for one double integral, shape (4, 3, 3).

    Index ``[k, j, l]`` pairs root ``b_j`` with ``conj(b_l)``. ``dl`` is the
    detuning attached to the unconjugated time variable and ``dr`` the one
    attached to the conjugated variable. X3 and X4 are X2 and X1 with the
    sign of ``lam`` flipped.

    Entries for a root equal to ``-M_j`` are infinite; such a root always
    carries a zero residue and the caller drops it.
    """
    bj = roots[:, None]
    blc = roots.conj()[None, :]

    def first(s):
        return (1.0 / ((-s + blc - 1j * dr) * (s + bj + 1j * dl))
                - 2 * s / ((s + blc - 1j * dr) * (-s + blc - 1j * dr) * (bj + blc + 1j * (dl - dr))))

    def second(s):
        return 1.0 / ((s - bj - 1j * dl) * (s + blc - 1j * dr))

    with np.errstate(divide="ignore", invalid="ignore"):
        return np.array([first(lam), second(lam), second(-lam), first(-lam)])


@dataclass(frozen=True)
class LambdaSolution:
    params: LambdaAtomParams
    spec: object
    roots: np.ndarray
    residues: np.ndarray
    alpha1_table: np.ndarray
    alpha2_table: np.ndarray
    theta_table: np.ndarray
    trivial: bool = False

    def _pair_sum(self, table, dl, dr, t):
        t = np.asarray(t, dtype=float)
        if np.any(t < 0) or not np.all(np.isfinite(t)):
            raise InvalidArgumentError("times must be finite and >= 0")
        lam = self.spec.lam
        b = self.roots
        D = self.residues
        weight = D[:, None] * D.conj()[None, :]
        live = weight != 0
        table = np.where(live, table, 0)
        tt = t[..., None, None]
        terms = (table[0] * np.exp((b[:, None] + b.conj()[None, :]) * tt)
                 + table[1] * np.exp((-lam + b[:, None] + 1j * dr) * tt)
                 + table[2] * np.exp((-lam + b.conj()[None, :] - 1j * dl) * tt)
                 + table[3] * np.exp(1j * (dr - dl) * tt))
        return np.sum(weight * terms, axis=(-2, -1))


def build_lambda_solution(params, spec):
    """Roots, residues and double-integral coefficient tables.

    Raises
    ------
    DegeneracyError
        If ``R(p)`` has (numerically) repeated roots.
    """
    lam = spec.lam
    d1, d2 = params.detunings(spec)
    m1, m2 = complex(lam, d1), complex(lam, d2)
    k1, k2 = params.gamma1 * lam / 2, params.gamma2 * lam / 2
    zeros = np.zeros((4, 3, 3), dtype=complex)
    if lam == 0 or (k1 == 0 and k2 == 0):
        # no memory kernel: c3 is frozen and nothing reaches the reservoir
        roots = np.array([0j, -m1, -m2])
        residues = np.array([1 + 0j, 0j, 0j])
        return LambdaSolution(params, spec, roots, residues, zeros, zeros, zeros, trivial=True)

    c2_, c1_, c0_ = m1 + m2, m1 * m2 + k1 + k2, k1 * m2 + k2 * m1
    roots = solve_cubic_complex(c2_, c1_, c0_)
    tol = default_root_tol(roots)
    if classify_root_multiplicity(roots, tol) is not RootMultiplicity.DISTINCT:
        raise DegeneracyError(
            f"R(p) has repeated roots {roots}; the degenerate Lambda solution is not supported")
    residues = np.empty(3, dtype=complex)
    for i in range(3):
        j, k = [m for m in range(3) if m != i]
        # R'(b_i) written as a product of root separations
        residues[i] = (roots[i] + m1) * (roots[i] + m2) / ((roots[i] - roots[j]) * (roots[i] - roots[k]))
    tables = [_pair_table(roots, lam, dl, dr) for dl, dr in ((d1, d1), (d2, d2), (d1, d2))]
    live = residues[:, None] * residues.conj()[None, :] != 0
    if any(not np.all(np.isfinite(tab[:, live])) for tab in tables):
        raise DegeneracyError("double-integral coefficients diverge for a root with nonzero residue")
    return LambdaSolution(params, spec, roots, residues, *tables)


def xi(sol, t):
    """Excited-amplitude propagator ``c3(t) / c3(0)``."""
    t = np.asarray(t, dtype=float)
    return np.exp(np.multiply.outer(t, sol.roots)) @ sol.residues


def alpha1(sol, t):
    """Population transferred to |1> through the reservoir, per unit |c3(0)|^2."""
    if sol.trivial:
        return np.zeros(np.shape(t))
    d1, _ = sol.params.detunings(sol.spec)
    pref = sol.params.gamma1 * sol.spec.lam / 2
    return pref * sol._pair_sum(sol.alpha1_table, d1, d1, t).real


def alpha2(sol, t):
    """Population transferred to |2>; ``alpha1`` with channel 1 replaced by 2."""
    if sol.trivial:
        return np.zeros(np.shape(t))
    _, d2 = sol.params.detunings(sol.spec)
    pref = sol.params.gamma2 * sol.spec.lam / 2
    return pref * sol._pair_sum(sol.alpha2_table, d2, d2, t).real


def alpha3(sol, t):
    return np.abs(xi(sol, t)) ** 2


def theta_coherence(sol, t):
    """Reservoir-mediated |1><2| coherence, per unit |c3(0)|^2."""
    if sol.trivial:
        return np.zeros(np.shape(t), dtype=complex)
    d1, d2 = sol.params.detunings(sol.spec)
    pref = sol.params.gamma12 * sol.spec.lam / 2
    return pref * sol._pair_sum(sol.theta_table, d1, d2, t)


def phase_factors(sol, t):
    """``(T1, T2)``: ``exp(i w_j t) * sum_j conj(D_j) exp(conj(b_j) t)``."""
    t = np.asarray(t, dtype=float)
    s = np.exp(np.multiply.outer(t, sol.roots.conj())) @ sol.residues.conj()
    return np.exp(1j * sol.params.omega1 * t) * s, np.exp(1j * sol.params.omega2 * t) * s


def density_matrix_lambda(sol, init, t):
    """Reduced atomic state in (|1>, |2>, |3>) order, shape (..., 3, 3)."""
    t = np.asarray(t, dtype=float)
    c1, c2, c3 = init.c1, init.c2, init.c3
    w1, w2 = sol.params.omega1, sol.params.omega2
    p3 = abs(c3) ** 2
    a1, a2, a3 = alpha1(sol, t), alpha2(sol, t), alpha3(sol, t)
    th = theta_coherence(sol, t)
    T1, T2 = phase_factors(sol, t)
    rho = np.empty(t.shape + (3, 3), dtype=complex)
    rho[..., 0, 0] = abs(c1) ** 2 + a1 * p3
    rho[..., 1, 1] = abs(c2) ** 2 + a2 * p3
    rho[..., 2, 2] = a3 * p3
    rho[..., 0, 1] = c1 * np.conj(c2) * np.exp(1j * (w1 - w2) * t) + th * p3
    rho[..., 0, 2] = T1 * c1 * np.conj(c3)
    rho[..., 1, 2] = T2 * c2 * np.conj(c3)
    rho[..., 1, 0] = rho[..., 0, 1].conj()
    rho[..., 2, 0] = rho[..., 0, 2].conj()
    rho[..., 2, 1] = rho[..., 1, 2].conj()
    return rho
