"""Exact dynamics of a V-type atom (excited |1>, |2> over ground |0>) in a
vacuum Lorentzian reservoir.

Frequencies and rates are in units of a reference rate gamma and times are
dimensionless ``gamma * t``. The two transition dipoles are taken parallel,
so the cross-damping rate is ``sqrt(gamma1 * gamma2)``.

The single-excitation amplitudes evolve as::

    c1(t) = E(t) c1(0) + F(t) c2(0)
    c2(t) = G(t) c2(0) + H(t) c1(0)

with E, F, G, H sums of exponentials over the roots of the cubic
``p**3 + h1 p**2 + h2 p + h3``. Double and triple roots use the confluent
partial-fraction forms, where the exponentials pick up polynomial-in-t
prefactors.
"""
from dataclasses import dataclass, field

import numpy as np

from .errors import DegeneracyError, InvalidArgumentError
from .linalg import (RootMultiplicity, classify_root_multiplicity, default_root_tol,
                     solve_cubic_complex)
from .spectrum import LorentzianSpectrum  # noqa: F401  (re-exported)

ANGLE_NAMES = ("theta", "phi", "eta1", "eta2")


@dataclass(frozen=True)
class VAtomParams:
    omega1: float
    omega2: float
    gamma1: float
    gamma2: float

    def __post_init__(self):
        vals = (self.omega1, self.omega2, self.gamma1, self.gamma2)
        if not all(np.isfinite(v) for v in vals):
            raise InvalidArgumentError("atom parameters must be finite")
        if self.gamma1 < 0 or self.gamma2 < 0:
            raise InvalidArgumentError("emission rates must be >= 0")

    @property
    def gamma12(self):
        return float(np.sqrt(self.gamma1 * self.gamma2))

    def couplings(self, lam):
        """Kernel amplitudes ``(B11, B22, B12)``, each ``gamma_ij * lam / 2``."""
        return self.gamma1 * lam / 2, self.gamma2 * lam / 2, self.gamma12 * lam / 2


@dataclass(frozen=True)
class PureInitialStateV:
    """Initial atomic amplitudes on (|0>, |1>, |2>)."""

    c0: complex
    c1: complex
    c2: complex

    def __post_init__(self):
        norm = abs(self.c0) ** 2 + abs(self.c1) ** 2 + abs(self.c2) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise InvalidArgumentError(f"initial state norm is {norm!r}, expected 1")

    @classmethod
    def from_angles(cls, theta, phi, eta1, eta2):
        return cls(complex(np.cos(theta)),
                   complex(np.sin(theta) * np.sin(phi) * np.exp(1j * eta1)),
                   complex(np.sin(theta) * np.cos(phi) * np.exp(1j * eta2)))

    @property
    def vector(self):
        return np.array([self.c0, self.c1, self.c2], dtype=complex)


def build_cubic(params, spec):
    """Coefficients ``(h1, h2, h3)`` of the characteristic cubic."""
    w1, w2 = params.omega1, params.omega2
    b11, b22, _ = params.couplings(spec.lam)
    M = spec.M
    h1 = M + 1j * (w1 + w2)
    h2 = b11 + b22 - w1 * w2 + 1j * M * (w1 + w2)
    h3 = -w1 * w2 * M + 1j * (w1 * b22 + w2 * b11)
    return complex(h1), complex(h2), complex(h3)


def _centred_offsets(params, spec):
    """Offsets ``(a1, a2, a3)`` of ``i w1``, ``i w2`` and ``M`` from ``h1/3``.

    Built from parameter differences so they carry no cancellation error;
    ``a1 + a2 + a3 == 0``.
    """
    w1, w2, w0, lam = params.omega1, params.omega2, spec.omega0, spec.lam
    a1 = complex(-lam, (w1 - w2) + (w1 - w0)) / 3
    a2 = complex(-lam, (w2 - w1) + (w2 - w0)) / 3
    a3 = complex(2 * lam, (w0 - w1) + (w0 - w2)) / 3
    return a1, a2, a3


def centred_cubic(params, spec):
    """The characteristic cubic in ``q = p + h1/3``: returns ``(P, Q)`` of
    ``q**3 + P q + Q``."""
    b11, b22, _ = params.couplings(spec.lam)
    a1, a2, a3 = _centred_offsets(params, spec)
    P = a1 * a2 + a1 * a3 + a2 * a3 + b11 + b22
    Q = a1 * a2 * a3 + b22 * a1 + b11 * a2
    return P, Q


def _polish_centred(q, params, spec, sweeps=3):
    """Newton-refine centred roots on the factored characteristic function.

    ``(q+a1)(q+a2)(q+a3) + B11 (q+a2) + B22 (q+a1)`` is evaluated accurately
    next to each ``-i w_j``, where the monomial form loses the small real
    part of a slowly decaying root. A step is kept only if it lowers the
    residual.
    """
    b11, b22, _ = params.couplings(spec.lam)
    a1, a2, a3 = _centred_offsets(params, spec)

    def resid(x):
        u1, u2, u3 = x + a1, x + a2, x + a3
        return u1 * u2 * u3 + b11 * u2 + b22 * u1, u1 * u2 + u1 * u3 + u2 * u3 + b11 + b22

    out = np.array(q, dtype=complex)
    for i in range(out.size):
        x = out[i]
        f, df = resid(x)
        for _ in range(sweeps):
            if f == 0 or df == 0:
                break
            x_new = x - f / df
            f_new, df_new = resid(x_new)
            if not abs(f_new) < abs(f):
                break
            x, f, df = x_new, f_new, df_new
        out[i] = x
    return out


@dataclass(frozen=True)
class VPropagator:
    """Closed-form propagator for one parameter set.

    Roots are stored relative to the centroid ``-h1/3`` (``qroots``) and
    the phase ``exp(-i Im(shift) t)`` is factored out of every term, which
    keeps the cancellation between nearly coincident roots well
    conditioned. The decay ``Re(shift)`` stays in the exponents so that
    wide spectra do not overflow.

    ``coeffs`` is a (4, 3) table with rows ordered E, F, G, H. Its meaning
    depends on ``branch``:

    * distinct: column i multiplies ``exp(b_i t)``;
    * double: columns are ``(X1, X2, X3)`` in
      ``(X1 + X2 t) exp(b1 t) + X3 exp(b3 t)`` with ``roots = (b1, b1, b3)``;
    * triple: columns are the ``1, t, t**2`` coefficients multiplying
      ``exp(b t)``.
    """

    params: VAtomParams
    spec: LorentzianSpectrum
    branch: RootMultiplicity
    qroots: np.ndarray
    shift: complex
    coeffs: np.ndarray
    h: tuple
    tol: float = field(default=0.0)

    @property
    def roots(self):
        return self.qroots - self.shift

    def efgh(self, t):
        """E, F, G, H at time(s) ``t`` as an array of shape (4,) + t.shape."""
        t = np.asarray(t, dtype=float)
        if np.any(t < 0) or not np.all(np.isfinite(t)):
            raise InvalidArgumentError("times must be finite and >= 0")
        c = self.coeffs
        q = self.qroots - self.shift.real
        if self.branch is RootMultiplicity.DISTINCT:
            expo = np.exp(np.multiply.outer(q, t))  # (3,) + t.shape
            out = np.tensordot(c, expo, axes=(1, 0))
        elif self.branch is RootMultiplicity.DOUBLE:
            e1 = np.exp(q[0] * t)
            e3 = np.exp(q[2] * t)
            out = (np.multiply.outer(c[:, 0], e1) + np.multiply.outer(c[:, 1], t * e1)
                   + np.multiply.outer(c[:, 2], e3))
        else:
            out = (np.multiply.outer(c[:, 0], np.ones_like(t)) + np.multiply.outer(c[:, 1], t)
                   + np.multiply.outer(c[:, 2], t * t)) * np.exp(q[0] * t)
        return out * np.exp(-1j * self.shift.imag * t)

    def transfer_matrix(self, t):
        """3x3 matrix U(t) with ``c(t) = U(t) c(0)`` in (|0>, |1>, |2>) order."""
        E, F, G, H = self.efgh(t)
        u = np.zeros(np.shape(E) + (3, 3), dtype=complex)
        u[..., 0, 0] = 1.0
        u[..., 1, 1] = E
        u[..., 1, 2] = F
        u[..., 2, 1] = H
        u[..., 2, 2] = G
        return u


def _numerators(q, params, spec):
    """Residue numerators N_E, N_G at a centred root ``q`` (N_F = N_H = -B12)."""
    b11, b22, _ = params.couplings(spec.lam)
    a1, a2, a3 = _centred_offsets(params, spec)
    return (q + a2) * (q + a3) + b22, (q + a1) * (q + a3) + b11


def _numerator_slopes(q, params, spec):
    a1, a2, a3 = _centred_offsets(params, spec)
    return 2 * q + a2 + a3, 2 * q + a1 + a3


def _generic_coeffs(q, params, spec):
    b12 = params.couplings(spec.lam)[2]
    table = np.empty((4, 3), dtype=complex)
    for i in range(3):
        j, k = [m for m in range(3) if m != i]
        # equals 3 b^2 + 2 h1 b + h2 at an exact root
        den = (q[i] - q[j]) * (q[i] - q[k])
        if abs(den) < 1e-12:
            raise DegeneracyError(
                f"residue denominator {abs(den):.2e} at root {q[i]}; roots are degenerate, "
                "loosen the degeneracy tolerance")
        ne, ng = _numerators(q[i], params, spec)
        table[:, i] = [ne / den, -b12 / den, ng / den, -b12 / den]
    return table


def _double_coeffs(q1, q3, params, spec):
    b12 = params.couplings(spec.lam)[2]
    d = q1 - q3
    d2 = d * d
    ne1, ng1 = _numerators(q1, params, spec)
    ne3, ng3 = _numerators(q3, params, spec)
    se1, sg1 = _numerator_slopes(q1, params, spec)
    # simple-pole coefficient at b1: [N'(b1)(b1 - b3) - N(b1)] / (b1 - b3)^2
    E = [(se1 * d - ne1) / d2, ne1 / d, ne3 / d2]
    F = [b12 / d2, -b12 / d, -b12 / d2]
    G = [(sg1 * d - ng1) / d2, ng1 / d, ng3 / d2]
    H = [b12 / d2, -b12 / d, -b12 / d2]
    return np.array([E, F, G, H], dtype=complex)


def _triple_coeffs(q, params, spec):
    b12 = params.couplings(spec.lam)[2]
    ne, ng = _numerators(q, params, spec)
    se, sg = _numerator_slopes(q, params, spec)
    # inverse transform of N(p)/(p-b)^3 with N quadratic and monic in p
    E = [1.0, se, 0.5 * ne]
    F = [0.0, 0.0, -0.5 * b12]
    G = [1.0, sg, 0.5 * ng]
    H = [0.0, 0.0, -0.5 * b12]
    return np.array([E, F, G, H], dtype=complex)


def build_propagator(params, spec, tol=None, branch=None):
    """Solve the characteristic cubic and tabulate the propagator.

    Parameters
    ----------
    params : VAtomParams
    spec : LorentzianSpectrum
    tol : float, optional
        Root-merging tolerance. Defaults to ``1e-7 * max(1, max|b_i|)``.
    branch : {"distinct", "double", "triple"}, optional
        Force a branch instead of classifying the roots. A forced double
        branch merges the closest pair of roots at their midpoint; a forced
        triple branch uses the root centroid ``-h1/3``.

    Raises
    ------
    DegeneracyError
        If the distinct branch meets a vanishing residue denominator.
    """
    h1, h2, h3 = build_cubic(params, spec)
    shift = h1 / 3
    P, Q = centred_cubic(params, spec)
    q = _polish_centred(solve_cubic_complex(0.0, P, Q), params, spec)
    if tol is None:
        tol = default_root_tol(q - shift)
    elif not tol > 0:
        raise InvalidArgumentError("tol must be positive")
    kind = RootMultiplicity(branch) if branch is not None else classify_root_multiplicity(q, tol)

    if kind is RootMultiplicity.DISTINCT:
        coeffs = _generic_coeffs(q, params, spec)
    elif kind is RootMultiplicity.DOUBLE:
        pairs = [(abs(q[i] - q[j]), i, j) for i, j in ((0, 1), (0, 2), (1, 2))]
        _, i, j = min(pairs)
        k = 3 - i - j
        q1 = 0.5 * (q[i] + q[j])
        q = np.array([q1, q1, q[k]])
        coeffs = _double_coeffs(q1, q[2], params, spec)
    else:
        q = np.zeros(3, dtype=complex)
        coeffs = _triple_coeffs(0j, params, spec)
    return VPropagator(params, spec, kind, q, shift, coeffs, (h1, h2, h3), float(tol))


def propagate_amplitudes(prop, init, t):
    """Amplitudes ``(c0, c1, c2)`` at time(s) ``t``."""
    E, F, G, H = prop.efgh(t)
    c0 = np.full(np.shape(E), init.c0, dtype=complex)
    c1 = E * init.c1 + F * init.c2
    c2 = G * init.c2 + H * init.c1
    return c0, c1, c2


def density_from_amplitudes(c0, c1, c2):
    """Reduced atomic state in (|0>, |1>, |2>) order, shape (..., 3, 3).

    The ground population is ``1 - |c1|^2 - |c2|^2`` so that the trace is
    one by construction.
    """
    c0, c1, c2 = np.broadcast_arrays(*(np.asarray(c, dtype=complex) for c in (c0, c1, c2)))
    rho = np.empty(c0.shape + (3, 3), dtype=complex)
    p1 = np.abs(c1) ** 2
    p2 = np.abs(c2) ** 2
    rho[..., 0, 0] = 1.0 - p1 - p2
    rho[..., 1, 1] = p1
    rho[..., 2, 2] = p2
    rho[..., 0, 1] = c0 * c1.conj()
    rho[..., 0, 2] = c0 * c2.conj()
    rho[..., 1, 2] = c1 * c2.conj()
    rho[..., 1, 0] = rho[..., 0, 1].conj()
    rho[..., 2, 0] = rho[..., 0, 2].conj()
    rho[..., 2, 1] = rho[..., 1, 2].conj()
    return rho


def density_matrix_v(prop, init, t):
    return density_from_amplitudes(*propagate_amplitudes(prop, init, t))


def initial_jacobian(angles):
    """d(c0, c1, c2)(0) / d(theta, phi, eta1, eta2), shape (3, 4)."""
    th, ph, e1, e2 = angles
    p1, p2 = np.exp(1j * e1), np.exp(1j * e2)
    st, ct, sp, cp = np.sin(th), np.cos(th), np.sin(ph), np.cos(ph)
    return np.array([
        [-st, 0.0, 0.0, 0.0],
        [ct * sp * p1, st * cp * p1, 1j * st * sp * p1, 0.0],
        [ct * cp * p2, -st * sp * p2, 0.0, 1j * st * cp * p2],
    ], dtype=complex)


def amplitude_parameter_jacobian(prop, angles, t):
    """d(c0, c1, c2)(t) / d(theta, phi, eta1, eta2).

    Returns shape (3, 4) for scalar ``t`` and (n, 3, 4) for a grid.
    """
    return prop.transfer_matrix(t) @ initial_jacobian(angles)


def density_derivative_v(prop, angles, t, parameter):
    """Exact derivative of the reduced state with respect to one angle."""
    k = ANGLE_NAMES.index(parameter)
    init = PureInitialStateV.from_angles(*angles)
    c = np.moveaxis(np.stack(propagate_amplitudes(prop, init, t)), 0, -1)
    dc = amplitude_parameter_jacobian(prop, angles, t)[..., :, k]
    outer = dc[..., :, None] * c[..., None, :].conj()
    drho = outer + np.swapaxes(outer, -1, -2).conj()
    drho[..., 0, 0] = -(drho[..., 1, 1] + drho[..., 2, 2])
    return drho
