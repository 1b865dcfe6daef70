"""Interference diagnostics for both atom models.

For the V-type atom a root of the characteristic cubic on the imaginary
axis leaves a non-decaying component in the excited amplitudes: the
population trapped by destructive interference of the two decay channels.
Pure imaginary roots need ``omega1 == omega2``.

For the Lambda-type atom no real ``chi`` solves ``R(i chi) = 0`` once the
reservoir has a finite width, so the excited population always decays.
``elimination_discriminant`` re-evaluates the algebra behind that statement
numerically.
"""
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError
from .linalg import RootMultiplicity

IMAGINARY_TOL = 1e-8


@dataclass(frozen=True)
class AsymptoticsReport:
    roots: tuple
    real_parts: tuple
    imaginary_root_count: int
    trapped_fraction: float
    stationary: bool = True

    def to_dict(self):
        return {
            "roots": [[r.real, r.imag] for r in self.roots],
            "real_parts": list(self.real_parts),
            "imaginary_root_count": self.imaginary_root_count,
            "trapped_fraction": self.trapped_fraction,
            "stationary": self.stationary,
        }


def _exponential_modes(prop):
    """(root, coefficient column) pairs for terms of the form X exp(b t)."""
    b = prop.roots
    c = prop.coeffs
    if prop.branch is RootMultiplicity.DISTINCT:
        return [(b[i], c[:, i]) for i in range(3)]
    if prop.branch is RootMultiplicity.DOUBLE:
        # (X1 + X2 t) exp(b1 t): only X1 survives as a bounded mode
        return [(b[0], c[:, 0]), (b[2], c[:, 2])]
    return [(b[0], c[:, 0])]


def classify_v_asymptotics(prop, init, tol=IMAGINARY_TOL):
    """Long-time excited population left in the V-type atom.

    With a single imaginary root the asymptotic ``|c1|^2 + |c2|^2`` is exact.
    With several imaginary roots of different frequency the populations beat
    forever; the report then holds the time average and ``stationary`` is
    False.
    """
    if not tol > 0:
        raise InvalidArgumentError("tol must be positive")
    roots = prop.roots
    modes = [(b, col) for b, col in _exponential_modes(prop) if abs(b.real) < tol]
    count = int(sum(abs(r.real) < tol for r in roots))
    amps = [(col[0] * init.c1 + col[1] * init.c2, col[2] * init.c2 + col[3] * init.c1)
            for _, col in modes]
    freqs = [b.imag for b, _ in modes]
    stationary = len(modes) < 2 or np.ptp(freqs) < tol
    if stationary:
        a1 = sum(a for a, _ in amps)
        a2 = sum(a for _, a in amps)
        trapped = abs(a1) ** 2 + abs(a2) ** 2
    else:
        trapped = sum(abs(a) ** 2 + abs(b) ** 2 for a, b in amps)
    return AsymptoticsReport(
        roots=tuple(complex(r) for r in roots),
        real_parts=tuple(float(r.real) for r in roots),
        imaginary_root_count=count,
        trapped_fraction=float(min(1.0, max(0.0, trapped))),
        stationary=bool(stationary),
    )


def v_interference_necessary_condition(params):
    """Pure imaginary roots require degenerate excited levels."""
    return abs(params.omega1 - params.omega2) < 1e-10


def _imag_part_residual(chi, d1, d2, lam, g1, g2):
    s = d1 + d2
    return (chi ** 3 + s * chi ** 2 - (lam ** 2 - d1 * d2 + lam / 2 * (g1 + g2)) * chi
            - lam / 2 * (g1 * d2 + g2 * d1))


def lambda_imaginary_root_search(params, spec):
    """Real ``chi`` with ``R(i chi) = 0``, as a sorted tuple (empty if none).

    Candidates come from the quadratic real-part condition and are kept when
    they also null the cubic imaginary-part condition to within
    ``1e-8 * max(1, |chi|^3)``.
    """
    lam = spec.lam
    g1, g2 = params.gamma1, params.gamma2
    d1, d2 = params.detunings(spec)
    s = d1 + d2
    disc = s * s + 4 * lam * (g1 + g2)  # of 2 chi^2 + s chi - lam (g1+g2)/2
    candidates = {(-s + sign * np.sqrt(disc)) / 4 for sign in (-1.0, 1.0)}
    found = [chi for chi in candidates
             if abs(_imag_part_residual(chi, d1, d2, lam, g1, g2)) < 1e-8 * max(1.0, abs(chi) ** 3)]
    return tuple(sorted(float(c) + 0.0 for c in found))


def elimination_coefficients(params, spec):
    """Coefficients ``(a, b, c)`` of the quadratic in ``omega0`` obtained by
    eliminating ``chi`` from the two imaginary-axis conditions."""
    lam = spec.lam
    g1, g2 = params.gamma1, params.gamma2
    w1, w2 = params.omega1, params.omega2
    u = g1 - 3 * g2
    v = g2 - 3 * g1
    n = 2 * (w1 - w2) ** 2 + 8 * lam ** 2 + 2 * lam * (g1 + g2)
    a = 4 * lam ** 2 * (u + v) ** 2 + 4 * lam * n * (u + v)
    b = (-8 * lam ** 2 * (u + v) * (w1 * u + w2 * v)
         - 2 * lam * n * ((3 * w1 + w2) * u + (3 * w2 + w1) * v))
    c = (4 * lam ** 2 * (w1 * u + w2 * v) ** 2 + 2 * lam * n * (w1 + w2) * (w1 * u + w2 * v)
         + 0.5 * lam * n ** 2 * (u + v))
    return a, b, c


def elimination_closed_form(params, spec):
    """Factored discriminant ``-256 lam^2 n^2 [g1 g2 (w1-w2)^2 + lam^2 (g1+g2)^2]``."""
    lam = spec.lam
    g1, g2 = params.gamma1, params.gamma2
    dw = params.omega1 - params.omega2
    n = 2 * dw ** 2 + 8 * lam ** 2 + 2 * lam * (g1 + g2)
    return -256 * lam ** 2 * n ** 2 * (g1 * g2 * dw ** 2 + lam ** 2 * (g1 + g2) ** 2)


def elimination_discriminant(params, spec):
    """Discriminant certifying that no real ``omega0`` gives an imaginary root.

    Returns
    -------
    delta : float
        Negative when the certificate holds.
    branch : {"general", "sum-zero"}
        "sum-zero" when ``delta1 + delta2 == 0``, where the elimination
        instead yields a quadratic in ``delta1``.
    """
    lam = spec.lam
    if not lam > 0:
        raise InvalidArgumentError("the discriminant check needs lam > 0")
    d1, d2 = params.detunings(spec)
    if abs(d1 + d2) <= 1e-12 * max(1.0, abs(spec.omega0)):
        g1, g2 = params.gamma1, params.gamma2
        root = np.sqrt((g1 + g2) * lam)
        # +-root d^2 - lam (g1-g2) d +- (root lam^2 + root lam (g1+g2)/4) = 0
        A = root
        B = -lam * (g1 - g2)
        C = root * lam ** 2 + 0.25 * root * lam * (g1 + g2)
        return float(B * B - 4 * A * C), "sum-zero"
    a, b, c = elimination_coefficients(params, spec)
    return float(b * b - 4 * a * c), "general"
