"""Direct numerical ground truth for the closed-form solutions.

A Lorentzian reservoir has an exponential memory kernel, so each memory
integral ``z(t) = int_0^t exp(-M (t - s)) c(s) ds`` obeys ``z' = -M z + c``.
That turns the integro-differential amplitude equations into a small linear
ODE system, integrated here with classical fixed-step RK4. Nothing in this
module uses polynomial roots or residues.

The Lambda-type reservoir populations and ground-state coherence are double
integrals over the excited amplitude; they are evaluated with the 2D
trapezoidal rule on a uniform grid.
"""
from dataclasses import dataclass

import numpy as np

from .errors import GridMismatchError, InvalidArgumentError, StepSizeError


@dataclass(frozen=True)
class IntegratorConfig:
    step_size: float = 1e-4
    method: str = "rk4-fixed"
    max_time: float = np.inf

    def __post_init__(self):
        if not self.step_size > 0:
            raise InvalidArgumentError("step_size must be positive")
        if self.method != "rk4-fixed":
            raise InvalidArgumentError(f"unsupported integrator {self.method!r}")


def _rk4_step_matrix(A, h):
    """One RK4 step of ``y' = A y`` written as a matrix.

    For a linear autonomous system the four RK4 stages collapse to the
    degree-4 Taylor polynomial of ``exp(hA)``; applying this matrix is
    the RK4 update itself, not a matrix exponential.
    """
    n = A.shape[0]
    hA = h * A
    P = np.eye(n, dtype=complex)
    term = np.eye(n, dtype=complex)
    for k in range(1, 5):
        term = term @ hA / k
        P = P + term
    return P


def _march(A, y0, grid, h, norm_fn=None, norm_cap=None):
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise InvalidArgumentError("time grid must be a non-empty 1-D array")
    if grid[0] < 0 or np.any(np.diff(grid) < 0):
        raise InvalidArgumentError("time grid must be non-negative and non-decreasing")
    out = np.empty((grid.size, y0.size), dtype=complex)
    y = y0.astype(complex)
    t = 0.0
    cache = {}
    for idx, target in enumerate(grid):
        span = target - t
        if span > 0:
            nsub = max(1, int(np.ceil(span / h - 1e-9)))
            hs = span / nsub
            key = round(hs, 15)
            if key not in cache:
                cache[key] = _rk4_step_matrix(A, hs)
            P = cache[key]
            for _ in range(nsub):
                y = P @ y
                if norm_fn is not None and norm_fn(y) > norm_cap:
                    raise StepSizeError(
                        f"excited-state norm {norm_fn(y):.8f} exceeded {norm_cap:.8f} "
                        f"near t={t:.4f}; reduce the step size (h={hs:g})")
            t = target
        out[idx] = y
    return out


def integrate_v_microscopic(params, spec, init, grid, config=None):
    """Amplitudes (c0, c1, c2) of the V-type atom on ``grid``.

    State vector is ``(c1, c2, z1, z2)`` with ``z_i`` the kernel-weighted
    memory of ``c_i``.

    Returns
    -------
    c0, c1, c2 : ndarray of complex
    """
    config = config or IntegratorConfig()
    if spec.lam < 0:
        raise InvalidArgumentError("spectral width must be >= 0")
    b11, b22, b12 = params.couplings(spec.lam)
    M = spec.M
    A = np.array([
        [-1j * params.omega1, 0, -b11, -b12],
        [0, -1j * params.omega2, -b12, -b22],
        [1, 0, -M, 0],
        [0, 1, 0, -M],
    ], dtype=complex)
    y0 = np.array([init.c1, init.c2, 0, 0], dtype=complex)
    cap = abs(init.c1) ** 2 + abs(init.c2) ** 2 + 1e-6
    ys = _march(A, y0, grid, config.step_size,
                norm_fn=lambda y: abs(y[0]) ** 2 + abs(y[1]) ** 2, norm_cap=cap)
    return np.full(len(ys), init.c0, dtype=complex), ys[:, 0], ys[:, 1]


def integrate_lambda_c3(params, spec, c3_0, grid, config=None):
    """Excited amplitude c3(t) of the Lambda-type atom on ``grid``.

    State vector is ``(c3, z1, z2)`` where ``z_j`` carries the memory
    through channel j with ``M_j = lam + i (omega0 - omega_j)``.
    """
    config = config or IntegratorConfig()
    lam = spec.lam
    if lam < 0:
        raise InvalidArgumentError("spectral width must be >= 0")
    m1 = complex(lam, spec.omega0 - params.omega1)
    m2 = complex(lam, spec.omega0 - params.omega2)
    k1, k2 = params.gamma1 * lam / 2, params.gamma2 * lam / 2
    A = np.array([
        [0, -k1, -k2],
        [1, -m1, 0],
        [1, 0, -m2],
    ], dtype=complex)
    y0 = np.array([c3_0, 0, 0], dtype=complex)
    cap = abs(c3_0) ** 2 + 1e-6
    ys = _march(A, y0, grid, config.step_size,
                norm_fn=lambda y: abs(y[0]) ** 2, norm_cap=cap)
    return ys[:, 0]


def _trapezoid_weights(n, h):
    w = np.full(n, h)
    w[0] = w[-1] = h / 2
    return w


def _double_trapezoid(c3, h, rate, phase_tau, phase_taup, block=512):
    """sum_{k,m} w_k w_m c3_k conj(c3_m) exp(-rate|t_m - t_k| + i(phase_tau t_k - phase_taup t_m))."""
    n = c3.size
    tau = np.arange(n) * h
    w = _trapezoid_weights(n, h)
    left = w * c3 * np.exp(1j * phase_tau * tau)
    right = w * c3.conj() * np.exp(-1j * phase_taup * tau)
    total = 0j
    for start in range(0, n, block):
        sl = slice(start, min(n, start + block))
        kern = np.exp(-rate * np.abs(tau[None, :] - tau[sl, None]))
        total += left[sl] @ (kern @ right)
    return total


def quadrature_lambda_coefficients(params, spec, c3_series, grid):
    """Trapezoidal evaluation of (alpha1, alpha2, Theta) at ``grid[-1]``.

    Parameters
    ----------
    c3_series : array of complex
        Excited amplitude sampled on ``grid``.
    grid : array of float
        Uniform grid starting at 0.

    Returns
    -------
    alpha1, alpha2 : float
    theta : complex
        All normalised by ``|c3(0)|^2``.
    """
    grid = np.asarray(grid, dtype=float)
    c3 = np.asarray(c3_series, dtype=complex)
    if grid.shape != c3.shape:
        raise GridMismatchError("c3 series and grid lengths differ")
    if grid[0] != 0.0:
        raise InvalidArgumentError("quadrature grid must start at t = 0")
    if grid.size == 1:
        return 0.0, 0.0, 0j
    steps = np.diff(grid)
    h = steps[0]
    if np.max(np.abs(steps - h)) > 1e-9 * max(1.0, h):
        raise InvalidArgumentError("quadrature needs a uniformly spaced series")
    t = grid[-1]
    lam = spec.lam
    d1 = spec.omega0 - params.omega1
    d2 = spec.omega0 - params.omega2
    norm = abs(c3[0]) ** 2
    # f_j(tau' - tau) carries exp(-i d_j (tau' - tau)): phase i d_j tau - i d_j tau'
    a1 = params.gamma1 * lam / 2 * _double_trapezoid(c3, h, lam, d1, d1)
    a2 = params.gamma2 * lam / 2 * _double_trapezoid(c3, h, lam, d2, d2)
    g12 = np.sqrt(params.gamma1 * params.gamma2)
    th = (g12 * lam / 2 * np.exp(1j * (params.omega1 - params.omega2) * t)
          * _double_trapezoid(c3, h, lam, d1, d2))
    return float(a1.real / norm), float(a2.real / norm), complex(th / norm)


@dataclass(frozen=True)
class ComparisonReport:
    """Per-observable maximum absolute deviation between two series."""

    errors: dict

    @property
    def max_error(self):
        return max(self.errors.values()) if self.errors else 0.0

    def failures(self, tol):
        return {k: v for k, v in self.errors.items() if not v < tol}

    def passed(self, tol):
        return not self.failures(tol)


def compare_report(analytic, numeric, grid_a=None, grid_n=None):
    """Compare two ``{name: series}`` mappings observable by observable.

    Optional grids are checked for equality before comparing.
    """
    if grid_a is not None or grid_n is not None:
        ga, gn = np.asarray(grid_a, dtype=float), np.asarray(grid_n, dtype=float)
        if ga.shape != gn.shape or np.max(np.abs(ga - gn), initial=0.0) > 1e-12:
            raise GridMismatchError("analytic and numeric grids differ")
    missing = set(analytic) ^ set(numeric)
    if missing:
        raise GridMismatchError(f"observable sets differ: {sorted(missing)}")
    errors = {}
    for name in analytic:
        a = np.asarray(analytic[name])
        b = np.asarray(numeric[name])
        if a.shape != b.shape:
            raise GridMismatchError(f"{name}: shapes {a.shape} and {b.shape} differ")
        errors[name] = float(np.max(np.abs(a - b), initial=0.0))
    return ComparisonReport(errors)
