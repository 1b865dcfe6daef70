"""Parameter sets and helpers shared by several test modules."""
import numpy as np
from scipy.optimize import brentq

from threelevel.lambda_atom import LambdaAtomParams
from threelevel.spectrum import LorentzianSpectrum
from threelevel.vtype import VAtomParams, build_propagator

QFI_POINT = (np.pi / 4, np.pi / 4, np.pi / 2, np.pi / 2)

DARK_RESONANT = (VAtomParams(20.0, 20.0, 1.0, 1.0), LorentzianSpectrum(20.0, 2.0))
WEAK_DETUNED = (VAtomParams(90.0, 92.0, 1.0, 1.0), LorentzianSpectrum(91.0, 0.1))
INTERFERING = (VAtomParams(90.0, 90.0, 1.0, 1.0), LorentzianSpectrum(90.0, 2.0))
NON_INTERFERING = (VAtomParams(90.0, 92.0, 1.0, 1.0), LorentzianSpectrum(91.0, 2.0))

LAMBDA_CASES = {
    "red": (LambdaAtomParams(90.0, 90.0, 1.0, 1.0), LorentzianSpectrum(91.0, 0.0)),
    "blue": (LambdaAtomParams(90.0, 90.0, 1.0, 1.0), LorentzianSpectrum(90.0, 0.5)),
    "black": (LambdaAtomParams(90.0, 92.0, 1.0, 1.0), LorentzianSpectrum(91.0, 1.0)),
}


def random_v(rng):
    return (VAtomParams(rng.uniform(10, 100), rng.uniform(10, 100), rng.uniform(0.2, 4), rng.uniform(0.2, 4)),
            LorentzianSpectrum(rng.uniform(10, 100), rng.uniform(0.1, 5)))


def random_lambda(rng):
    return (LambdaAtomParams(rng.uniform(10, 100), rng.uniform(10, 100), rng.uniform(0.1, 5), rng.uniform(0.1, 5)),
            LorentzianSpectrum(rng.uniform(10, 100), rng.uniform(0.1, 5)))


def double_root_family(eps, g=1.0, w=20.0):
    """Exact double root at eps = 0: equal levels, equal rates, lam = 4 g."""
    return VAtomParams(w, w, g, g), LorentzianSpectrum(w, 4 * g * (1 + eps))


def triple_root_family(eps, g=1.0, w=50.0):
    """Exact triple root at eps = 0: lam = 27 g / 8, levels split by 2 lam / sqrt(27)."""
    lam = 27 * g / 8
    d = lam / np.sqrt(27)
    return VAtomParams(w - d, w + d, g, g), LorentzianSpectrum(w, lam * (1 + eps))


def _separation(prop, kind):
    r = prop.roots
    gaps = [abs(r[i] - r[j]) for i, j in ((0, 1), (0, 2), (1, 2))]
    return min(gaps) if kind == "double" else max(gaps)


def branch_gap(kind, separations=(1e-3, 1e-4), grid=None):
    """Forced-branch vs generic-branch deviation at the given root separations.

    Returns the per-separation max |E, F, G, H| differences on ``grid`` and
    their linear extrapolation to zero separation.
    """
    family = double_root_family if kind == "double" else triple_root_family
    grid = np.linspace(0, 10, 101) if grid is None else grid
    gaps = []
    for s in separations:
        eps = brentq(lambda e: _separation(build_propagator(*family(e), tol=1e-30, branch="distinct"), kind) - s,
                     1e-13, 1e-1, xtol=1e-20)
        params, spec = family(eps)
        generic = build_propagator(params, spec, branch="distinct")
        forced = build_propagator(params, spec, branch=kind)
        gaps.append(float(np.max(np.abs(generic.efgh(grid) - forced.efgh(grid)))))
    (s1, s2), (d1, d2) = separations, gaps
    return gaps, d2 - s2 * (d1 - d2) / (s1 - s2)
