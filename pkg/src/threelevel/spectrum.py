"""Vacuum Lorentzian reservoir shared by both atom models."""
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError


@dataclass(frozen=True)
class LorentzianSpectrum:
    """Lorentzian reservoir centred at ``omega0`` with half-width ``lam``.

    The spectral density ``J_ij(w) = gamma_ij lam^2 / (2 pi ((omega0 - w)^2 + lam^2))``
    has the exponential correlation function ``gamma_ij lam/2 exp(-M tau)``
    with ``M = lam + i omega0``.
    """

    omega0: float
    lam: float

    def __post_init__(self):
        if not np.isfinite(self.omega0) or not np.isfinite(self.lam):
            raise InvalidArgumentError("spectrum parameters must be finite")
        if self.lam < 0:
            raise InvalidArgumentError(f"spectral width must be >= 0, got {self.lam}")

    @property
    def M(self):
        return complex(self.lam, self.omega0)

    def density(self, omega, gamma=1.0):
        """Spectral density ``J(omega)`` for coupling rate ``gamma``."""
        omega = np.asarray(omega, dtype=float)
        return gamma * self.lam ** 2 / (2 * np.pi * ((self.omega0 - omega) ** 2 + self.lam ** 2))
