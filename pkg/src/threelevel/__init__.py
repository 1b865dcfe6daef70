"""Exact dynamics of dissipative three-level atoms in Lorentzian reservoirs."""

__version__ = "0.1.0"

from .errors import (ConfigError, DegeneracyError, GridMismatchError, InvalidArgumentError,
                     StepSizeError, ThreeLevelError)
from .spectrum import LorentzianSpectrum
from .vtype import (PureInitialStateV, VAtomParams, VPropagator, build_propagator, density_matrix_v,
                    propagate_amplitudes)
from .lambda_atom import (LambdaAtomParams, LambdaSolution, PureInitialStateLambda, build_lambda_solution,
                          density_matrix_lambda, xi)
from .metrics import QfiRequest, l1_coherence, negativity, qfi, qfi_evolution, rel_entropy_coherence
from .channel import QutritSuperoperator, build_v_channel, choi_matrix, extend_channel, werner_state

__all__ = [
    "ConfigError", "DegeneracyError", "GridMismatchError", "InvalidArgumentError", "StepSizeError",
    "ThreeLevelError", "LorentzianSpectrum", "PureInitialStateV", "VAtomParams", "VPropagator",
    "build_propagator", "density_matrix_v", "propagate_amplitudes", "LambdaAtomParams", "LambdaSolution",
    "PureInitialStateLambda", "build_lambda_solution", "density_matrix_lambda", "xi", "QfiRequest",
    "l1_coherence", "negativity", "qfi", "qfi_evolution", "rel_entropy_coherence", "QutritSuperoperator",
    "build_v_channel", "choi_matrix", "extend_channel", "werner_state",
]
