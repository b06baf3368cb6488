"""Quasiprobability representations of open-system dynamics and a state-independent backflow witness."""
from .entropy import AlphaOrder, collision_entropy, h2_monotonicity_scan, majorization_check, renyi_entropy
from .errors import *  # noqa: F401,F403
from .frames import FrameKind, FrameSet, build_frame, validate_frame
from .grid import TimeGrid
from .models import (
    DecoherenceFunction,
    DynamicalModel,
    ModelKind,
    RateFunction,
    RateFunctions,
    channel_at,
    generator_at,
    rate_of,
)
from .qpr import born_probability, kolmogorov_negativity, rep_channel, rep_effect, rep_generator, rep_state
from .validation import blp_measure, cp_rate_report, nonnegativity_audit
from .witness import instantaneous_flow, markov_criteria, nm_measure, witness_eigenvalues, zeta_trajectory

__version__ = "0.1.0"
