"""Quantum discord of two qubits: measures, the concordant manifold, and
unitary and random-telegraph-noise dynamics with a classifier of how
entanglement and discord die."""
from .state import *  # noqa: F401,F403
from .measures import *  # noqa: F401,F403
from .manifold import *  # noqa: F401,F403
from .evolution import *  # noqa: F401,F403
from .noise import *  # noqa: F401,F403
from .classifier import *  # noqa: F401,F403
from .config import ConfigError, ScenarioConfig, load_json, parse_config, run_trajectory

__version__ = "0.1.0"
