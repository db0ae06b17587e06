"""Execution engines for the LOCAL, SLOCAL and online-LOCAL models."""

from .engine import (
    Context, Env, FunctionAlgorithm, LocalityViolation, Model, NodeAlgorithm, RunResult,
    Transcript, run_local, run_online_local, run_slocal, validate,
)
from .montecarlo import SuccessEstimate, estimate_success
from .randomness import FixedShared, PrivateRandomness, ReadOnceStream, SharedRandomness, derive_seed
from .stats import independence_pvalue, success_at_least, wilson

__all__ = [
    "Context", "Env", "FixedShared", "FunctionAlgorithm", "LocalityViolation", "Model", "NodeAlgorithm",
    "PrivateRandomness", "ReadOnceStream", "RunResult", "SharedRandomness", "SuccessEstimate",
    "Transcript", "derive_seed", "estimate_success", "independence_pvalue", "run_local",
    "run_online_local", "run_slocal", "success_at_least", "validate", "wilson",
]
