import os

from hypothesis import HealthCheck, settings

# Deterministic by default; HYPOTHESIS_SEED=<int> re-randomises reproducibly.
_seed = os.environ.get("HYPOTHESIS_SEED")
settings.register_profile(
    "default",
    derandomize=_seed is None,
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")
