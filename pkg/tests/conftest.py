import math

from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

TWO_PI = 2 * math.pi


def rel(a, b):
    """Relative deviation of a from b."""
    return abs(a / b - 1)
