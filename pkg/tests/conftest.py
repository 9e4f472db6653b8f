import sys
from pathlib import Path

from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

# Property suites run 10^4 derandomized cases; everything else uses a small profile.
settings.register_profile("default", deadline=None, max_examples=200, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])
settings.load_profile("default")

PROPERTY = settings(max_examples=10_000, derandomize=True, deadline=None,
                    suppress_health_check=list(HealthCheck))
