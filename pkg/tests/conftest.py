import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

from cfol.cli import load_model  # noqa: E402
from cfol.syntax import HenkinSignature  # noqa: E402

settings.register_profile("default", deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def M2():
    """The bundled two-point structure: d(a,b)=1/2, Q(a)=0, Q(b)=3/4."""
    return load_model("twopoint")


@pytest.fixture(scope="session")
def sig2(M2):
    return M2.sig


@pytest.fixture(scope="session")
def hsig2(sig2):
    return HenkinSignature(sig2)
