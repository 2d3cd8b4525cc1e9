import pytest

from gsp import HiddenInstance, VectorP, canonicalize


@pytest.fixture(scope="session")
def ref_secret():
    """The worked 16-element example: S = <0011, 0110> in Z_2^4."""
    return canonicalize(2, 4, [VectorP(2, (0, 0, 1, 1)), VectorP(2, (0, 1, 1, 0))])


@pytest.fixture(scope="session")
def ref_instance(ref_secret):
    return HiddenInstance(2, 4, 2, ref_secret, label_seed=7, obfuscate=False)


def vec(p, digits):
    return VectorP(p, tuple(int(ch) for ch in digits))
