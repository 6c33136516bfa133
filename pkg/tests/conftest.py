import pytest

from entkit import _kernels


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # keep JIT compilation out of timed tests
    _kernels.warm_up()
