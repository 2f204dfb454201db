import pytest

from rbf_certify.state import state


@pytest.fixture(autouse=True)
def clean_state():
    state.clear()
    yield
    state.clear()
