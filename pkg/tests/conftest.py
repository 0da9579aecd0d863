import numpy as np
import pytest

# One documented seed for every test that needs an arbitrary one, chosen
# globally so no individual assertion is tuned to a lucky draw.
HOUSE_SEED = 0


@pytest.fixture
def rng():
    return np.random.default_rng(HOUSE_SEED)


def write_text(path, text):
    path.write_text(text, encoding="utf-8")
    return path
