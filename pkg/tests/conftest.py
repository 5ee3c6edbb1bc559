import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from lfcsim.dataset import load_dataset, shipped_dataset_path


@pytest.fixture(scope="session")
def shipped():
    return load_dataset(shipped_dataset_path())


@pytest.fixture(scope="session")
def shipped_system(shipped):
    return shipped.system_model(dt=0.01)


@pytest.fixture(scope="session")
def shipped_network(shipped):
    return shipped.network_model()
