import os
import shutil

import numpy as np
import pytest

from svipipe.acquire.mockserver import MockProviderServer, load_corpus_state

PKG_DATA = os.path.join(os.path.dirname(__file__), "..", "src", "svipipe", "data")
MINI = os.path.abspath(os.path.join(PKG_DATA, "mini"))
MINI_TOML = os.path.join(MINI, "mini.toml")
MINI_BBOX = "103.8370,1.2750,103.8500,1.2880"


@pytest.fixture
def mini_dir():
    return MINI


@pytest.fixture
def mock_server():
    srv = MockProviderServer(load_corpus_state(MINI))
    srv.start()
    yield srv
    srv.stop()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def mini_copy(tmp_path):
    d = tmp_path / "mini"
    shutil.copytree(MINI, d)
    return d
