import pytest

from lmatrix.catalog import get_example


@pytest.fixture(autouse=True)
def _isolated_config(monkeypatch, tmp_path):
    # A missing LMATRIX_CONFIG still anchors data/ at tmp_path, so run logs stay out of $HOME.
    monkeypatch.setenv("LMATRIX_CONFIG", str(tmp_path / "config.env"))
    for key in ("MAX_RANK", "MAX_LEN", "WORD_LENGTH_CAP", "TERM_CAP", "SEARCH_NODE_CAP", "JOBS", "RUN_LOG"):
        monkeypatch.delenv(key, raising=False)


@pytest.fixture
def rank3():
    return get_example("rank3-exchange").matrix()


@pytest.fixture
def running():
    return get_example("running").matrix()


@pytest.fixture
def torus():
    return get_example("dreaded-torus").matrix()


@pytest.fixture
def kernel():
    return get_example("pi-kernel").matrix()
