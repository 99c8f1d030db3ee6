import pytest

from ninepoints import enumerate_all
from ninepoints.pipeline import RunConfig, run_all


@pytest.fixture(scope="session")
def catalog():
    return enumerate_all()


@pytest.fixture(scope="session")
def pipeline_run(tmp_path_factory):
    """One full run of the pipeline shared by the catalog-level tests."""
    out = tmp_path_factory.mktemp("run")
    cfg = RunConfig(out=out)
    records, table = run_all(cfg)
    return cfg, records, table
