from os.path import join

from hypothesis import HealthCheck, settings
import numpy as np
import pytest

from data import data, ROOT
from focklib import Toolkit
from focklib.problem import dump_problem


settings.register_profile(
    "fockop", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.function_scoped_fixture]
)
settings.load_profile("fockop")


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def toolkit():
    toolkit = Toolkit(data["name"], config=data, log=False)
    toolkit.load_cogs(join(ROOT, "cogs"))
    return toolkit


@pytest.fixture
def problem_file(tmp_path):
    def write(A, b, options=None, name="problem.json"):
        path = tmp_path / name
        path.write_text(dump_problem(A, b, options), encoding="utf-8")
        return str(path)
    return write
