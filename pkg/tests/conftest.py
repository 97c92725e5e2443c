import numpy as np
import pytest
from frtpp.dataobj import ScenarioConfig, ChainConfig, validate_dataset
from frtpp.model import generate
from frtpp.stats import derive_stream


@pytest.fixture
def tiny_data():
    # three treated (two compliers), three control
    return validate_dataset(z=[1, 1, 1, 0, 0, 0],
                            d=[1, 0, 1, 0, 0, 0],
                            y=[2.0, 0.5, 1.3, -0.4, 0.9, 3.1],
                            x=[0.1, -1.2, 0.7, 0.3, -0.5, 1.9])


@pytest.fixture
def small_scenario():
    return ScenarioConfig(n=80, n_t=40, eta_c0=-3.0, replications=2,
                          chain=ChainConfig(total_iterations=60, burn_in=20))


@pytest.fixture
def small_data(small_scenario):
    data, _ = generate(small_scenario, derive_stream(11, "fixture/data"))
    return data


@pytest.fixture
def separated():
    """a larger dataset with well separated complier and never-taker means, plus its truth"""
    scenario = ScenarioConfig(n=2000, n_t=1000, eta_c0=3.0, eta_n=0.0, tau=0.0)
    return (scenario,) + generate(scenario, derive_stream(5, "fixture/separated"))


@pytest.fixture
def rng():
    return np.random.default_rng(0)
