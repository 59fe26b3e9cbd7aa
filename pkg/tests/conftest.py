from __future__ import annotations

import numpy as np
import pytest

from review_calib import GenConfig, gen_conference, scaled_config


@pytest.fixture(scope="session")
def tiny_config() -> GenConfig:
    return scaled_config(GenConfig(), 80)


@pytest.fixture(scope="session")
def tiny_conf(tiny_config):
    return gen_conference(tiny_config)


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)
