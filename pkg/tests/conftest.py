import os
import random

import pytest

from divpoly.samples import log_del_pezzo, log_del_pezzo_cone_divisor


def make_rng(tag: str) -> random.Random:
    seed = int(os.environ.get("DIVPOLY_SEED", "20240601"))
    return random.Random(f"{seed}:{tag}")


@pytest.fixture
def ldp():
    return log_del_pezzo()


@pytest.fixture
def ldp_cone():
    return log_del_pezzo_cone_divisor()


@pytest.fixture
def ldp_points(ldp):
    curve = ldp.curve
    return curve.point("0"), curve.point("inf"), curve.point("1")
