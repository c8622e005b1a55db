import numpy as np
import pytest

from gatsp.instance import TspInstance, build_profit_matrix

# The 5-city worked example: base profit matrix, planted route
# (1-based (4,3,5,1,2,4)), margin 1.  The five planted edges are worth
# 27 + 1 = 28 each, so the closed-route optimum is 5 * 28 = 140.
EXAMPLE_BASE = np.array(
    [
        [17, 22, 27, 15, 17],
        [22, 16, 18, 20, 15],
        [27, 18, 18, 16, 17],
        [15, 20, 16, 13, 16],
        [17, 15, 17, 16, 10],
    ],
    dtype=np.int64,
)
EXAMPLE_ROUTE = np.array([3, 2, 4, 0, 1, 3], dtype=np.int64)  # 0-based


@pytest.fixture(scope="session")
def example_instance() -> TspInstance:
    profit = build_profit_matrix(EXAMPLE_BASE, EXAMPLE_ROUTE, margin=1)
    inst = TspInstance(
        n=5,
        profit=profit,
        planted_route=EXAMPLE_ROUTE,
        max_element=27,
        margin=1,
        optimum=140,
    )
    inst.validate()
    return inst
