
import numpy as np
import pytest
from hypothesis import given, settings

from cubenorm import BlockShape, apply, from_dense, holap_cost
from cubenorm.exhaustive import block_groupings, min_cost_along_dim, min_cost_over_orders, min_cost_over_partitions
from conftest import SMALL_CASES, cubes, oracle_min_cost


@pytest.mark.parametrize("n,m,expected", [(4, 2, 3), (6, 2, 15), (6, 3, 10), (3, 2, 3), (5, 2, 15), (2, 4, 1)])
def test_grouping_counts(n, m, expected):
    orders = list(block_groupings(n, m))
    assert len(orders) == expected
    assert all(sorted(o) == list(range(n)) for o in orders)


@pytest.mark.parametrize("dense,min_cost,_fs,_is,_b", SMALL_CASES)
def test_small_cases_minimum(dense, min_cost, _fs, _is, _b):
    c = from_dense(dense)
    shape = BlockShape((2, 2))
    cost, norm = min_cost_over_partitions(c, shape)
    assert cost == min_cost
    assert holap_cost(apply(norm, c), shape) == cost


@settings(max_examples=30)
@given(cubes(min_d=2, max_d=2, max_n=4))
def test_routes_agree_with_oracle(cube):
    shape = BlockShape.regular(2, cube.d)
    a, _ = min_cost_over_orders(cube, shape)
    b, _ = min_cost_over_partitions(cube, shape)
    assert a == b == oracle_min_cost(cube.to_dense(), shape.extents)


@settings(max_examples=30)
@given(cubes(min_d=3, max_d=3, max_n=3))
def test_routes_agree_3d(cube):
    shape = BlockShape.regular(2, 3)
    assert min_cost_over_orders(cube, shape)[0] == min_cost_over_partitions(cube, shape)[0]


def test_along_dim(six_rows):
    cost, norm = min_cost_along_dim(six_rows, 0, BlockShape((2, 1)))
    assert holap_cost(apply(norm, six_rows), BlockShape((2, 1))) == cost
    assert norm.perms[1].is_identity()


def test_too_large():
    c = from_dense(np.ones((9, 9), dtype=int))
    with pytest.raises(ValueError):
        min_cost_over_orders(c, BlockShape((2, 2)))
