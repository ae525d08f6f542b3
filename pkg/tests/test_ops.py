import math

import pytest

from tolang import ops
from tolang.core import TypeList, make, tol, zeros
from tolang.elementary import STAR, fn
from tolang.errors import ConversionError, NotAPermutationError, VolumeMismatchError


def test_shape_dim_capacity_vol():
    m = tol([[1, 2], [3, 4], [5, 6]])
    assert ops.op_shape(m).to_nested() == [3, 2]
    assert ops.op_dim(tol([[1, 2], [3, 4]])) == 2
    v = make(tuple((1, 2.0) for _ in range(24)), (4, 3, 2), TypeList.of("Z", "R"))
    assert ops.op_capacity(v) == 2
    assert ops.op_vol(v) == 48


def test_space():
    assert ops.op_space(tol((0, 3.0, 1))).ids == ("Z", "R", "N")
    assert ops.op_space(tol(3.14)).ids == ("R",)
    assert ops.op_space(tol([True, False])).ids == ("B",)


def test_convert():
    r = ops.op_convert(tol([[1, 2], [3, 4]]), TypeList.of("R"))
    assert r.to_nested() == [[1.0, 2.0], [3.0, 4.0]]
    assert all(isinstance(x, float) for cell in r.data for x in cell)
    t = tol([[1, 2], [3, 4]])
    assert ops.op_convert(t, ops.op_space(t)) == t
    with pytest.raises(ConversionError):
        ops.op_convert(tol([-1]), TypeList.of("N"))


def test_part():
    assert ops.op_part(tol([[1, 2], [3, 4]]), [2, 2]).to_nested() == 4
    t = tol([[1, 2, 3], [4, 5, 6], [7, 8, 9]])
    assert ops.op_part_block(t, [1, 1], [2, 2]).to_nested() == [[1, 2], [4, 5]]
    assert ops.op_part_block(t, [1, 1], [3, 3]) == t


def test_swap():
    t = tol([[1, 2], [3, 4]])
    assert ops.op_swap(t, 1, [2, 1]).to_nested() == [[2, 1], [4, 3]]
    assert ops.op_swap(t, 2, [1, 2]) == t
    assert ops.op_swap(ops.op_swap(t, 2, [2, 1]), 2, [2, 1]) == t
    with pytest.raises(NotAPermutationError):
        ops.op_swap(t, 1, [1, 1])


def test_reshape():
    t = tol([[1, 2], [3, 4], [5, 6]])
    assert ops.op_reshape(t, [2, 3]).to_nested() == [[1, 2, 3], [4, 5, 6]]
    assert ops.op_reshape(tol([[1, 2], [3, 4]]), [-1]).to_nested() == [1, 2, 3, 4]
    with pytest.raises(VolumeMismatchError):
        ops.op_reshape(t, [4, 2])


def test_tile():
    t = tol([[(1, 'a'), (2, 'b')], [(3, 'c'), (4, 'd')]])
    assert ops.op_tile(t).to_nested() == [(1, 'a', 2, 'b'), (3, 'c', 4, 'd')]
    big = make(tuple((1, 2.5) for _ in range(24)), (4, 3, 2), TypeList.of("Z", "Q"))
    tiled = ops.op_tile(big)
    assert tiled.shape == (4, 3)
    assert tiled.type_list.ids == ("Z", "Q", "Z", "Q")
    five = ops.op_tile(tol([5]))
    assert five.shape == () and five.to_nested() == 5


def test_map():
    got = ops.op_map(tol([1., 2., 3.]), fn("sqrt")).to_nested()
    assert got == [math.sqrt(1.0), math.sqrt(2.0), math.sqrt(3.0)]
    t = tol([[1, 2], [3, 4]])
    assert ops.op_map(t, STAR) == t
    assert ops.op_map(zeros((2, 2)), lambda e, c: c[0] + c[1]).to_nested() == [[2, 3], [3, 4]]


def test_reduce():
    assert ops.op_reduce(tol([1, 2, 3, 4, 5]), "add", 0).to_nested() == 15
    assert ops.op_reduce(tol([7]), lambda x, acc, c: 10 * acc.scalar + x.scalar, 3).to_nested() == 37
    assert ops.op_reduce(tol([1, 5, 3]), "max", -math.inf).to_nested() == 5


def test_reduce_indexed_returns_coordinate():
    best, where = ops.op_reduce_indexed(tol([[4, 1], [0, 9]]), "min", math.inf)
    assert best == 0 and where == (2, 1)


def test_bracket_stack_and_concat():
    a, b = tol([1, 2]), tol([3, 4])
    assert ops.op_bracket([a, b]).to_nested() == [[1, 2], [3, 4]]
    assert ops.op_bracket([a, tol([5])]).to_nested() == [1, 2, 5]
