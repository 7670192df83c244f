import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import kernel_box
from raagfix.abelian import (
    Lattice,
    determinant,
    fixed_lattice,
    hermite_normal_form,
    identity_matrix,
    lattice_member,
    matmul,
    periodic_lattice,
)

PATH_WITNESS = [[1, 1, 0], [0, 1, 0], [0, -1, 1]]
FGNO = [
    [1, -1, 0, 0, 0],
    [0, 1, 0, 0, 0],
    [0, 0, 1, 0, 0],
    [0, 0, -1, 1, 0],
    [0, 1, 1, 0, 1],
]
MINUS_ID = [[-1, 0], [0, -1]]


def is_hnf(h):
    last = -1
    zero_seen = False
    for i, row in enumerate(h):
        if not any(row):
            zero_seen = True
            continue
        assert not zero_seen, "zero row above a nonzero row"
        p = next(j for j, x in enumerate(row) if x)
        assert p > last and row[p] > 0
        for k in range(i):
            assert 0 <= h[k][p] < row[p]
        last = p
    return True


def test_hnf_examples():
    h, u = hermite_normal_form(identity_matrix(3))
    assert h == identity_matrix(3) and u == identity_matrix(3)
    h, u = hermite_normal_form([[2, 4], [1, 2]])
    assert h == [[1, 2], [0, 0]]
    assert matmul(u, [[2, 4], [1, 2]]) == h
    h, _ = hermite_normal_form([[0, 0], [0, 0]])
    assert h == [[0, 0], [0, 0]]


matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@settings(max_examples=200, deadline=None)
@given(matrices, st.randoms(use_true_random=False))
def test_hnf_properties(m, rnd):
    h, u = hermite_normal_form(m)
    assert matmul(u, m) == h
    assert abs(determinant(u)) == 1
    assert is_hnf(h)
    shuffled = list(m)
    rnd.shuffle(shuffled)
    h2, _ = hermite_normal_form(shuffled)
    assert h2 == h


@settings(max_examples=100, deadline=None)
@given(st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3), min_size=3, max_size=3))
def test_determinant_against_cofactor(m):
    def cof(a):
        if len(a) == 1:
            return a[0][0]
        return sum((-1) ** j * a[0][j] * cof([row[:j] + row[j + 1:] for row in a[1:]]) for j in range(len(a)))

    assert determinant(m) == cof(m)


def test_fixed_lattice_path_witness():
    lat = fixed_lattice(PATH_WITNESS)
    assert lat.basis == ((1, 0, 1), (0, 1, 0))
    assert lattice_member(lat, (2, 5, 2))
    assert not lattice_member(lat, (1, 0, 0))
    assert lattice_member(lat, (0, 0, 0))
    with pytest.raises(ValueError):
        lattice_member(lat, (1, 0))


def box_agrees(m, lat, bound):
    sols = set(kernel_box(m, bound))
    n = len(m)
    from itertools import product

    for u in product(range(-bound, bound + 1), repeat=n):
        if (u in sols) != lattice_member(lat, u):
            return False
    # the box solutions generate the lattice
    return Lattice.from_generators(sorted(sols), n) == lat


def test_fixed_lattice_against_box_path():
    assert box_agrees(PATH_WITNESS, fixed_lattice(PATH_WITNESS), 5)


def test_fixed_lattice_fgno():
    lat = fixed_lattice(FGNO)
    assert lat.rank == 3
    for b in lat.basis:
        assert b[0] == b[3] == b[4]
    assert box_agrees(FGNO, lat, 3)


def test_identity_gives_full_lattice():
    assert fixed_lattice(identity_matrix(4)) == Lattice.full(4)


def test_periodic_lattices():
    assert periodic_lattice(PATH_WITNESS, 5) == fixed_lattice(PATH_WITNESS)
    assert periodic_lattice(MINUS_ID, 2) == Lattice.full(2)
    assert periodic_lattice(MINUS_ID, 1).rank == 0
    with pytest.raises(ValueError):
        periodic_lattice(MINUS_ID, 0)


def test_fixed_inside_periodic_random():
    rng = random.Random(3)
    for _ in range(60):
        n = rng.randint(1, 4)
        m = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)]
        fix = fixed_lattice(m)
        for k in range(1, 4):
            assert fix.issubset(periodic_lattice(m, k))


def test_row_vector_convention():
    # u M for u = e_a gives the exponent vector of the image of a
    lat = fixed_lattice(PATH_WITNESS)
    assert not lattice_member(lat, (1, 0, 0))
    assert lattice_member(lat, (0, 1, 0))
