"""Lattice enumeration, ordering, bijections, and shell combinatorics."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsu2.lattice import (
    FullIndex,
    GammaIndex,
    PiIndex,
    Truncation,
    full_basis,
    full_points,
    full_shell,
    gamma_basis,
    gamma_points,
    is_valid_gamma,
    pi_basis,
    pi_points,
    sheet_of,
)


def brute_gamma(cap):
    """Enumeration oracle: filter the integer box by the Gamma invariants."""
    out = set()
    for n2 in range(cap + 1):
        for i2 in range(-cap, cap + 1):
            for j2 in range(-cap, cap + 1):
                p = GammaIndex(n2, i2, j2)
                if is_valid_gamma(p):
                    out.add(p)
    return out


def brute_full(cap):
    out = set()
    for r in range(cap + 1):
        for s in range(cap + 1):
            for t in range(-cap, cap + 1):
                if r + s + abs(t) <= cap:
                    out.add(FullIndex(r, s, t))
    return out


def test_gamma_points_small_caps():
    assert gamma_points(0) == [GammaIndex(0, 0, 0)]
    pts1 = gamma_points(1)
    assert len(pts1) == 5
    assert set(pts1[1:]) == {GammaIndex(1, i, j) for i in (-1, 1) for j in (-1, 1)}
    assert len(gamma_points(2)) == 14


def test_gamma_points_match_brute_force():
    for cap in (0, 1, 2, 3, 7):
        pts = gamma_points(cap)
        assert set(pts) == brute_gamma(cap)
        assert len(pts) == len(set(pts))
        assert pts == sorted(pts)  # (n2, i2, j2) ascending


def test_full_points_small_caps():
    assert full_points(0) == [FullIndex(0, 0, 0)]
    assert full_points(1) == [
        FullIndex(0, 0, 0),
        FullIndex(1, 0, 0),
        FullIndex(0, 1, 0),
        FullIndex(0, 0, -1),
        FullIndex(0, 0, 1),
    ]
    pts2 = full_points(2)
    assert len(pts2) == 14
    assert sum(1 for p in pts2 if full_shell(p) == 2) == 9


def test_full_points_match_brute_force():
    for cap in (0, 1, 2, 3, 7):
        pts = full_points(cap)
        assert set(pts) == brute_full(cap)
        assert len(pts) == len(set(pts))


def test_shell_count_identity():
    # Shell m holds (m+1)^2 points on either lattice.
    cap = 40
    gshells = {}
    for p in gamma_points(cap):
        gshells[p.n2] = gshells.get(p.n2, 0) + 1
    fshells = {}
    for p in full_points(cap):
        m = full_shell(p)
        fshells[m] = fshells.get(m, 0) + 1
    for m in range(cap + 1):
        assert gshells[m] == fshells[m] == (m + 1) ** 2


def test_pi_points_counts():
    for cap in (0, 1, 5):
        pts = pi_points(cap)
        assert len(pts) == (cap + 1) ** 2
        assert len(set(pts)) == len(pts)
        counts = {}
        for p in pts:
            m = p.s + abs(p.t)
            counts[m] = counts.get(m, 0) + 1
        for m in range(cap + 1):
            assert counts[m] == 2 * m + 1


def test_index_of_point_of_roundtrip():
    for basis in (gamma_basis(4), full_basis(4), pi_basis(4)):
        for k, p in enumerate(basis.points):
            assert basis.index_of(p) == k
            assert basis.point_of(k) == p


def test_rank_examples():
    assert gamma_basis(3).index_of(GammaIndex(0, 0, 0)) == 0
    assert full_basis(3).index_of(FullIndex(0, 0, 0)) == 0
    assert pi_basis(3).index_of(PiIndex(0, 0)) == 0
    assert full_basis(1).point_of(4) == FullIndex(0, 0, 1)


def test_index_outside_truncation_errors():
    with pytest.raises(ValueError, match="outside truncation"):
        gamma_basis(2).index_of(GammaIndex(3, 1, 1))
    with pytest.raises(ValueError, match="outside truncation"):
        full_basis(2).point_of(14)


def test_sheet_of_examples():
    assert sheet_of(GammaIndex(0, 0, 0)) == 0
    assert sheet_of(GammaIndex(2, 2, 2)) == 0  # rear/right face
    assert sheet_of(GammaIndex(2, 0, 0)) == 2  # interior point, one sheet in


def test_sheets_partition_gamma():
    cap = 12
    for p in gamma_points(cap):
        k2 = sheet_of(p)
        assert 0 <= k2 <= 2 * p.n2
        assert k2 % 2 == 0  # n2 and max(i2, j2) share parity


def test_truncation_validation():
    Truncation(0)
    with pytest.raises(ValueError):
        Truncation(-1)
    with pytest.raises(ValueError):
        gamma_points(-1)


@st.composite
def gamma_indices(draw, max_n2=40):
    n2 = draw(st.integers(min_value=0, max_value=max_n2))
    i2 = draw(st.integers(min_value=0, max_value=n2).map(lambda k: 2 * k - n2))
    j2 = draw(st.integers(min_value=0, max_value=n2).map(lambda k: 2 * k - n2))
    return GammaIndex(n2, i2, j2)


@settings(max_examples=200, deadline=None)
@given(gamma_indices())
def test_generated_gamma_points_valid(p):
    assert is_valid_gamma(p)
    assert 0 <= p.n2 - max(p.i2, p.j2) <= 2 * p.n2


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=0, max_value=12))
def test_basis_rank_bijection_property(cap):
    basis = full_basis(cap)
    assert len(basis) == sum((m + 1) ** 2 for m in range(cap + 1))
    ranks = [basis.index_of(p) for p in basis.points]
    assert ranks == list(range(len(basis)))
