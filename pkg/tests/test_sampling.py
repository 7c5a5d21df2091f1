import random
from fractions import Fraction as F

from hypothesis import given, strategies as st

from iivcg import catalog
from iivcg.corpus import corpus, random_setting
from iivcg.domains import Box, Polytope, contains
from iivcg.sampling import domain_points, lattice, random_points, sample_profiles, truncation_bound


def test_truncation_bound():
    # tradeoff: max cost 1/10, no finite bounds above 0
    assert truncation_bound(catalog.tradeoff_setting()) == 4 * (F(1, 10) + 1)
    assert truncation_bound(catalog.weighted_setting()) == 4 * (1 + 15 + 1)


def test_lattice_box_and_polytope():
    assert lattice(Box((0, 1), (2, 1)), 3) == [(0, 1), (1, 1), (2, 1)]
    tri = Polytope((((1, 1), 2),), 2)
    pts = lattice(tri, 3)
    assert sorted(pts) == [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (2, 0)]


def test_domain_points_include_extras_and_stay_inside():
    rng = random.Random(0)
    d = Box.orthant(2, 3)
    pts = domain_points(d, 3, 5, rng, F(10), extra=((F(3), F(19)),))
    assert (F(3), F(19)) in pts
    assert len(pts) == len(set(pts))
    assert all(contains(d, p) for p in pts)
    tri = Polytope((((1, 2), 4),), 2)
    for p in domain_points(tri, 4, 10, random.Random(1), F(10)):
        assert contains(tri, p)
    assert all(contains(tri, p) for p in random_points(tri, 20, random.Random(2)))


def test_sample_profiles_prefix_and_uniqueness():
    pts = (((F(0),), (F(1),)), ((F(0),), (F(2),)))
    first = [((F(1),), (F(2),))]
    out = sample_profiles(pts, 10, random.Random(0), first)
    assert out[0] == first[0]
    assert len(out) == len(set(out)) == 4


def test_corpus_deterministic_and_in_range():
    a, b = corpus(100), corpus(100)
    assert a == b
    for s in a:
        assert s.n <= 3 and s.q <= 4 and s.m <= 3
        assert all(d.bounded for d in s.domains)


@given(st.integers(min_value=0, max_value=10**6))
def test_random_setting_valid(seed):
    s = random_setting(random.Random(seed))
    assert 0 in s.costs and len(set(s.costs)) == s.q
    assert all(sum(row) == 1 for row in s.distribution)
