import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from imspec.config import RunConfig
from imspec.errors import DegenerateInput
from imspec.poly import ComplexPoly
from imspec.roots import ON_CIRCLE, OUTSIDE, circle_partition, find_roots


def test_factored_circle_pair():
    rs = find_roots(ComplexPoly((-1, 0, 1)))  # z^2 - 1
    locs = sorted((round(r.location.real, 9), r.multiplicity, r.region) for r in rs)
    assert locs == [(-1.0, 1, ON_CIRCLE), (1.0, 1, ON_CIRCLE)]


def test_double_root_outside():
    # (sqrt(3)/2 z + 1)^2 = (3/4) z^2 + sqrt(3) z + 1
    rs = find_roots(ComplexPoly((1.0, math.sqrt(3.0), 0.75)))
    assert len(rs) == 1
    root = rs.roots[0]
    assert root.multiplicity == 2
    assert root.region == OUTSIDE
    assert abs(root.location - (-2.0 / math.sqrt(3.0))) < 1e-9


def test_quintic_derivative_roots():
    # -(z^2 - 1)(z^2 + 2)/2
    p = ComplexPoly((-1, 0, 1)) * ComplexPoly((2, 0, 1))
    rs = find_roots(p.scale(-0.5))
    on = [r for r in rs if r.region == ON_CIRCLE]
    outside = [r for r in rs if r.region == OUTSIDE]
    assert sorted(round(r.location.real, 9) for r in on) == [-1.0, 1.0]
    assert sorted(round(r.location.imag, 6) for r in outside) == [-1.414214, 1.414214]


def test_degree_zero_rejected():
    with pytest.raises(DegenerateInput):
        find_roots(ComplexPoly((2.0,)))


def test_partition_and_snapping():
    cfg = RunConfig(circle_tol=1e-9)
    rs = find_roots(ComplexPoly.from_roots([1.0 + 1e-12, 0.5]), cfg)
    inside, on, outside = circle_partition(rs)
    assert len(on) == 1 and abs(on.roots[0].location) == 1.0
    assert len(inside) == 1 and abs(inside.roots[0].location - 0.5) < 1e-12
    assert len(outside) == 0


def test_perturbed_root_classified_by_tolerance():
    cfg = RunConfig(circle_tol=1e-9)
    rs = find_roots(ComplexPoly.from_roots([1.0 + 1e-12]), cfg)
    assert rs.roots[0].region == ON_CIRCLE
    loose = find_roots(ComplexPoly.from_roots([1.0 + 1e-6]), cfg)
    assert loose.roots[0].region == OUTSIDE


def test_output_sorted_by_modulus_then_angle():
    rs = find_roots(ComplexPoly.from_roots([2.0, -0.5, 1.0j]))
    mods = [abs(r.location) for r in rs]
    assert mods == sorted(mods)


grid_roots = st.lists(
    st.sampled_from([0.5, -0.25 + 0.5j, 1.0, -1.0, 1.5j, 2.0 - 1.0j, -2.0, 0.1 - 0.9j]),
    min_size=1, max_size=6, unique=True)


@given(grid_roots, st.sampled_from([1.0, -2.0, 0.5j]))
@settings(max_examples=50, deadline=None)
def test_reconstruction_from_roots(roots, lead):
    p = ComplexPoly.from_roots(roots, leading=lead)
    rs = find_roots(p)
    rebuilt = ComplexPoly.from_roots(rs.locations(), leading=lead)
    scale = max(abs(c) for c in p.coeffs)
    for i in range(len(p.coeffs)):
        assert abs(rebuilt.coefficient(i) - p.coefficient(i)) <= 1e-8 * scale


@given(st.permutations([0.5, -1.0, 2.0j, 1.0]))
@settings(max_examples=20, deadline=None)
def test_permutation_invariance(roots):
    rs = find_roots(ComplexPoly.from_roots(list(roots)))
    canonical = find_roots(ComplexPoly.from_roots([0.5, -1.0, 2.0j, 1.0]))
    got = [(round(abs(r.location), 9), r.multiplicity) for r in rs]
    want = [(round(abs(r.location), 9), r.multiplicity) for r in canonical]
    assert got == want


def test_multiplicity_sum_matches_degree():
    p = ComplexPoly.from_roots([1.0, 1.0, 1.0, -1.0, 2.0])
    rs = find_roots(p)
    assert rs.total_multiplicity == 5
    triple = [r for r in rs if r.multiplicity == 3]
    assert len(triple) == 1 and abs(triple[0].location - 1.0) < 1e-10
