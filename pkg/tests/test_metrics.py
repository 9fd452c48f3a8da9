import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from agglolab import (
    Cluster,
    Instance,
    L1,
    L2,
    LINF,
    Norm,
    Problem,
    cluster_cost,
    diameter,
    discrete_radius,
    distance,
    radius,
)
from agglolab.forge import gen_line_1d, gen_hypercube_l1
from agglolab.harness import grid_search_enclosing_radius
from agglolab.metrics import powered_distance, powered_matrix, unpower


def test_norm_validation():
    assert Norm(1.5).p == 1.5
    assert LINF.is_infinity
    with pytest.raises(ValueError):
        Norm(0.5)
    with pytest.raises(ValueError):
        Norm(float("nan"))


def test_norm_labels():
    assert L1.label == "l1"
    assert L2.label == "l2"
    assert LINF.label == "linf"
    assert Norm(2.5).label == "lp2.5"


def test_distance_identity_any_norm():
    x = (3.25, -1.5, 0.0)
    for norm in (L1, L2, LINF, Norm(3.0)):
        assert distance(x, x, norm) == 0.0


def test_distance_linf_diamond_pair():
    # the outer point sits at max-norm distance 1 from its inner partner
    assert distance((0.0, 1.0), (-1.0, 2.0), LINF) == 1.0


def test_distance_l1_tagged_unit_vectors():
    # distinct unit-vector blocks contribute 2, tags contribute their
    # Hamming distance
    case = gen_hypercube_l1(4)
    pts = case.instance.points
    # point id = i*4 + b for group i and tag b
    assert distance(pts[0 * 4 + 0], pts[1 * 4 + 3], L1) == 2.0 + 2.0
    assert distance(pts[0 * 4 + 1], pts[2 * 4 + 1], L1) == 2.0
    assert distance(pts[0 * 4 + 0], pts[0 * 4 + 2], L1) == 1.0


def test_distance_dimension_mismatch():
    with pytest.raises(ValueError):
        distance((0.0, 1.0), (1.0,), L2)


def test_instance_validation():
    with pytest.raises(ValueError):
        Instance(name="bad", dim=2, norm=L2, points=((0.0,),))
    with pytest.raises(ValueError):
        Instance(name="bad", dim=1, norm=L2, points=())
    with pytest.raises(ValueError):
        Instance(name="bad", dim=1, norm=L2, points=((math.inf,),))


def test_cluster_sorts_members():
    c = Cluster((3, 1, 2))
    assert c.members == (1, 2, 3)
    assert c.min_member == 1
    with pytest.raises(ValueError):
        Cluster(())


def test_diameter_singleton_zero():
    inst = Instance.from_points("p", [(0.0, 0.0)], L2)
    assert diameter((0,), inst) == 0.0


def test_diameter_of_line_groups():
    # dense run spans 2^n - 1, full group spans 2^(n+1) - 1
    case = gen_line_1d(3)
    inst = case.instance
    group = 2 ** 3 + 2
    dense = tuple(range(1, 1 + 2 ** 3))
    assert diameter(dense, inst) == 7.0
    assert diameter(tuple(range(group)), inst) == 15.0


def test_discrete_radius_singleton_and_pair():
    inst = Instance.from_points("pq", [(0.0, 0.0), (3.0, 4.0)], L2)
    assert discrete_radius((0,), inst) == (0.0, 0)
    val, center = discrete_radius((0, 1), inst)
    assert val == 5.0
    assert center == 0  # smallest id on ties


def test_discrete_radius_final_hypercube_cluster_equals_diameter():
    case = gen_hypercube_l1(8)
    inst = case.instance
    group = tuple(range(8))  # all tags of unit-vector group 0
    val, _ = discrete_radius(group, inst)
    assert val == 3.0 == diameter(group, inst)


def test_radius_two_points_l2():
    inst = Instance.from_points("pq", [(0.0, 0.0), (3.0, 4.0)], L2)
    ball = radius((0, 1), inst)
    assert ball.radius == 2.5
    assert ball.center == (1.5, 2.0)
    assert not ball.approximate


def test_radius_unit_square_linf():
    inst = Instance.from_points(
        "sq", [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)], LINF
    )
    ball = radius(range(4), inst)
    assert ball.radius == 0.5
    assert not ball.approximate


def test_radius_equilateral_triangle():
    # value frozen from the iteratively refined grid search (1/sqrt(3))
    tri = [(0.0, 0.0), (1.0, 0.0), (0.5, math.sqrt(3.0) / 2.0)]
    inst = Instance.from_points("tri", tri, L2)
    ball = radius(range(3), inst)
    assert ball.radius == pytest.approx(0.5773502691896258, abs=1e-7)


def test_radius_general_p_flagged_approximate():
    inst = Instance.from_points(
        "l1ball", [(0.0, 0.0), (2.0, 0.0), (1.0, 1.0), (1.0, -1.0)], L1
    )
    ball = radius(range(4), inst)
    assert ball.approximate
    # center (1, 0) encloses everything at l1 distance 1
    assert ball.radius == pytest.approx(1.0, abs=1e-5)


def test_radius_solver_failure_carries_best_ball():
    from agglolab.metrics import SolverError, _iterative_ball

    pts = [(0.0, 0.0), (2.0, 0.0), (1.0, 1.0)]
    with pytest.raises(SolverError) as err:
        _iterative_ball(pts, L1, max_iter=0)
    assert err.value.best is not None
    assert err.value.best.radius > 0.0


def test_radius_one_dimensional_is_midrange_for_any_norm():
    inst = Instance.from_points("line", [(0.0,), (1.0,), (10.0,)], Norm(3.0))
    ball = radius(range(3), inst)
    assert ball.radius == 5.0
    assert ball.center == (5.0,)
    assert not ball.approximate


def test_cluster_cost_dispatch():
    inst = Instance.from_points("pq", [(0.0, 0.0), (3.0, 4.0)], L2)
    singleton = Instance.from_points("s", [(7.0,)], L2)
    assert cluster_cost(Problem.DIAMETER, (0,), singleton) == 0.0
    assert cluster_cost(Problem.DISCRETE_RADIUS, (0, 1), inst) == 5.0
    assert cluster_cost(Problem.RADIUS, (0, 1), inst) == 2.5


def test_powered_matrix_matches_scalar_path():
    inst = Instance.from_points(
        "m", [(0.25, 1.5, -2.0), (1.0, 0.0, 4.0), (-3.5, 2.25, 0.5)], L2
    )
    mat = powered_matrix(inst)
    for i in range(3):
        for j in range(3):
            assert mat[i, j] == powered_distance(inst.points[i], inst.points[j], L2)


# ---------------------------------------------------------------------------
# property tests

_int_coords = st.integers(min_value=-50, max_value=50)
_float_coords = st.floats(min_value=-100.0, max_value=100.0,
                          allow_nan=False, allow_infinity=False)


def _point(coords, dim):
    return st.tuples(*([coords] * dim))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3).flatmap(lambda d: st.tuples(
    _point(_int_coords, d), _point(_int_coords, d), _point(_int_coords, d))),
    st.sampled_from([L1, LINF]))
def test_metric_axioms_exact_on_integers(triple, norm):
    a, b, c = [tuple(float(x) for x in p) for p in triple]
    assert distance(a, b, norm) == distance(b, a, norm)
    assert distance(a, b, norm) >= 0.0
    assert (distance(a, b, norm) == 0.0) == (a == b)
    assert distance(a, c, norm) <= distance(a, b, norm) + distance(b, c, norm)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3).flatmap(lambda d: st.tuples(
    _point(_float_coords, d), _point(_float_coords, d), _point(_float_coords, d))),
    st.sampled_from([L2, Norm(3.0)]))
def test_metric_axioms_with_tolerance(triple, norm):
    a, b, c = triple
    assert distance(a, b, norm) == distance(b, a, norm)
    assert distance(a, c, norm) <= distance(a, b, norm) + distance(b, c, norm) + 1e-12


_small_cloud = st.integers(2, 3).flatmap(
    lambda d: st.lists(_point(_float_coords, d), min_size=2, max_size=8)
)


@settings(max_examples=40, deadline=None)
@given(_small_cloud, st.sampled_from([L2, LINF]))
def test_cost_chain_radius_drad_diameter(points, norm):
    inst = Instance.from_points("chain", points, norm)
    ids = range(len(points))
    rad = radius(ids, inst).radius
    drad, _ = discrete_radius(ids, inst)
    diam = diameter(ids, inst)
    tol = 1e-9 * max(diam, 1.0)
    assert rad <= drad + tol
    assert drad <= diam + tol
    assert diam <= 2.0 * rad + tol


@settings(max_examples=40, deadline=None)
@given(_small_cloud, _small_cloud.filter(lambda pts: len(pts[0]) == 2),
       st.sampled_from([L2, L1, LINF]))
def test_union_diameter_decomposition(pts_a, pts_b, norm):
    # diam(A u B) = max(diam A, diam B, largest cross-pair distance), exactly
    dim = len(pts_a[0])
    pts_b = [p[:dim] + (0.0,) * (dim - len(p)) for p in pts_b]
    all_pts = list(pts_a) + list(pts_b)
    inst = Instance.from_points("u", all_pts, norm)
    na = len(pts_a)
    ids_a = tuple(range(na))
    ids_b = tuple(range(na, len(all_pts)))
    cross = max(distance(a, b, norm) for a in pts_a for b in pts_b)
    expected = max(diameter(ids_a, inst), diameter(ids_b, inst), cross)
    assert diameter(ids_a + ids_b, inst) == expected


@settings(max_examples=40, deadline=None)
@given(_small_cloud, st.sampled_from([L2, LINF]))
def test_union_monotonicity(points, norm):
    # diameter and enclosing radius never shrink under union; the
    # member-centered radius can shrink (a new point may be a better
    # center), but never below half the old value
    inst = Instance.from_points("mono", points, norm)
    n = len(points)
    half = max(1, n // 2)
    part, whole = tuple(range(half)), tuple(range(n))
    assert diameter(whole, inst) >= diameter(part, inst)
    assert radius(whole, inst).radius >= radius(part, inst).radius - 1e-12
    assert discrete_radius(whole, inst)[0] >= discrete_radius(part, inst)[0] / 2.0 - 1e-12


@settings(max_examples=25, deadline=None)
@given(_small_cloud)
def test_enclosing_ball_membership_and_grid_agreement(points):
    inst = Instance.from_points("ball", points, L2)
    ball = radius(range(len(points)), inst)
    for p in points:
        assert distance(p, ball.center, L2) <= ball.radius + 1e-9
    grid = grid_search_enclosing_radius(points, L2)
    assert abs(ball.radius - grid) <= 1e-6


def test_cached_cluster_values_are_exact_copies():
    rng = np.random.default_rng(3)
    pts = rng.uniform(0.0, 1.0, size=(12, 2))
    inst = Instance.from_points("cache", pts.tolist(), L2)
    from agglolab import agglomerate

    hist = agglomerate(inst, Problem.DIAMETER)
    for c in hist.clusters_at_k(4):
        assert c.cached_diameter == diameter(c, inst)
    hist = agglomerate(inst, Problem.DISCRETE_RADIUS)
    for c in hist.clusters_at_k(4):
        assert c.cached_drad == discrete_radius(c, inst)[0]


def test_unpower_round_trip():
    for norm in (L1, L2, LINF, Norm(3.0)):
        v = powered_distance((0.0, 2.0), (1.5, -1.0), norm)
        assert unpower(v, norm) == pytest.approx(distance((0.0, 2.0), (1.5, -1.0), norm), rel=1e-15)
