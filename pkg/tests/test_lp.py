import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from iivcg.lp import EQ, GE, LE, Constraint, LinearProgram, LPError, solve, use_kernel
from iivcg.lp import _kernel
from iivcg.lp.vertices import enumerate_vertices, solve_linear
from oracles import oracle_solve, random_bounded_lp, vertex_minimum


def test_minimize_single_lower_bound():
    res = solve(LinearProgram([1], [Constraint([1], GE, 3)]))
    assert res.status == "optimal"
    assert res.value == 3
    assert res.point == (3,)


def test_contradictory_bounds_infeasible():
    res = solve(LinearProgram([1], [Constraint([1], LE, 0), Constraint([1], GE, 1)]))
    assert res.status == "infeasible"


def test_cheapest_incentive_for_costly_action():
    # w2 >= w1 + 2/10, minimise w2; oracle: vertices of the 2-D region
    eps = F(1, 10)
    cons = [Constraint([F(1, 2), F(-1, 2)], LE, -eps)]
    res = solve(LinearProgram([0, 1], cons))
    oracle = vertex_minimum([0, 1], [[F(1, 2), F(-1, 2)], [-1, 0], [0, -1]], [-eps, 0, 0])
    assert (res.value, res.point) == oracle == (F(1, 5), (0, F(1, 5)))


def test_unbounded_detected():
    res = solve(LinearProgram([-1, 0], [Constraint([1, -1], LE, 1)]))
    assert res.status == "unbounded"


def test_free_variables_and_equalities():
    lp = LinearProgram(
        [1, 1],
        [Constraint([1, 1], GE, -3), Constraint([1, -1], EQ, 1)],
        bounds=((None, None), (None, None)),
    )
    res = solve(lp)
    assert res.value == -3
    assert res.point == (-1, -2)


def test_upper_only_and_boxed_bounds():
    lp = LinearProgram([1, -1], [Constraint([1, 1], LE, 10)], bounds=((None, 4), (2, 5)), sense="max")
    res = solve(lp)
    assert res.value == 2  # x1 = 4, x2 = 2
    assert res.point == (4, 2)


def test_redundant_equalities():
    lp = LinearProgram(
        [1, 2, 3],
        [
            Constraint([1, 1, 1], EQ, 1),
            Constraint([2, 2, 2], EQ, 2),
            Constraint([1, -1, 0], EQ, 0),
        ],
    )
    res = solve(lp)
    assert res.value == F(3, 2)
    assert res.point == (F(1, 2), F(1, 2), 0)


def test_malformed_inputs():
    with pytest.raises(LPError):
        LinearProgram([1, 2], [Constraint([1], LE, 1)])
    with pytest.raises(LPError):
        Constraint([1], "<", 1)
    with pytest.raises(LPError):
        LinearProgram([1], sense="minimise")
    with pytest.raises(LPError):
        LinearProgram([1], bounds=((0, 1), (0, 1)))


def test_decimal_floats_are_read_exactly():
    res = solve(LinearProgram([1], [Constraint([1], GE, 0.1)]))
    assert res.value == F(1, 10)


@pytest.mark.parametrize("seed", range(40))
def test_random_lps_match_vertex_enumeration(seed):
    rng = random.Random(1000 + seed)
    lp = random_bounded_lp(rng)
    res = solve(lp)
    expected = oracle_solve(lp)
    if expected is None:
        assert res.status == "infeasible"
    else:
        assert res.status == "optimal"
        assert res.value == expected
        assert lp.is_feasible_point(res.point)


@given(st.integers(min_value=0, max_value=10**6))
def test_random_lps_property(seed):
    lp = random_bounded_lp(random.Random(seed))
    res = solve(lp)
    expected = oracle_solve(lp)
    assert (res.value if res.optimal else None) == expected


def _dual_certificate_ok(lp: LinearProgram, res) -> bool:
    """Checks ``c = Σ y_i a_i + bound multipliers`` with complementary slackness."""
    y = res.duals
    sign = 1 if lp.sense == "min" else -1
    x = res.point
    for c, rel, yi in ((c, c.relation, yi) for c, yi in zip(lp.constraints, y)):
        lhs = sum(a * v for a, v in zip(c.coeffs, x))
        if yi != 0 and lhs != c.rhs:
            return False
        # minimisation: <= rows have y <= 0, >= rows have y >= 0
        if rel == LE and sign * yi > 0:
            return False
        if rel == GE and sign * yi < 0:
            return False
    for j, (lo, hi) in enumerate(lp.bounds):
        reduced = sign * (lp.objective[j] - sum(yi * c.coeffs[j] for c, yi in zip(lp.constraints, y)))
        if reduced > 0 and (lo is None or x[j] != lo):
            return False
        if reduced < 0 and (hi is None or x[j] != hi):
            return False
    return True


@pytest.mark.parametrize("seed", range(40))
def test_duals_certify_optimality(seed):
    rng = random.Random(5000 + seed)
    nv, nc = rng.randint(1, 4), rng.randint(1, 6)
    cons = [
        Constraint([F(rng.randint(-4, 6)) for _ in range(nv)], rng.choice((LE, GE)), F(rng.randint(-5, 12)))
        for _ in range(nc)
    ]
    cons.append(Constraint([1] * nv, LE, 20))
    lp = LinearProgram([F(rng.randint(-5, 5)) for _ in range(nv)], cons, sense=rng.choice(("min", "max")))
    res = solve(lp)
    if not res.optimal:
        return
    assert _dual_certificate_ok(lp, res)
    # strong duality: objective equals the dual objective plus active bound terms
    dual_value = sum(yi * c.rhs for c, yi in zip(lp.constraints, res.duals))
    bound_terms = sum(
        (lp.objective[j] - sum(yi * c.coeffs[j] for c, yi in zip(lp.constraints, res.duals))) * res.point[j]
        for j in range(nv)
    )
    assert dual_value + bound_terms == res.value


def test_kernels_agree():
    if "compiled" not in _kernel.KERNELS:
        pytest.skip("compiled kernel not built")
    rng = random.Random(7)
    lps = [random_bounded_lp(rng) for _ in range(60)]
    try:
        use_kernel("python")
        slow = [solve(lp) for lp in lps]
        use_kernel("compiled")
        fast = [solve(lp) for lp in lps]
    finally:
        use_kernel("compiled")
    assert slow == fast


def test_unknown_kernel_rejected():
    with pytest.raises(ValueError):
        use_kernel("gpu")


def test_solve_linear_and_vertices():
    assert solve_linear([[2, 1], [1, 3]], [3, 5]) == [F(4, 5), F(7, 5)]
    assert solve_linear([[1, 2], [2, 4]], [1, 2]) is None
    square = enumerate_vertices([[1, 0], [0, 1], [-1, 0], [0, -1]], [1, 1, 0, 0])
    assert sorted(square) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_kernels_agree_beyond_64_bits():
    if "compiled" not in _kernel.KERNELS:
        pytest.skip("compiled kernel not built")
    rng = random.Random(11)
    lps = []
    for _ in range(20):
        nv = rng.randint(2, 5)
        big = [F(rng.randint(1, 10**12), rng.randint(1, 10**9)) for _ in range(nv * nv)]
        cons = [Constraint(big[i * nv:(i + 1) * nv], LE, rng.randint(1, 10**15)) for i in range(nv)]
        lps.append(LinearProgram([rng.randint(1, 10**10) for _ in range(nv)], cons, sense="max"))
    try:
        use_kernel("python")
        slow = [solve(lp) for lp in lps]
        use_kernel("compiled")
        fast = [solve(lp) for lp in lps]
    finally:
        use_kernel("compiled")
    assert slow == fast
    assert all(r.optimal for r in fast)
