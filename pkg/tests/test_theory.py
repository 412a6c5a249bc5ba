import math

import mpmath as mp
import numpy as np
import pytest

from jigsawsim import (Seed, block_partition, cycle_puzzle, erdos_renyi,
                       find_cut_certificate, graph_from_edges,
                       lower_bound_pc_ring, not_x_good_bound,
                       ring_lower_objective, theta, theta_sum_error_bound,
                       upper_bound_pc)

from helpers import (all_labeled_trees, check_block_invariants,
                     complete_graph, cycle_graph, path_graph,
                     random_connected_graph)

PI2_6 = math.pi ** 2 / 6


def quad_theta(x):
    """Independent oracle: tanh-sinh quadrature of the defining integral."""
    mp.mp.dps = 30
    val = mp.quad(lambda t: -mp.log(-mp.expm1(-t)), [0, x])
    return float(val)


def test_theta_matches_quadrature():
    for x in (0.1, 0.5, 1.0, 2.0, 10.0):
        assert abs(theta(x) - quad_theta(x)) < 1e-9, x


def test_theta_tiny_arguments():
    # the closed-form branch for very small x must track the integral
    for x in (1e-12, 1e-9, 1e-7):
        assert abs(theta(x) - quad_theta(x)) <= 1e-15 + 1e-9 * theta(x), x


def test_theta_branch_continuity():
    lo, hi = theta(1e-6 * 0.999), theta(1e-6 * 1.001)
    assert 0 < lo < hi
    assert hi - lo < 1e-7


def test_theta_limits():
    assert theta(0.0) == 0.0
    assert abs(theta(float("inf")) - PI2_6) < 1e-12
    assert abs(theta(50.0) - PI2_6) < 1e-12


def test_theta_monotone_bounded():
    xs = np.geomspace(1e-4, 30, 60)
    vals = [theta(float(x)) for x in xs]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert all(0 < v < PI2_6 for v in vals)


def test_theta_domain():
    with pytest.raises(ValueError):
        theta(-0.1)
    with pytest.raises(ValueError):
        theta(float("nan"))


def test_error_bound_values():
    mp.mp.dps = 40
    for m, eps in ((1, 1.0), (100, 0.1), (10_000, 0.01), (7, 0.35)):
        lhs, rhs, holds = theta_sum_error_bound(m, eps)
        want_lhs = abs(float(mp.nsum(lambda i: mp.log(1 - mp.e ** (-i * eps)),
                                     [1, m]) + mp.pi ** 2 / (6 * eps)))
        want_rhs = float(0.5 * mp.log(2 * mp.e ** 2 / eps)
                         + mp.pi ** 2 / (6 * eps * mp.e ** (m * eps)))
        assert abs(lhs - want_lhs) < 1e-9 * max(1.0, want_lhs)
        assert abs(rhs - want_rhs) < 1e-9 * max(1.0, want_rhs)
        assert holds


def test_error_bound_validation():
    with pytest.raises(ValueError):
        theta_sum_error_bound(0, 0.1)
    with pytest.raises(ValueError):
        theta_sum_error_bound(5, 0.0)


def test_pc_bounds():
    assert abs(upper_bound_pc(1000) - 0.23813) < 1e-5
    assert abs(lower_bound_pc_ring(1000) - 0.005362) < 1e-6
    assert abs(upper_bound_pc(404) - math.pi ** 2 / 36) < 2e-3
    assert upper_bound_pc(10_000) < upper_bound_pc(1000)
    for n in (10, 1000, 10 ** 6):
        ratio = upper_bound_pc(n) / lower_bound_pc_ring(n)
        assert abs(ratio - 27 * PI2_6) < 1e-9
    with pytest.raises(ValueError):
        upper_bound_pc(1)
    with pytest.raises(ValueError):
        lower_bound_pc_ring(1)


def test_objective_witness_beats_target():
    assert ring_lower_objective(0.07) > 1 / 27


def test_objective_grid_max():
    grid = np.arange(1, 334) / 1000.0
    vals = [ring_lower_objective(float(t)) for t in grid if t < 1 / 3]
    assert max(vals) > 1 / 27


def test_objective_vanishes_at_domain_ends():
    # the bracket is +2 log(sqrt(1+1/t)-1) + O(t) with the log blowing up
    # only like -log t, so t/2 times it still vanishes as t -> 0+; at the
    # right end the bracket itself hits zero
    assert 0 < ring_lower_objective(1e-6) < 1e-4
    assert 0 < ring_lower_objective(0.333) < 1e-3
    assert ring_lower_objective(1e-6) < ring_lower_objective(0.07)


def test_objective_matches_highprec():
    mp.mp.dps = 40
    for t in (0.01, 0.07, 0.2, 0.32):
        s = mp.sqrt(1 + 1 / mp.mpf(t))
        want = float((t / 2) * (2 * mp.log(s - 1) + 7 * t - 2 * t * s - 1))
        assert abs(ring_lower_objective(t) - want) < 1e-12


def test_objective_domain():
    for bad in (0.0, -0.1, 1 / 3, 0.4):
        with pytest.raises(ValueError):
            ring_lower_objective(bad)


def test_not_x_good_bound_positive():
    for l in (0.5, 1.0, 2.0):
        for t in (0.01, 0.1, 1 / (l + 2) * 0.9):
            for p in (0.001, 0.01, 0.2):
                assert not_x_good_bound(l, t, p) > 0


def test_not_x_good_bound_l1_matches_objective():
    # at l=1 the exponent collapses to ring_lower_objective(t)/p
    for t in (0.02, 0.07, 0.2):
        for p in (0.005, 0.05):
            want = math.exp(-ring_lower_objective(t) / p)
            assert abs(not_x_good_bound(1.0, t, p) - want) < 1e-12 * want


def test_not_x_good_bound_decreasing_in_x():
    p = 1 / (27 * math.log(10_000))
    vals = [not_x_good_bound(1.0, p * x, p) for x in range(4, 18, 2)]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_not_x_good_bound_validation():
    with pytest.raises(ValueError):
        not_x_good_bound(0.0, 0.1, 0.01)
    with pytest.raises(ValueError):
        not_x_good_bound(1.0, 0.34, 0.01)
    with pytest.raises(ValueError):
        not_x_good_bound(1.0, 0.1, 0.0)
    with pytest.raises(ValueError):
        not_x_good_bound(1.0, 0.1, 1.0)


def test_not_x_good_bound_monte_carlo():
    # empirical frequency of "interval is not x-good" stays below the bound
    p = 1 / (27 * math.log(10_000))
    x = int(0.07 / p)
    t = p * x
    bound = not_x_good_bound(1.0, t, p)
    window = 3 * x                      # interval plus x on both sides
    interval = range(x, 2 * x)
    pairs = [(a, b) for a in range(window) for b in range(a + 1, window)]
    touch = np.zeros((len(pairs), x), dtype=np.float64)
    for k, (a, b) in enumerate(pairs):
        if a in interval:
            touch[k, a - x] = 1.0
        if b in interval:
            touch[k, b - x] = 1.0
    rng = np.random.default_rng(12345)
    bad = 0
    reps = 10_000
    chunk = 2000
    for start in range(0, reps, chunk):
        coins = rng.random((chunk, len(pairs))) < p
        people_deg = coins.astype(np.float64) @ touch
        bad += int(((people_deg > 0).all(axis=1)).sum())
    assert bad / reps <= bound


def test_block_partition_small_sets():
    g = path_graph(6)
    assert block_partition(g, 3).blocks != []
    check_block_invariants(g, block_partition(g, 3), 3)
    # below the size cap the whole vertex set is one block
    assert block_partition(g, 4).blocks == [list(range(6))]
    assert block_partition(path_graph(1), 1).blocks == [[0]]


def test_block_partition_boundary_size():
    # |V| exactly 2m still needs two blocks to keep the last one small
    g = path_graph(6)
    bp = block_partition(g, 3)
    assert len(bp.blocks) >= 2
    check_block_invariants(g, bp, 3)


def test_block_partition_cycle():
    g = cycle_graph(10)
    bp = block_partition(g, 3)
    assert len(bp.blocks) >= 2
    check_block_invariants(g, bp, 3)


def test_block_partition_validation():
    with pytest.raises(ValueError):
        block_partition(path_graph(4), 0)
    with pytest.raises(ValueError):
        block_partition(graph_from_edges(4, [(0, 1), (2, 3)]), 2)


def test_block_partition_exhaustive_small_trees():
    for n in range(1, 7):
        for edges in all_labeled_trees(n):
            g = graph_from_edges(n, edges)
            for m in (1, 2, 3, 5):
                check_block_invariants(g, block_partition(g, m), m)


def test_block_partition_random_graphs():
    for s in range(25):
        n = 20 + 7 * s
        g = random_connected_graph(n, seed=s)
        for m in (1, 2, 5, 10):
            check_block_invariants(g, block_partition(g, m), m)


def test_certificate_edgeless():
    cert = find_cut_certificate(graph_from_edges(16, []), 16, 4)
    assert cert is not None
    assert cert.boundaries[0] == 0 and cert.boundaries[-1] == 16
    lens = [b - a for a, b in zip(cert.boundaries, cert.boundaries[1:])]
    assert all(ln in (3, 4) for ln in lens)
    assert len(cert.witnesses) == len(lens)
    for (a, b), w in zip(zip(cert.boundaries, cert.boundaries[1:]),
                         cert.witnesses):
        assert a <= w < b


def test_certificate_complete_people():
    assert find_cut_certificate(complete_graph(16), 16, 4) is None


def test_certificate_witnesses_are_x_good():
    # recheck the witness property by scanning raw adjacency
    people = erdos_renyi(100, 0.004, Seed(31))
    cert = find_cut_certificate(people, 100, 10)
    if cert is None:
        pytest.skip("unlucky draw; covered by the bulk soundness test")
    x = cert.x
    for (a, b), w in zip(zip(cert.boundaries, cert.boundaries[1:]),
                         cert.witnesses):
        shielded = {(a - x + i) % 100 for i in range((b - a) + 2 * x)}
        assert not any(nb in shielded for nb in people.neighbors(w).tolist())


def test_certificate_validation():
    people = graph_from_edges(16, [])
    with pytest.raises(ValueError, match="x"):
        find_cut_certificate(people, 16, 1)
    with pytest.raises(ValueError):
        find_cut_certificate(people, 16, 5)   # n < x^2
    with pytest.raises(ValueError):
        find_cut_certificate(people, 20, 4)   # people.n mismatch


def test_certificate_soundness_sample():
    from jigsawsim import JigsawInstance, run
    puzzle = cycle_puzzle(100)
    found = 0
    for s in range(120):
        people = erdos_renyi(100, 0.005, Seed(1000 + s))
        cert = find_cut_certificate(people, 100, 10)
        if cert is None:
            continue
        found += 1
        assert not run(JigsawInstance(people, puzzle)).solved
    assert found > 30
