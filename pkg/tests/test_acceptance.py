"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -s` to see the per-criterion lines.
"""

import itertools
import time

import numpy as np
import pytest

from graphmatch.cli import main
from graphmatch.discretize import Assignment, brute_force_match, hungarian
from graphmatch.features import affinity, build_graph
from graphmatch.io import serialize_features
from graphmatch.metrics import discrepancy, matching_error
from graphmatch.pipeline import RunConfig, run_baseline, run_gsspf
from graphmatch.solver import gradient, gsspf, objective, softmax_sinkhorn

from conftest import feature_set_from_arrays, make_feature_set, permuted_copy


def check(num, description, ok):
    print(f"{'PASS' if ok else 'FAIL'} criterion {num}: {description}")
    assert ok, f"criterion {num} failed: {description}"


def test_criterion_1_sinkhorn_projection():
    rng = np.random.default_rng(0)
    ok = True
    for trial in range(200):
        m = rng.integers(2, 51)
        n = rng.uniform(-1, 1, size=(m, m))
        beta = (1e-6, 1.0, 100.0)[trial % 3]
        t0 = time.perf_counter()
        out = softmax_sinkhorn(n, beta)
        elapsed = time.perf_counter() - t0
        dev = max(np.abs(out.sum(axis=0) - 1).max(), np.abs(out.sum(axis=1) - 1).max())
        if dev > 1e-6 or out.min() < 0 or elapsed >= 0.1:
            ok = False
            break
    check(1, "Sinkhorn projection marginals within 1e-6, nonnegative, <100 ms each", ok)


def test_criterion_2_hungarian_exactness():
    rng = np.random.default_rng(1)
    t0 = time.perf_counter()
    ok = True
    for n in range(2, 8):
        perms = list(itertools.permutations(range(n)))
        for _ in range(100):
            scores = rng.normal(size=(n, n))
            got = sum(scores[i, j] for i, j in hungarian(scores).pairs)
            best = max(sum(scores[i, p[i]] for i in range(n)) for p in perms)
            if got != best:
                ok = False
    elapsed = time.perf_counter() - t0
    check(2, f"Hungarian equals exhaustive maximum exactly, suite {elapsed:.2f}s < 5s",
          ok and elapsed < 5.0)


def test_criterion_3_gradient_finite_differences():
    rng = np.random.default_rng(2)
    h = 1e-5
    ok = True
    for _ in range(20):
        a1 = build_graph(make_feature_set(rng, 5, scale=1.0)).adjacency
        a2 = build_graph(make_feature_set(rng, 5, scale=1.0)).adjacency
        k = rng.normal(size=(5, 5))
        m = rng.uniform(0, 1, size=(5, 5))
        grad = gradient(m, a1, a2, k, 1.0)
        for i in range(5):
            for j in range(5):
                up, down = m.copy(), m.copy()
                up[i, j] += h
                down[i, j] -= h
                fd = (objective(up, a1, a2, k, 1.0) - objective(down, a1, a2, k, 1.0)) / (2 * h)
                denom = max(abs(grad[i, j]), 1e-12)
                if abs(fd - grad[i, j]) / denom > 1e-5:
                    ok = False
    check(3, "gradient matches central finite differences within rel 1e-5", ok)


def test_criterion_4_objective_discrepancy_reverse_ranking():
    ok = True
    for seed in range(50):
        rng = np.random.default_rng(300 + seed)
        n = int(rng.integers(2, 6))
        fs1 = make_feature_set(rng, n)
        fs2 = make_feature_set(rng, n)
        g1, g2 = build_graph(fs1), build_graph(fs2)
        k = affinity(g1, g2)
        rows = []
        for perm in itertools.permutations(range(n)):
            a = Assignment(pairs=tuple(enumerate(perm)), n1=n, n2=n)
            rows.append((discrepancy(g1, g2, a, 1.0),
                         objective(a.matrix(), g1.adjacency, g2.adjacency, k, 1.0)))
        by_disc = sorted(range(len(rows)), key=lambda i: rows[i][0])
        by_obj = sorted(range(len(rows)), key=lambda i: -rows[i][1])
        if by_disc != by_obj:
            ok = False
    check(4, "permutation ranking by objective exactly reverses ranking by discrepancy", ok)


def test_criterion_5_isomorphic_recovery():
    hits = 0
    slow = False
    for seed in range(20):
        rng = np.random.default_rng(seed)
        fs1 = make_feature_set(rng, 10, scale=512.0)
        perm = rng.permutation(10)
        fs2 = permuted_copy(fs1, perm)
        g1, g2 = build_graph(fs1), build_graph(fs2)
        t0 = time.perf_counter()
        assignment, _ = gsspf(g1.adjacency, g2.adjacency, affinity(g1, g2))
        if time.perf_counter() - t0 >= 1.0:
            slow = True
        expected = tuple(sorted((int(perm[j]), int(j)) for j in range(10)))
        if assignment.pairs == expected and \
                matching_error(g1, g2, assignment).total_error < 1e-6:
            hits += 1
    check(5, f"isomorphic recovery with default config: {hits}/20 exact (need 18), each <1s",
          hits >= 18 and not slow)


def test_criterion_6_oracle_near_optimality():
    hits = 0
    for seed in range(20):
        rng = np.random.default_rng(100 + seed)
        fs1 = make_feature_set(rng, 6, scale=1000.0)
        fs2 = make_feature_set(rng, 6, scale=1000.0, image_id="b")
        g1, g2 = build_graph(fs1), build_graph(fs2)
        k = affinity(g1, g2)
        assignment, trace = gsspf(g1.adjacency, g2.adjacency, k)
        achieved = objective(assignment.matrix(), g1.adjacency, g2.adjacency, k, 1.0)
        _, optimum = brute_force_match(g1.adjacency, g2.adjacency, k, 1.0)
        if achieved >= 0.95 * optimum:
            hits += 1
        else:
            print(f"  criterion 6 miss at seed {seed}: achieved {achieved:.6g} "
                  f"vs optimum {optimum:.6g}, stages={trace.outer_stages}, "
                  f"inner={trace.inner_iterations}")
    check(6, f"objective within 5% of brute-force optimum: {hits}/20 (need 16)", hits >= 16)


def test_criterion_7_rigid_motion_invariance():
    rng = np.random.default_rng(4)
    fs1 = make_feature_set(rng, 20)
    theta = rng.uniform(0, 2 * np.pi)
    rot = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
    fs2 = feature_set_from_arrays(fs1.coords() @ rot.T + [123.0, -45.0], fs1.descriptors)
    g1, g2 = build_graph(fs1), build_graph(fs2)
    entrywise = np.abs(g1.adjacency - g2.adjacency).max()
    identity = Assignment(pairs=tuple((i, i) for i in range(20)), n1=20, n2=20)
    err = matching_error(g1, g2, identity).total_error
    check(7, f"rotated+translated adjacency equal within 1e-9 (max dev {entrywise:.2e}), "
             f"self-match error {err:.2e} < 1e-6",
          entrywise < 1e-9 and err < 1e-6)


def _noisy_cluster_fixture(seed, n=50, p=16):
    rng = np.random.default_rng(200 + seed)
    pts = rng.uniform(0, 512, size=(n, 2))
    desc = rng.normal(size=(n, p))
    desc /= np.linalg.norm(desc, axis=1, keepdims=True)
    for c in range(3):  # 3 near-duplicate clusters of 5 descriptors
        base = desc[c * 5]
        for member in range(1, 5):
            desc[c * 5 + member] = base + 0.005 * rng.normal(size=p)
    desc /= np.linalg.norm(desc, axis=1, keepdims=True)
    perm = rng.permutation(n)
    noise = rng.normal(size=(n, p))
    noise *= 0.05 / np.linalg.norm(noise, axis=1, keepdims=True)  # 5% of unit norm
    f1 = feature_set_from_arrays(pts, desc, "orig")
    f2 = feature_set_from_arrays(pts[perm], desc[perm] + noise, "noisy")
    return f1.normalized(), f2.normalized()


def test_criterion_8_beats_baseline_on_ambiguous_features():
    t0 = time.perf_counter()
    wins = 0
    cfg = RunConfig()
    for seed in range(10):
        f1, f2 = _noisy_cluster_fixture(seed)
        solver_rep = run_gsspf(f1, f2, cfg)
        base_rep = run_baseline(f1, f2, cfg)
        if solver_rep.total_error <= base_rep.total_error:
            wins += 1
    elapsed = time.perf_counter() - t0
    check(8, f"solver total error <= baseline on noisy-cluster fixtures: {wins}/10 "
             f"(need 9), suite {elapsed:.1f}s < 30s", wins >= 9 and elapsed < 30.0)


def test_criterion_9_doubly_stochastic_trajectory():
    rng = np.random.default_rng(5)
    fs1 = make_feature_set(rng, 30)
    fs2 = permuted_copy(fs1, rng.permutation(30))
    g1, g2 = build_graph(fs1), build_graph(fs2)
    deviations = []

    def watch(iterate):
        deviations.append(max(np.abs(iterate.sum(axis=0) - 1).max(),
                              np.abs(iterate.sum(axis=1) - 1).max()))

    gsspf(g1.adjacency, g2.adjacency, affinity(g1, g2), on_iterate=watch)
    worst = max(deviations)
    check(9, f"row/col sums stay within 1e-6 over {len(deviations)} iterations "
             f"(worst {worst:.2e})", worst < 1e-6)


def test_criterion_10_compare_determinism(tmp_path):
    rng = np.random.default_rng(6)
    fs1 = make_feature_set(rng, 12)
    fs2 = permuted_copy(fs1, rng.permutation(12))
    fa = tmp_path / "a.json"
    fb = tmp_path / "b.json"
    fa.write_text(serialize_features(fs1))
    fb.write_text(serialize_features(fs2))
    outputs = []
    for run in ("first", "second"):
        report = tmp_path / f"{run}.txt"
        viz = tmp_path / run
        code = main(["compare", str(fa), str(fb), "--out", str(report), "--viz", str(viz)])
        assert code == 0
        outputs.append((report.read_bytes(),
                        (tmp_path / f"{run}_gsspf.svg").read_bytes(),
                        (tmp_path / f"{run}_baseline.svg").read_bytes()))
    check(10, "repeated compare yields byte-identical reports and SVGs",
          outputs[0] == outputs[1])
