"""Exit criteria. Each test appends one PASS/FAIL line to the run summary."""

import math
import random
import time
from pathlib import Path

import numpy as np
import pytest

from dilation.analysis import average_dilation, benefit
from dilation.augment import check_key_lemma, greedy_augment, optimal_augment
from dilation.cli import main
from dilation.errors import LemmaViolation
from dilation.graph import apsp, augment_distances, floyd_warshall
from dilation.instance import complete_instance, generate_instance
from dilation.metric import build_space
from dilation.signatures import benefit_decomposition

from .conftest import SQUARE_TEXT

TOL = 1e-9
GOLDEN = Path(__file__).parent / "golden"


def bound_instances():
    """Seeds 1..200; n cycles through 5..8, models alternate."""
    for seed in range(1, 201):
        model = "uniform-square" if seed % 2 else "random-tree"
        yield seed, generate_instance(model, 5 + seed % 4, seed)


def decomposition_draws():
    models = ("uniform-square", "random-tree", "path")
    for seed in range(1, 101):
        inst = generate_instance(models[seed % 3], 3 + seed % 10, seed)
        rnd = random.Random(10_000 + seed)
        pairs = [(u, v) for u in range(inst.n) for v in range(u + 1, inst.n)]
        yield seed, inst, rnd.sample(pairs, rnd.randint(1, min(3, len(pairs))))


def oracle_draws():
    models = ("uniform-square", "random-tree", "path")
    for seed in range(1, 101):
        inst = generate_instance(models[seed % 3], 2 + seed % 29, seed)
        rnd = random.Random(20_000 + seed)
        u, v = rnd.sample(range(inst.n), 2)
        yield seed, inst, (u, v)


def record(log, number, ok, detail):
    log.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}")


@pytest.fixture(scope="module")
def bound_runs():
    """Per (seed, k): optimum, greedy trace of 4k^2 steps."""
    runs = []
    for seed, inst in bound_instances():
        for k in (1, 2):
            opt = optimal_augment(inst.graph, k)
            trace = greedy_augment(inst.graph, 4 * k * k)
            runs.append((seed, k, inst, opt, trace))
    return runs


def test_1_theorem_bounds(bound_runs, acceptance_log):
    failures = []
    for seed, k, inst, opt, trace in bound_runs:
        b_star = opt.benefit
        if trace.benefit_after(k) < b_star / (8 * k) - TOL:
            failures.append((seed, k, "k"))
        if trace.benefit_after(4 * k * k) < b_star / 2 - TOL:
            failures.append((seed, k, "4k^2"))
    worst = min(
        (trace.benefit_after(k) / opt.benefit for _, k, _, opt, trace in bound_runs if opt.benefit > TOL),
        default=1.0,
    )
    record(acceptance_log, 1, not failures,
           f"{len(bound_runs)} (instance, k) runs, {len(failures)} violations, worst greedy/opt ratio at k = {worst:.4f}")
    assert not failures


def test_1_runtime(acceptance_log):
    t0 = time.perf_counter()
    for seed, inst in bound_instances():
        for k in (1, 2):
            optimal_augment(inst.graph, k)
            greedy_augment(inst.graph, 4 * k * k)
    elapsed = time.perf_counter() - t0
    record(acceptance_log, "1 (runtime)", elapsed < 300, f"exhaustive regime in {elapsed:.1f}s (limit 300s)")
    assert elapsed < 300


def test_2_key_lemma(bound_runs, acceptance_log):
    checks = violations = 0
    branches = {1: 0, 2: 0}
    for seed, k, inst, opt, trace in bound_runs:
        for i in range(k):
            checks += 1
            try:
                v = check_key_lemma(inst.graph, trace.prefix(i), k, optimal_benefit=opt.benefit)
                branches[v.branch] += 1
            except LemmaViolation:
                violations += 1
    record(acceptance_log, 2, violations == 0,
           f"{checks} prefix checks, {violations} violations (branch one {branches[1]}, branch two {branches[2]})")
    assert violations == 0


def test_3_decomposition(acceptance_log):
    bad = []
    for seed, inst, f in decomposition_draws():
        dec = benefit_decomposition(inst.graph, f)
        if dec.residual > inst.n ** 2 * TOL or dec.none_contribution != 0.0:
            bad.append(seed)
    record(acceptance_log, 3, not bad, f"100 draws (n <= 12, |F| <= 3), {len(bad)} failures")
    assert not bad


def test_4_oracle_equivalence(acceptance_log):
    worst_inc = worst_fw = 0.0
    for seed, inst, (u, v) in oracle_draws():
        g = inst.graph
        base = apsp(g)
        inc = augment_distances(base, (u, v, g.weight(u, v)))
        full = apsp(g.with_edges([(u, v)]))
        worst_inc = max(worst_inc, float(np.max(np.abs(inc.dist - full.dist))))
        worst_fw = max(worst_fw, float(np.max(np.abs(base.dist - floyd_warshall(g)))))
    ok = worst_inc <= TOL and worst_fw <= TOL
    record(acceptance_log, 4, ok,
           f"100 draws (n <= 30): max |incremental - apsp| = {worst_inc:.2e}, max |dijkstra - floyd| = {worst_fw:.2e}")
    assert ok


def test_5_dilation_axioms(acceptance_log):
    graphs = [inst.graph for _, inst in bound_instances()]
    graphs += [inst.graph for _, inst, _ in decomposition_draws()]
    graphs += [inst.graph for _, inst, _ in oracle_draws()]
    lowest = min(float(min(average_dilation(g).per_pair.values())) for g in graphs)
    complete_err = 0.0
    rng = np.random.default_rng(5)
    for n in range(2, 15):
        for space in (build_space(rng.random((n, 2))), build_space(rng.random((n, 3)) * 100)):
            complete_err = max(complete_err, abs(average_dilation(complete_instance(space).graph).average - 1.0))
    ok = lowest >= 1 - TOL and complete_err <= TOL
    record(acceptance_log, 5, ok,
           f"{len(graphs)} instances, min pair dilation {lowest:.12f}; complete graphs max |avg - 1| = {complete_err:.1e}")
    assert ok


@pytest.fixture
def square_file(tmp_path):
    p = tmp_path / "square.inst"
    p.write_text(SQUARE_TEXT)
    return p


def test_6_golden_square(square_file, tmp_path, acceptance_log, capsys):
    from dilation.instance import parse_instance

    g = parse_instance(SQUARE_TEXT).graph
    avg = average_dilation(g).average
    trace = greedy_augment(g, 1)
    opt = optimal_augment(g, 1)
    checks = {
        "average": abs(avg - (6 + 2 * math.sqrt(2)) / 6) <= TOL,
        "greedy": trace.edges == [(0, 3)] and abs(trace.steps[0].benefit - 2) <= TOL,
        "optimal": opt.shortcuts.edges == ((0, 3),) and abs(opt.benefit - 2) <= TOL,
        "benefit": abs(benefit(g, [(0, 3)]).total - 2) <= TOL,
    }
    for name, argv in [("eval.tsv", ["eval"]),
                       ("augment.tsv", ["augment", "--k", "1"]),
                       ("check_bounds.tsv", ["check-bounds", "--k", "1"])]:
        outputs = []
        for attempt in range(2):
            rep = tmp_path / f"{name}.{attempt}"
            code = main([argv[0], str(square_file), *argv[1:], "--report", str(rep)])
            outputs.append(rep.read_bytes() if code == 0 else None)
        checks[name] = outputs[0] == outputs[1] == (GOLDEN / name).read_bytes()
    capsys.readouterr()
    failed = [k for k, v in checks.items() if not v]
    record(acceptance_log, 6, not failed,
           f"average {avg:.10f}, greedy {trace.edges}, optimal {list(opt.shortcuts.edges)}, golden files"
           + (f"; failed: {failed}" if failed else " byte-stable"))
    assert not failed


def test_7_scale_and_determinism(tmp_path, acceptance_log, capsys):
    inst_path = tmp_path / "big.inst"
    assert main(["gen", "--model", "uniform-square", "--n", "150", "--seed", "7", "--out", str(inst_path)]) == 0
    times, reports = {}, {}
    for threads in (1, 4):
        rep = tmp_path / f"t{threads}.tsv"
        t0 = time.perf_counter()
        assert main(["augment", str(inst_path), "--k", "5", "--threads", str(threads), "--report", str(rep)]) == 0
        times[threads] = time.perf_counter() - t0
        reports[threads] = rep.read_bytes()
    capsys.readouterr()
    ok = max(times.values()) < 120 and reports[1] == reports[4]
    record(acceptance_log, 7, ok,
           f"n=150 k=5: {times[1]:.1f}s (1 thread), {times[4]:.1f}s (4 threads), traces identical: {reports[1] == reports[4]}")
    assert ok
