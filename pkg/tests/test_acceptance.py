"""Acceptance suite: one test per criterion, each reporting a single PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion lines.
"""
import json
import statistics
import time

import numpy as np
import pytest

from hhnn.activation import CSgn, ConjSplitSign, SigmaNormalize, SplitSign, make_activation, verify_b_projection
from hhnn.algebra import (
    builtin_algebra,
    cayley_dickson,
    identity_involution,
    is_positive_semidefinite,
    is_reahn,
    is_reverse_involution,
    natural_conjugation,
    TESSARINE_INVOLUTION,
)
from hhnn.cli import main
from hhnn.experiment import octonion_experiment
from hhnn.graph import classify, enumerate_graph, max_steps_to_fixed, relabel_isomorphic
from hhnn.network import Network, check_conditions, random_hermitian_weights, random_state, run
from hhnn.presets import EXAMPLE_X0, example5
from hhnn.realify import phi, realify_network, verify_realification

# band half-width: 3 x the sample sd (331.3) of final octonion energies from a
# 20-seed pilot (seeds 1000-1019, N=100); acceptance seeds are disjoint
ENERGY_CENTER = -16000.0
ENERGY_HALF_WIDTH = 994.0
ACCEPTANCE_SEEDS = range(5)


def report(number, title, failures):
    status = "PASS" if not failures else "FAIL"
    print(f"\n[{status}] criterion {number}: {title}")
    for f in failures:
        print(f"    - {f}")
    assert not failures, "; ".join(failures)


def involutions(name):
    spec, default = (cayley_dickson(4), None) if name == "cd:4" else builtin_algebra(name)
    nat, ident = natural_conjugation(spec), identity_involution(spec)
    table = {
        "R": [ident], "C": [nat, ident], "U": [nat, ident], "D": [nat, ident],
        "Q": [nat], "T": [TESSARINE_INVOLUTION, ident], "O": [nat], "cd:4": [nat],
    }
    return spec, table[name]


def test_criterion_1_algebra_laws():
    start = time.perf_counter()
    failures = []
    for name in ("R", "C", "U", "D", "Q", "T", "O", "cd:4"):
        spec, taus = involutions(name)
        for tau in taus:
            rev, reahn = is_reverse_involution(spec, tau), is_reahn(spec, tau)
            if not rev:
                failures.append(f"{name} {tau.signs}: not a reverse involution at {rev.witness}")
            if not reahn:
                failures.append(f"{name} {tau.signs}: real part not associative at {reahn.witness}")
    elapsed = time.perf_counter() - start
    if elapsed >= 10:
        failures.append(f"runtime {elapsed:.1f}s >= 10s")
    report(1, f"reverse involution + real-part associativity, exact ({elapsed:.2f}s)", failures)


def test_criterion_2_psd_table():
    def tau_of(spec, which):
        return {"natural": natural_conjugation(spec), "identity": identity_involution(spec),
                "tessarine": TESSARINE_INVOLUTION}[which]

    expected = [("C", "natural", True), ("C", "identity", False), ("U", "identity", True),
                ("U", "natural", False), ("D", "identity", True), ("D", "natural", True),
                ("T", "tessarine", True)]
    cases = [(builtin_algebra(n)[0], n, w, e) for n, w, e in expected]
    cases += [(cayley_dickson(k), f"cd:{k}", "natural", True) for k in range(5)]
    failures = [f"({name}, {which}) gave {got}, expected {want}"
                for spec, name, which, want in cases
                for got in [is_positive_semidefinite(spec, tau_of(spec, which))] if got != want]
    report(2, "PSD dichotomy table", failures)


def test_criterion_3_b_projection():
    failures = []
    C, nat = builtin_algebra("C")
    for K in (2, 3, 4, 8):
        res = verify_b_projection(CSgn(K), C, nat, samples=10_000, seed=K)
        if not res:
            failures.append(f"csgn:{K} violated at q={res.q}, s={res.s}")
    # lambda * i^2 with tau = diag(1, lambda); split needs >= 0, conj_split <= 0
    for name in ("C", "U", "D"):
        spec, _ = builtin_algebra(name)
        i2 = int(spec.exact[1, 1, 0])
        for lam, tau in ((1, identity_involution(spec)), (-1, natural_conjugation(spec))):
            for act, should_hold in ((SplitSign(2), lam * i2 >= 0), (ConjSplitSign(2), lam * i2 <= 0)):
                res = verify_b_projection(act, spec, tau, samples=10_000, seed=7)
                if bool(res) != should_hold:
                    detail = (f"counterexample q={np.round(res.q, 4).tolist()}, s={res.s.tolist()}, "
                              f"gap={res.gap}" if not res else "no counterexample found")
                    failures.append(f"{act.id} on ({name}, lambda={lam:+d}, lambda*i^2={lam * i2:+d}): "
                                    f"expected {'pass' if should_hold else 'counterexample'}; {detail}")
    for k in (1, 2, 3):
        spec = cayley_dickson(k)
        res = verify_b_projection(SigmaNormalize(spec.dim), spec, natural_conjugation(spec), samples=10_000)
        if not res:
            failures.append(f"sigma on cd:{k} violated")
    report(3, "B-projection verification", failures)


def _criterion_4_networks():
    """100 networks cycling through every compatible (algebra, activation) pair."""
    pairs = [("C", "csgn:4"), ("T", "tsgn:4"), ("C", "split"), ("T", "split"), ("Q", "split"),
             ("O", "split"), ("C", "sigma"), ("Q", "sigma"), ("O", "sigma")]
    for k in range(100):
        name, act = pairs[k % len(pairs)]
        N = (3, 5)[(k // len(pairs)) % 2]
        w = (0.0, 0.5)[(k // (2 * len(pairs))) % 2]
        spec, tau = builtin_algebra(name)
        W = random_hermitian_weights(N, spec, tau, seed=k, self_weight=w)
        yield k, Network(spec, tau, make_activation(act, spec), W, schedule="random", seed=k)


def test_criterion_4_energy_descent():
    failures = []
    for k, net in _criterion_4_networks():
        label = f"net {k} ({net.algebra.name}, {net.activation.id}, N={net.N}, w_ii={net.W[0, 0, 0]})"
        if not check_conditions(net).convergence_guaranteed:
            failures.append(f"{label}: hypotheses not met")
        trace = run(net, random_state(net, np.random.default_rng([k, 1])), max_sweeps=1000)
        bad = trace.descent_violations(rel_slack=1e-9)
        if bad:
            failures.append(f"{label}: {len(bad)} non-decreasing updates")
        if not trace.converged:
            failures.append(f"{label}: not converged after {trace.sweeps} sweeps")
    report(4, "per-update energy descent and convergence on 100 networks", failures)


def test_criterion_5_example5_graphs():
    g = {v: enumerate_graph(example5(v)) for v in ("c-conj", "u-split", "d-split", "d-conj", "c-split", "u-conj")}
    c = {v: classify(x) for v, x in g.items()}
    start = g["u-split"].encode(EXAMPLE_X0)
    failures = []
    if c["u-split"].cyclic_nodes or len(c["u-split"].fixed_points) != 4:
        failures.append(f"(U, split) counts {c['u-split'].counts}")
    steps = max_steps_to_fixed(g["u-split"], start)
    if steps is None or steps > 1:
        failures.append(f"(U, split) from [-1-i, 1+i] needs {steps} updates")
    for v in ("c-split", "u-conj"):
        if not c[v].cyclic_nodes:
            failures.append(f"{v}: no cyclic nodes")
    if c["c-conj"].cyclic_nodes:
        failures.append("(C, conj_split) has cyclic nodes")
    if len(c["d-split"].fixed_points) != len(c["d-conj"].fixed_points):
        failures.append("dual-number fixed-point counts differ")
    conj = lambda x: x * np.array([1.0, -1.0])
    if not relabel_isomorphic(g["c-conj"], g["u-split"], conj):
        failures.append("panels a/b not isomorphic under conjugation")
    if not relabel_isomorphic(g["c-split"], g["u-conj"], conj):
        failures.append("panels e/f not isomorphic under conjugation")
    report(5, "two-neuron Clifford network graphs", failures)


W_C = [[0, 0, 1, -3], [0, 0, 3, 1], [1, -3, 0, 0], [3, 1, 0, 0]]
W_H = [[0, 0, 1, 3], [0, 0, 3, 1], [1, 3, 0, 0], [3, 1, 0, 0]]
W_D = [[0, 0, 1, 0], [0, 0, 3, 1], [1, 0, 0, 0], [3, 1, 0, 0]]


def test_criterion_6_realified_examples():
    failures = []
    mats = {}
    for variant, expected in (("c-split", W_C), ("u-split", W_H), ("d-split", W_D)):
        M, real = realify_network(example5(variant))
        mats[variant] = real
        if M.tolist() != expected:
            failures.append(f"{variant}: block matrix {M.tolist()}")
        if np.array_equal(M, M.T) != (variant == "u-split"):
            failures.append(f"{variant}: symmetric={np.array_equal(M, M.T)}")
    gu_hyper = enumerate_graph(example5("u-split"))
    gu = enumerate_graph(mats["u-split"])
    mapped = sorted(gu.encode(phi(gu_hyper.decode(n))[:, None]) for n in classify(gu_hyper).fixed_points)
    if classify(gu).fixed_points != mapped:
        failures.append("realified U fixed points differ from the hyperbolic ones under phi")
    if max_steps_to_fixed(gu, gu.encode(phi(EXAMPLE_X0)[:, None])) != 2:
        failures.append("realified U has no 2-update trajectory from the start state")
    if not classify(enumerate_graph(mats["c-split"])).cyclic_nodes:
        failures.append("realified C graph has no cycles")
    report(6, "realified two-neuron networks", failures)


def test_criterion_7_realification_identity():
    failures = []
    for v in ("c-split", "u-split", "d-split"):
        check = verify_realification(example5(v), trials=100, seed=1)
        if not check:
            failures.append(f"{v}: error {check.max_error}")
    O, tau = builtin_algebra("O")
    net = Network(O, tau, make_activation("split", O), random_hermitian_weights(100, O, tau, seed=0))
    check = verify_realification(net, trials=100, seed=1)
    if not check:
        failures.append(f"octonion N=100: error {check.max_error}")
    report(7, "M phi(x) = phi(W x) within 1e-12", failures)


@pytest.mark.slow
def test_criterion_8_octonion_experiment():
    failures, runs = [], []
    for seed in ACCEPTANCE_SEEDS:
        t0 = time.perf_counter()
        r = octonion_experiment(N=100, seed=seed)
        elapsed = time.perf_counter() - t0
        runs.append(r)
        for label, tr in (("octonion", r.octonion), ("realified", r.realified)):
            if not tr.converged:
                failures.append(f"seed {seed} {label}: not converged")
            if tr.descent_violations():
                failures.append(f"seed {seed} {label}: energy increased")
        if abs(r.octonion.final_energy - ENERGY_CENTER) > ENERGY_HALF_WIDTH:
            failures.append(f"seed {seed}: final octonion energy {r.octonion.final_energy:.1f} outside band")
        if elapsed >= 120:
            failures.append(f"seed {seed}: {elapsed:.0f}s >= 120s")
        print(f"    seed {seed}: E_oct={r.octonion.final_energy:.1f} E_real={r.realified.final_energy:.1f} "
              f"changes {r.octonion.changes} vs {r.realified.changes} ({elapsed:.1f}s)")
    med_o = statistics.median(r.octonion.changes for r in runs)
    med_r = statistics.median(r.realified.changes for r in runs)
    if not med_o < med_r:
        failures.append(f"median changes octonion {med_o} >= realified {med_r}")
    report(8, f"octonion vs realified (median changes {med_o} vs {med_r})", failures)


def test_criterion_9_determinism(tmp_path, capsys):
    commands = [
        ["graph", "--config", "example5:u-split", "--out", "{d}/graph.dot"],
        ["run", "--algebra", "T", "--activation", "tsgn", "--K", "4", "--N", "8", "--seed", "4",
         "--out", "{d}/run.csv"],
        ["realify", "--config", "example5:d-split", "--out", "{d}/real.csv"],
        ["verify", "--algebra", "O", "--out", "{d}/verify.json"],
        ["octonion-exp", "--N", "12", "--seed", "3", "--seeds", "2", "--out", "{d}/oct"],
    ]
    for k in ("a", "b"):
        d = tmp_path / k
        for argv in commands:
            main([a.format(d=d) for a in argv])
    capsys.readouterr()
    files = sorted(p.relative_to(tmp_path / "a") for p in (tmp_path / "a").rglob("*") if p.is_file())
    failures = [str(f) for f in files if (tmp_path / "a" / f).read_bytes() != (tmp_path / "b" / f).read_bytes()]
    if len(files) < 10:
        failures.append(f"only {len(files)} output files written")
    json.loads((tmp_path / "a" / "oct" / "summary.json").read_text())
    report(9, f"byte-identical outputs across two runs ({len(files)} files)", failures)
