"""Command-line driver.

Exit codes: 0 success, 1 a checked property failed, 2 usage or config error.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .algebra import (
    is_positive_semidefinite,
    is_reahn,
    is_reverse_involution,
    parse_algebra,
    parse_involution,
)
from .activation import make_activation
from .experiment import octonion_experiment
from .graph import classification_to_json, classify, enumerate_graph, to_dot
from .network import (
    Network,
    check_conditions,
    network_from_config,
    network_to_config,
    random_hermitian_weights,
    random_state,
    run,
)
from .presets import preset
from .realify import matrix_to_csv, realify_network, verify_realification

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _config_hash(doc: dict) -> str:
    blob = json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _activation_id(args) -> str | None:
    act = args.activation
    if act in ("csgn", "tsgn"):
        if args.K is None:
            raise UsageError(f"--activation {act} needs --K")
        return f"{act}:{args.K}"
    return act


def _load_network(args) -> tuple[Network, np.ndarray | None]:
    """Network from ``--config`` (file or preset) or from the algebra flags."""
    if args.config:
        if args.config.startswith(("example5:", "example6:")):
            net, x0 = preset(args.config)
        else:
            with open(args.config, encoding="utf-8") as fh:
                net, x0 = network_from_config(json.load(fh))
        act = _activation_id(args)
        if act:
            net = Network(net.algebra, net.tau, make_activation(act, net.algebra), net.W,
                          net.schedule, net.seed, net.name)
        return net, x0
    if not args.algebra or not args.activation or not args.N:
        raise UsageError("give --config, or --algebra, --activation and --N")
    spec, tau = parse_algebra(args.algebra)
    if args.involution:
        tau = parse_involution(args.involution, spec)
    seed = args.seed or 0
    W = random_hermitian_weights(args.N, spec, tau, seed)
    net = Network(spec, tau, make_activation(_activation_id(args), spec), W, seed=seed)
    return net, None


def _start_state(net: Network, x0, seed: int) -> np.ndarray:
    if x0 is not None:
        return x0
    return random_state(net, np.random.default_rng([seed, 1]))


def cmd_verify(args) -> int:
    spec, tau = parse_algebra(args.algebra)
    if args.involution:
        tau = parse_involution(args.involution, spec)
    rev = is_reverse_involution(spec, tau)
    reahn = is_reahn(spec, tau)
    psd = is_positive_semidefinite(spec, tau)
    report = {
        "algebra": spec.name,
        "involution": list(tau.signs),
        "reverse_involution": {"holds": rev.holds, "witness": rev.witness},
        "reahn": {"holds": reahn.holds, "witness": reahn.witness},
        "psd": {"holds": psd},
    }
    text = _dump(report)
    sys.stdout.write(text)
    if args.out:
        _write(Path(args.out), text)
    return EXIT_OK if rev and reahn and psd else EXIT_FAIL


_UNIT_NAMES = {2: ["1", "i"], 4: ["1", "i", "j", "k"]}


def _term(coeff, unit: str) -> str:
    if coeff == 1:
        return unit if unit != "1" else "1"
    if coeff == -1:
        return f"-{unit}"
    return f"{coeff}" if unit == "1" else f"{coeff}{unit}"


def cmd_table(args) -> int:
    spec, _ = parse_algebra(args.algebra)
    names = _UNIT_NAMES.get(spec.dim, ["1"] + [f"e{k}" for k in range(1, spec.dim)])
    rows = [["x"] + names[1:]]
    for mu in range(1, spec.dim):
        row = [names[mu]]
        for nu in range(1, spec.dim):
            terms = [_term(c, names[k]) for k, c in enumerate(spec.exact[mu, nu]) if c != 0]
            row.append(" + ".join(terms).replace("+ -", "- ") if terms else "0")
        rows.append(row)
    if spec.dim == 1:
        rows = [["x", "1"], ["1", "1"]]
    width = max(len(c) for r in rows for c in r)
    text = "\n".join(" | ".join(c.rjust(width) for c in r) for r in rows) + "\n"
    sys.stdout.write(text)
    if args.out:
        _write(Path(args.out), text)
    return EXIT_OK


def cmd_run(args) -> int:
    net, x0 = _load_network(args)
    seed = args.seed if args.seed is not None else net.seed
    x0 = _start_state(net, x0, seed)
    trace = run(net, x0, args.sweeps)
    config = network_to_config(net, x0)
    summary = {
        "meta": {"command": "run", "seed": seed, "config_hash": _config_hash(config),
                 "version": __version__},
        "conditions": check_conditions(net).as_dict(),
        "trace": trace.summary(),
    }
    if args.out:
        out = Path(args.out)
        _write(out, trace.to_csv())
        _write(out.with_suffix(".json"), _dump(summary))
    sys.stdout.write(_dump(summary))
    return EXIT_OK if trace.converged else EXIT_FAIL


def cmd_graph(args) -> int:
    net, x0 = _load_network(args)
    g = enumerate_graph(net)
    cls = classify(g)
    highlight = g.encode(x0) if x0 is not None else None
    config = network_to_config(net, x0)
    meta = {"command": "graph", "seed": net.seed, "config_hash": _config_hash(config),
            "highlight": highlight, "version": __version__}
    text = classification_to_json(cls, meta)
    if args.out:
        out = Path(args.out)
        _write(out, to_dot(g, highlight))
        _write(out.with_suffix(".json"), text)
    sys.stdout.write(text)
    return EXIT_OK


def cmd_realify(args) -> int:
    net, x0 = _load_network(args)
    M, real = realify_network(net)
    check = verify_realification(net, trials=100, seed=args.seed or 0)
    real_x0 = None if x0 is None else x0.reshape(-1, 1)
    real_config = network_to_config(real, real_x0)
    summary = {
        "meta": {"command": "realify", "seed": args.seed or 0,
                 "config_hash": _config_hash(network_to_config(net, x0)), "version": __version__},
        "size": M.shape[0],
        "symmetric": bool(np.array_equal(M, M.T)),
        "zero_diagonal": bool(np.all(np.diag(M) == 0)),
        "identity_check": {"passed": check.passed, "trials": check.trials,
                           "max_error": check.max_error},
    }
    if args.out:
        out = Path(args.out)
        _write(out, matrix_to_csv(M))
        _write(out.with_suffix(".json"), _dump(real_config))
    sys.stdout.write(_dump(summary))
    return EXIT_OK if check else EXIT_FAIL


def _octonion_job(job):
    N, seed, sweeps = job
    return octonion_experiment(N, seed, sweeps)


def cmd_octonion(args) -> int:
    N = args.N or 100
    if N < 2:
        raise UsageError("--N must be at least 2")
    base = args.seed or 0
    seeds = [base + k for k in range(args.seeds)]
    jobs = [(N, s, args.sweeps) for s in seeds]
    if len(jobs) > 1 and args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_octonion_job, jobs))
    else:
        results = [_octonion_job(j) for j in jobs]
    out = Path(args.out or "octonion-exp")
    config = {"N": N, "seeds": seeds, "sweeps": args.sweeps}
    summary = {"meta": {"command": "octonion-exp", "seed": base, "config_hash": _config_hash(config),
                        "version": __version__},
               "runs": [r.summary() for r in results]}
    for r in results:
        _write(out / f"octonion_seed{r.seed}.csv", r.octonion.to_csv())
        _write(out / f"realified_seed{r.seed}.csv", r.realified.to_csv())
    _write(out / "summary.json", _dump(summary))
    sys.stdout.write(_dump(summary))
    ok = all(r.octonion.converged and r.realified.converged for r in results)
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hhnn", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, *flags):
        if "algebra" in flags:
            sp.add_argument("--algebra", help="R C U D Q T O, cd:k or cl2:kappa")
        if "involution" in flags:
            sp.add_argument("--involution", help="natural, identity, tessarine or default")
        if "net" in flags:
            sp.add_argument("--config", help="network config JSON, or example5:<variant> / example6:<variant>")
            sp.add_argument("--activation", help="csgn, tsgn, split, conj_split, sigma (or csgn:K)")
            sp.add_argument("--K", type=int, help="resolution factor for csgn/tsgn")
            sp.add_argument("--N", type=int, help="neurons for a random Hermitian network")
        if "seed" in flags:
            sp.add_argument("--seed", type=int)
        if "sweeps" in flags:
            sp.add_argument("--sweeps", type=int, default=1000)
        sp.add_argument("--out", help="output path")

    sp = sub.add_parser("verify", help="check reverse-involution, real-part associativity, PSD")
    common(sp, "algebra", "involution")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("table", help="print the multiplication table")
    common(sp, "algebra")
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("run", help="simulate a network and write its energy trace")
    common(sp, "algebra", "involution", "net", "seed", "sweeps")
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("graph", help="enumerate the transition graph (DOT + classification JSON)")
    common(sp, "algebra", "involution", "net", "seed")
    sp.set_defaults(func=cmd_graph)

    sp = sub.add_parser("realify", help="real block matrix of a split-sign network (CSV)")
    common(sp, "algebra", "involution", "net", "seed")
    sp.set_defaults(func=cmd_realify)

    sp = sub.add_parser("octonion-exp", help="octonion vs realified energy traces")
    sp.add_argument("--N", type=int, default=100)
    sp.add_argument("--seeds", type=int, default=1, help="number of consecutive seeds")
    sp.add_argument("--jobs", type=int, default=1, help="worker processes")
    common(sp, "seed", "sweeps")
    sp.set_defaults(func=cmd_octonion)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, ValueError, KeyError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
