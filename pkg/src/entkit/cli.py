"""Command-line surface: state I/O, measures, unit calculus, protocols, synthesis.

Machine-readable JSON reports go to standard output (floats printed with 12
significant digits, infinities as the string "inf"); short human summaries go
to standard error.  Exit codes: 0 success, 1 validation error (a JSON error
object naming the failed invariant is printed), 2 usage error.  Every
randomized subcommand requires an explicit --seed.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import __version__
from .gatecost import SearchOptions, SynthesisError, cz_bound_report, exact_min_cz_search
from .graphfn import (
    F_ORACLES,
    build_graph_function_state,
    classical_distribution,
    graph_state_entanglement_profile,
)
from .locc import (
    CZ_GATE,
    ReductionDemo,
    bob_output_density,
    channel_process_fidelity,
    nonlocal_cz,
    nonlocal_cz_channel,
    reduction_demo,
    teleport,
    teleport_channel,
)
from .measures import (
    RoofOptions,
    concurrence,
    convex_roof_eof,
    distillable_bounds,
    eof_two_qubit,
    pure_state_entanglement,
)
from .states import (
    Cut,
    DensityMatrix,
    PureState,
    ValidationError,
    fidelity,
    named_state,
)
from .units import (
    MeasureRecord,
    ratio_certificates,
    sigma_unit_bounds,
    special_values,
)


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# deterministic JSON rendering


def _render(value, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [
            f'{pad}  {_render_str(str(k))}: {_render(v, indent + 1)}' for k, v in value.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        if len(value) == 0:
            return "[]"
        items = [f"{pad}  {_render(v, indent + 1)}" for v in value]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(value, str):
        return _render_str(value)
    if value is None:
        return "null"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        x = float(value)
        if math.isinf(x):
            return '"inf"' if x > 0 else '"-inf"'
        if math.isnan(x):
            return '"nan"'
        text = format(x, ".12g")
        if not any(ch in text for ch in ".e"):
            text += ".0"
        return text
    if isinstance(value, complex):
        return _render([value.real, value.imag], indent)
    if isinstance(value, np.ndarray):
        return _render(value.tolist(), indent)
    raise TypeError(f"cannot render {type(value)!r}")


def _render_str(s: str) -> str:
    import json

    return json.dumps(s)


def render_report(report: dict) -> str:
    return _render(report) + "\n"


# ---------------------------------------------------------------------------
# state files


def state_to_json(state) -> dict:
    if isinstance(state, PureState):
        return {
            "kind": "pure",
            "dims": list(state.dims),
            "amplitudes": [[v.real, v.imag] for v in state.amplitudes],
        }
    return {
        "kind": "mixed",
        "dims": list(state.dims),
        "matrix": [[[v.real, v.imag] for v in row] for row in state.matrix],
    }


def state_from_json(doc: dict):
    if "named" in doc:
        return named_state(doc["named"])
    dims = doc.get("dims")
    kind = doc.get("kind")
    if kind == "pure":
        amps = np.array([complex(re, im) for re, im in doc["amplitudes"]])
        return PureState(amps, dims)
    if kind == "mixed":
        mat = np.array([[complex(re, im) for re, im in row] for row in doc["matrix"]])
        return DensityMatrix(mat, dims)
    raise ValidationError("state-file", "state file must carry 'named' or kind 'pure'/'mixed'")


def write_state_file(path: str, state) -> None:
    import json

    with open(path, "w") as fh:
        json.dump(state_to_json(state), fh)


def read_state_file(path: str):
    import json

    with open(path) as fh:
        return state_from_json(json.load(fh))


def load_state(spec: str):
    """A path to a state file, or an inline named spec such as ``ghz:3``."""
    if os.path.exists(spec):
        return read_state_file(spec)
    return named_state(spec)


# ---------------------------------------------------------------------------
# report plumbing


def _report(command: str, inputs: dict, results: dict, tolerances: dict, seed, warnings) -> dict:
    return {
        "tool_version": __version__,
        "command": command,
        "inputs": inputs,
        "results": results,
        "tolerances": tolerances,
        "seed": seed,
        "warnings": list(warnings),
    }


def _interval_json(iv) -> dict:
    return {"lo": iv.lo, "hi": iv.hi}


def _measure_value_json(mv) -> dict:
    return {"value": mv.value, "kind": mv.kind, "method": mv.method}


def _transcript_json(tr) -> dict:
    from .locc import ClassicalMessageStep, LocalUnitaryStep, MeasurementStep, ResourceStep

    steps = []
    for s in tr.steps:
        if isinstance(s, LocalUnitaryStep):
            steps.append({"type": "local_unitary", "party": s.party, "qubits": list(s.qubits), "name": s.name})
        elif isinstance(s, MeasurementStep):
            steps.append(
                {
                    "type": "measurement",
                    "party": s.party,
                    "qubit": s.qubit,
                    "basis": s.basis,
                    "outcome": s.outcome,
                    "probability": s.probability,
                }
            )
        elif isinstance(s, ClassicalMessageStep):
            steps.append({"type": "classical_message", "direction": s.direction, "bits": list(s.bits)})
        elif isinstance(s, ResourceStep):
            steps.append({"type": "resource", "kind": s.kind, "count": s.count, "qubits": list(s.qubits)})
    totals = tr.resource_totals
    return {
        "steps": steps,
        "resource_totals": {
            "ebits_consumed": totals.ebits_consumed,
            "cbits_alice_to_bob": totals.cbits_alice_to_bob,
            "cbits_bob_to_alice": totals.cbits_bob_to_alice,
            "qubits_transmitted": totals.qubits_transmitted,
        },
        "outcomes": list(tr.outcomes),
        "branch_probability": tr.branch_probability,
        "final_state": state_to_json(tr.final_state),
    }


def _cut_for(state, cut_spec) -> Cut:
    n = len(state.dims)
    if cut_spec is None:
        if n < 2:
            raise ValidationError("cut-nonempty", "state has a single subsystem; no cut exists")
        return Cut.bipartition([0], n)
    return Cut.from_string(cut_spec, n)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_measure(args) -> dict:
    state = load_state(args.state)
    warnings = []
    results: dict = {}
    if isinstance(state, PureState):
        cut = _cut_for(state, args.cut)
        ent = pure_state_entanglement(state, cut)
        results["entanglement"] = ent.value
        results["kind"] = ent.kind
        results["method"] = ent.method
        rho = state.to_density() if state.dims == (2, 2) else None
    else:
        if state.dims != (2, 2):
            raise ValidationError(
                "measure-scope",
                "measure handles pure states and two-qubit mixed states; use `roof` elsewhere",
            )
        rho = state
        cut = _cut_for(state, args.cut)
    if rho is not None:
        results["concurrence"] = concurrence(rho)
        results["eof_two_qubit"] = _measure_value_json(eof_two_qubit(rho))
    target = state if isinstance(state, PureState) else state
    bounds = distillable_bounds(target, cut, hashing=args.hashing)
    results["distillable_lower"] = _measure_value_json(bounds.lower)
    results["distillable_upper"] = _measure_value_json(bounds.upper)
    print(f"entanglement report for {args.state}", file=sys.stderr)
    return _report(
        "measure",
        {"state": args.state, "cut": cut.label(), "hashing": args.hashing},
        results,
        {"validation": 1e-9},
        None,
        warnings,
    )


def _cmd_roof(args) -> dict:
    state = load_state(args.state)
    if isinstance(state, PureState):
        state = state.to_density()
    cut = _cut_for(state, args.cut)
    opts = RoofOptions(
        ensemble_size=args.ensemble_size,
        restarts=args.restarts,
        max_iters=args.max_iters,
        tol=args.tol if args.tol is not None else 1e-7,
        seed=args.seed,
        workers=args.workers,
    )
    res = convex_roof_eof(state, cut, opts)
    dec = res.decomposition
    results = {
        "eof_upper_bound": _measure_value_json(res.value),
        "restarts": res.restarts_used,
        "decomposition": {
            "weights": [float(w) for w in dec.weights],
            "components": [state_to_json(c) for c in dec.components],
            "average_entanglement": dec.average_entanglement(cut),
        },
    }
    print(f"convex roof upper bound {res.value.value:.6f} ebits", file=sys.stderr)
    return _report(
        "roof",
        {"state": args.state, "cut": cut.label(), "ensemble_size": opts.ensemble_size,
         "restarts": opts.restarts, "max_iters": opts.max_iters},
        results,
        {"tol": opts.tol, "mix": 1e-8},
        args.seed,
        [],
    )


def _parse_record(label: str, text: str) -> MeasureRecord:
    fields = {}
    for part in text.split(","):
        if "=" not in part:
            raise UsageError(f"record {text!r} must look like F=2,D=1")
        key, val = part.split("=", 1)
        fields[key.strip()] = float(val)
    if set(fields) != {"F", "D"}:
        raise UsageError(f"record {text!r} must carry exactly F and D")
    return MeasureRecord(label, fields["F"], fields["D"])


def _cmd_units(args) -> dict:
    sigma = _parse_record("sigma", args.sigma)
    results: dict = {}
    sv = special_values(sigma)
    results["special_values"] = {
        "F_sigma_sigma": sv.F_sigma_sigma,
        "D_sigma_sigma": sv.D_sigma_sigma,
        "F_sigma_bell": sv.F_sigma_bell,
        "D_sigma_bell": sv.D_sigma_bell,
    }
    dist_cert, form_cert = ratio_certificates(sigma, args.threshold)
    results["ratio_certificates"] = {
        cert.quantity: {
            "sigma_unit_ratio": cert.sigma_unit_ratio,
            "bell_unit_ratio": cert.bell_unit_ratio,
            "gap": cert.gap,
            "ratio_problem_present": cert.ratio_problem_present,
        }
        for cert in (dist_cert, form_cert)
    }
    if args.rho is not None:
        rho = _parse_record("rho", args.rho)
        bounds = sigma_unit_bounds(rho, sigma)
        results["F_sigma"] = _interval_json(bounds.F_sigma)
        results["D_sigma"] = _interval_json(bounds.D_sigma)
    print(
        f"unit {sigma.label}: gap {dist_cert.gap:.6g}, ratio problem "
        f"{'present' if dist_cert.ratio_problem_present else 'absent'}",
        file=sys.stderr,
    )
    return _report(
        "units",
        {"sigma": args.sigma, "rho": args.rho},
        results,
        {"gap_threshold": args.threshold},
        None,
        [],
    )


def _cmd_protocol(args) -> dict:
    warnings = []
    results: dict = {}
    name = args.name
    if name == "teleport":
        if args.state is None:
            raise UsageError("protocol teleport requires --state (a one-qubit state)")
        state = load_state(args.state)
        tr = teleport(state, args.seed)
        results["transcript"] = _transcript_json(tr)
        results["bob_fidelity"] = fidelity(bob_output_density(tr), state.to_density())
        if args.verify:
            chan = teleport_channel()
            results["process_fidelity_vs_identity"] = channel_process_fidelity(chan, np.eye(2))
    elif name == "nonlocal-cz":
        if args.state is None:
            raise UsageError("protocol nonlocal-cz requires --state (a two-qubit joint state)")
        state = load_state(args.state)
        tr = nonlocal_cz(state, args.seed)
        results["transcript"] = _transcript_json(tr)
        if args.verify:
            chan = nonlocal_cz_channel()
            results["process_fidelity_vs_cz"] = channel_process_fidelity(chan, CZ_GATE)
    elif name.startswith("reduction:"):
        direction = name.split(":", 1)[1]
        target = load_state(args.state) if args.state is not None else None
        demo: ReductionDemo = reduction_demo(direction, target=target, k=args.k, seed=args.seed)
        results["direction"] = demo.direction
        results["summary"] = demo.summary
        results["resource_totals"] = {
            "ebits_consumed": demo.totals.ebits_consumed,
            "cbits_alice_to_bob": demo.totals.cbits_alice_to_bob,
            "cbits_bob_to_alice": demo.totals.cbits_bob_to_alice,
            "qubits_transmitted": demo.totals.qubits_transmitted,
        }
        results["transcripts"] = [_transcript_json(t) for t in demo.transcripts]
    else:
        raise UsageError(f"unknown protocol {name!r}")
    print(f"protocol {name} complete", file=sys.stderr)
    return _report(
        "protocol",
        {"protocol": name, "state": args.state, "k": args.k, "verify": args.verify},
        results,
        {"process_fidelity": 1e-10, "branch_fidelity": 1e-10},
        args.seed,
        warnings,
    )


def _cmd_synth(args) -> dict:
    state = load_state(args.state)
    if not isinstance(state, PureState):
        raise ValidationError("synth-pure", "synthesis targets must be pure states")
    report = cz_bound_report(state, label=args.state, strategy=args.strategy)
    results = {
        "label": report.label,
        "lower": report.lower,
        "upper": report.upper,
        "method": report.method,
        "witness_fidelity": report.witness_fidelity,
        "per_cut": {
            label: {"rank": req.rank, "min_crossings": req.min_crossings}
            for label, req in sorted(report.per_cut.items())
        },
        "witness": report.witness.to_json_dict(),
        "notes": list(report.notes),
    }
    if args.max_k is not None:
        opts = SearchOptions(seed=args.seed)
        search = exact_min_cz_search(state, args.max_k, opts)
        if search.min_cz is None:
            status = "not found within budget"
        elif search.certified:
            status = "certified exact"
        else:
            status = "numerical upper bound"
        results["search"] = {
            "min_cz": search.min_cz,
            "fidelity": search.fidelity,
            "certified": search.certified,
            "status": status,
            "lower_bound": search.lower_bound,
            "diagnostics": {
                "best_fidelity_per_k": {str(k): v for k, v in sorted(search.diagnostics.get("best_fidelity_per_k", {}).items())}
            },
        }
    print(f"cz bounds for {args.state}: [{report.lower}, {report.upper}]", file=sys.stderr)
    return _report(
        "synth",
        {"state": args.state, "strategy": args.strategy, "max_k": args.max_k},
        results,
        {"witness_fidelity": 1e-6, "rank_threshold": 1e-7},
        args.seed,
        list(report.notes),
    )


def _cmd_graphstate(args) -> dict:
    oracle = F_ORACLES[args.f]
    gfs = build_graph_function_state(args.n, oracle)
    dist = classical_distribution(args.n, oracle)
    cuts = []
    for spec in args.profile:
        if spec == "fn-cut":
            cuts.append(gfs.function_cut())
        else:
            cuts.append(Cut.from_string(spec, gfs.function_qubit + 1))
    profile = graph_state_entanglement_profile(gfs, cuts)
    results = {
        "n_vertices": args.n,
        "n_graphs": gfs.n_graphs,
        "function": args.f,
        "fraction_true": gfs.fraction_true(),
        "mutual_information_bits": dist.mutual_information_bits,
        "profile": profile,
    }
    fn_label = gfs.function_cut().label()
    if fn_label in profile:
        results["fn_cut_matches_classical"] = bool(
            abs(profile[fn_label] - dist.mutual_information_bits) <= 1e-9
        )
    print(f"graph state n={args.n}, M={gfs.n_graphs}, I={dist.mutual_information_bits:.6f} bits", file=sys.stderr)
    return _report(
        "graphstate",
        {"n": args.n, "f": args.f, "profile": list(args.profile)},
        results,
        {"entropy_match": 1e-9},
        None,
        [],
    )


# ---------------------------------------------------------------------------
# parser and dispatch


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="entkit", description=__doc__)
    parser.add_argument("--version", action="version", version=f"entkit {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p):
        # global flags, accepted by every subcommand
        p.add_argument("--out", help="also write the JSON report to this path")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("measure", help="pure/two-qubit measures and distillable bounds")
    p.add_argument("--state", required=True)
    p.add_argument("--cut", default=None)
    p.add_argument("--hashing", action="store_true", help="enable the hashing lower bound")
    common(p)
    p.set_defaults(func=_cmd_measure, needs_seed=False)

    p = sub.add_parser("roof", help="convex-roof upper bound with witness decomposition")
    p.add_argument("--state", required=True)
    p.add_argument("--cut", default=None)
    p.add_argument("--ensemble-size", type=int, default=None)
    p.add_argument("--restarts", type=int, default=12)
    p.add_argument("--max-iters", type=int, default=4000)
    common(p)
    p.set_defaults(func=_cmd_roof, needs_seed=True)

    p = sub.add_parser("units", help="sigma-unit interval bounds and ratio certificates")
    p.add_argument("--sigma", required=True, help="unit record, e.g. F=2,D=1")
    p.add_argument("--rho", default=None, help="target record, e.g. F=4,D=2")
    p.add_argument("--threshold", type=float, default=1e-9)
    common(p)
    p.set_defaults(func=_cmd_units, needs_seed=False)

    p = sub.add_parser("protocol", help="run an LOCC protocol")
    p.add_argument("name", help="teleport | nonlocal-cz | reduction:<direction>")
    p.add_argument("--state", default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--verify", action="store_true", help="full-branch process tomography")
    common(p)
    p.set_defaults(func=_cmd_protocol, needs_seed=True)

    p = sub.add_parser("synth", help="CZ-cost bounds and optional exact search")
    p.add_argument("--state", required=True)
    p.add_argument("--strategy", choices=["auto", "generic"], default="auto")
    p.add_argument("--max-k", type=int, default=None)
    common(p)
    p.set_defaults(func=_cmd_synth, needs_seed="search")

    p = sub.add_parser("graphstate", help="graph-function states and their profiles")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--f", choices=sorted(F_ORACLES), default="hamiltonian")
    p.add_argument("--profile", action="append", default=None, help="fn-cut or a cut spec; repeatable")
    common(p)
    p.set_defaults(func=_cmd_graphstate, needs_seed=False)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2

    if getattr(args, "profile", "missing") is None:
        args.profile = ["fn-cut"]

    needs_seed = getattr(args, "needs_seed", False)
    if needs_seed == "search":
        needs_seed = args.max_k is not None
    if needs_seed and getattr(args, "seed", None) is None:
        print("error: this subcommand is randomized and requires an explicit --seed", file=sys.stderr)
        return 2

    try:
        report = args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValidationError as exc:
        text = render_report({"error": {"invariant": exc.invariant, "message": str(exc)}})
        sys.stdout.write(text)
        return 1
    except SynthesisError as exc:
        text = render_report({"error": {"invariant": "synthesis", "message": str(exc)}})
        sys.stdout.write(text)
        return 1

    text = render_report(report)
    sys.stdout.write(text)
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
