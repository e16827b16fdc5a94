"""Command-line front end.

Exit status: 0 on success, 1 when a contract is breached (timing rule,
latency bound, trace parse, bad configuration), 2 for usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

from . import bounds, experiments
from .controllers import CONTROLLERS, ONE_PER_CYCLE, SAME_CYCLE, make_controller
from .controllers.base import SLOT, WORK_CONSERVING
from .device import load_device
from .mapping import Layout
from .request import RECORD_COLUMNS, Op, record_row
from .simulate import DATA_END, DATA_START, ClosedLoopViolation, simulate
from .timing import ConfigError, TimingViolation
from .workload import MODES, GeneratorParams, Pattern, TraceParseError, generate, read_trace, write_trace

OUTPUT_DIR_ENV = "RLDSIM_OUTPUT_DIR"


class ContractError(Exception):
    pass


def _out_path(path):
    """Resolve relative artifact paths against $RLDSIM_OUTPUT_DIR when set."""
    if path is None or path == "-":
        return path
    p = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    p.parent.mkdir(parents=True, exist_ok=True)
    return p


def _emit(text: str, path) -> None:
    path = _out_path(path)
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _csv(rows, header) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _pes_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        return (int(lo), int(hi)) if sep else (1, int(lo))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or A..B, got {text!r}") from None


def _load_run_config(path) -> dict:
    cfg = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        key = key.strip().replace("-", "_")
        value = value.strip()
        cfg[key] = int(value) if key in ("pes", "ranks", "length", "gap", "seed", "spacing") else value
    if "hit_ratio" in cfg:
        cfg["hit_ratio"] = float(cfg["hit_ratio"])
    return cfg


def _add_generator_flags(p, pattern_default=None):
    p.add_argument("--pattern", choices=[x.value for x in Pattern], default=pattern_default)
    p.add_argument("--length", type=int, default=256)
    p.add_argument("--hit-ratio", type=float, default=0.35)
    p.add_argument("--gap", type=int, default=0)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--spacing", type=int, default=2, help="max random increment between arrivals")
    p.add_argument("--read-fraction", type=float, default=0.5)
    p.add_argument("--mode", choices=MODES, default="closed-loop")


def _params_from(args, device: str) -> GeneratorParams:
    return GeneratorParams(Pattern(args.pattern), args.pes, args.length, gap=args.gap, seed=args.seed,
                           hit_ratio=args.hit_ratio, spacing=args.spacing,
                           read_fraction=args.read_fraction, device=device,
                           ranks=getattr(args, "ranks", 1), mode=args.mode)


def _trace_from(args, device: str):
    if args.trace:
        return read_trace(args.trace)
    if not args.pattern:
        raise ConfigError("give --trace FILE or --pattern")
    return generate(_params_from(args, device))


def cmd_bounds(args) -> int:
    if args.controller != "rldc" or args.device != "rldram3":
        raise ConfigError("analytical bounds exist for --device rldram3 --controller rldc only")
    device = load_device("rldram3", timing_file=args.timing)
    op = Op.READ if args.op == "read" else Op.WRITE
    report = bounds.bound_report(Layout(args.layout), args.pes, op, device)
    _emit(_json(report.to_json()), args.out)
    return 0


def cmd_scenarios(args) -> int:
    from .device import parse_timing_file

    # load once up front so unknown constraint names are rejected
    period = load_device(args.device, timing_file=args.timing).clock_period_ns
    params = parse_timing_file(args.timing) if args.timing else None
    lat = experiments.scenario_latencies(args.device, params)
    rows = [[sid, v, f"{v * period:.1f}"] for sid, v in lat.items()]
    _emit(_csv(rows, ["scenario_id", "latency_cycles", "latency_ns"]), args.out)
    vw = experiments.suite_vw(lat)
    print(f"{args.device}: BCL={min(lat.values())} WCL={max(lat.values())} VW={vw:.1f}%", file=sys.stderr)
    if args.figure:
        from .plotting import scenario_chart

        scenario_chart(args.device, lat, _out_path(args.figure), period)
    if args.verify:
        ref = experiments.scenario_latencies(args.device, params, oracle=True)
        bad = [sid for sid in lat if lat[sid] != ref[sid]]
        if bad:
            raise ContractError(f"engine and oracle disagree on scenarios {', '.join(bad)}")
        print("oracle: all scenarios agree", file=sys.stderr)
    return 0


def cmd_gen_trace(args) -> int:
    trace = generate(_params_from(args, args.device))
    out = _out_path(args.out)
    if out is None or out == "-":
        buf = Path("/dev/stdout")
        write_trace(trace, buf)
    else:
        write_trace(trace, out)
    return 0


def cmd_simulate(args) -> int:
    _, device_name = CONTROLLERS[args.controller]
    if args.device and args.device != device_name:
        raise ConfigError(f"{args.controller} pairs with {device_name}, not {args.device}")
    layout = Layout(args.layout)
    device = load_device(device_name, ranks=args.ranks, timing_file=args.timing)
    kw = {"arbitration": args.arbitration}
    if args.controller == "rldc":
        kw["scan"] = args.scan
    controller = make_controller(args.controller, args.pes, layout, device=device, **kw)
    trace = _trace_from(args, device_name)
    result = simulate(trace, controller, release_on=args.release_on)

    bound = None
    if args.controller == "rldc" and trace.closed_loop and args.scan == SAME_CYCLE and args.arbitration == SLOT:
        bound = lambda rec: bounds.wcl(layout, args.pes, rec.op, device)  # noqa: E731
    summary = bounds.summarize(result.records, bound=bound)
    period = device.clock_period_ns
    doc = {
        "device": device.name,
        "controller": args.controller,
        "layout": layout.value,
        "pes": args.pes,
        "mode": trace.mode,
        "cycles": result.cycles,
        "timing_violations": len(result.violations),
        "bound_checked": bound is not None,
    }
    if bound is not None:
        doc["wcl_bound_read"] = bounds.wcl(layout, args.pes, Op.READ, device)
        doc["wcl_bound_write"] = bounds.wcl(layout, args.pes, Op.WRITE, device)
    doc.update(summary.to_json(period))

    if args.records:
        rows = [record_row(r, period) for r in result.records]
        _emit(_csv(rows, RECORD_COLUMNS), args.records)
    _emit(_json(doc), args.summary)
    if args.figure:
        from .plotting import latency_histogram

        b = doc.get("wcl_bound_read") if bound is not None else None
        latency_histogram(result.records, _out_path(args.figure), b,
                          f"{args.controller} {layout.value} N={args.pes}")
    if result.violations:
        raise ContractError(f"{len(result.violations)} timing violations, first: {result.violations[0]}")
    if summary.exceedances:
        raise ContractError(f"{len(summary.exceedances)} requests exceed the analytical bound")
    return 0


def cmd_compare(args) -> int:
    trace = _trace_from(args, "rldram3")
    table, results = experiments.compare(trace, Layout(args.layout), args.pes, args.ranks)
    rows = [[r["metric"], r["ddr3"], r["rldram3"], r["ratio"]] for r in table]
    _emit(_csv(rows, ["metric", "ddr3", "rldram3", "ratio"]), args.out)
    if args.figure:
        from .plotting import compare_chart

        compare_chart([r for r in table if r["metric"].endswith("_cycles")], _out_path(args.figure))
    bad = {k: r.violations for k, r in results.items() if r.violations}
    if bad:
        raise ContractError(f"timing violations in {', '.join(bad)}")
    return 0


def cmd_sweep(args) -> int:
    lo, hi = args.pes
    rows = experiments.sweep(hi, lo)
    out = [[row.get(c, "") for c in experiments.SWEEP_COLUMNS] for row in rows]
    _emit(_csv(out, experiments.SWEEP_COLUMNS), args.out)
    if args.figure:
        from .plotting import sweep_chart

        sweep_chart(rows, _out_path(args.figure))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rldsim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="analytical WCL/BCL/VW as JSON")
    p.add_argument("--device", default="rldram3")
    p.add_argument("--controller", default="rldc")
    p.add_argument("--layout", choices=[x.value for x in Layout], default="share")
    p.add_argument("--pes", type=int, default=4)
    p.add_argument("--op", choices=["read", "write"], default="read")
    p.add_argument("--timing", help="plain-text constraint table overriding the defaults")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("scenarios", help="two-request access scenario latencies as CSV")
    p.add_argument("--device", choices=list(experiments.SUITES), required=True)
    p.add_argument("--timing")
    p.add_argument("--out")
    p.add_argument("--figure", help="write a bar chart (PNG/PDF/SVG by extension)")
    p.add_argument("--verify", action="store_true", help="cross-check against the exhaustive oracle")
    p.set_defaults(func=cmd_scenarios)

    p = sub.add_parser("gen-trace", help="write a synthetic trace")
    p.add_argument("--pes", type=int, required=True)
    p.add_argument("--device", choices=list(experiments.SUITES), default="rldram3")
    p.add_argument("--ranks", type=int, default=1)
    p.add_argument("--out")
    _add_generator_flags(p, pattern_default="uniform")
    p.set_defaults(func=cmd_gen_trace)

    p = sub.add_parser("simulate", help="run a trace; write per-request records and a summary")
    p.add_argument("--config", help="key=value run configuration file")
    p.add_argument("--controller", choices=list(CONTROLLERS), default="rldc")
    p.add_argument("--device")
    p.add_argument("--layout", choices=[x.value for x in Layout], default="share")
    p.add_argument("--pes", type=int, default=4)
    p.add_argument("--ranks", type=int, default=1)
    p.add_argument("--timing")
    p.add_argument("--scan", choices=[SAME_CYCLE, ONE_PER_CYCLE], default=SAME_CYCLE)
    p.add_argument("--arbitration", choices=[SLOT, WORK_CONSERVING], default=SLOT)
    p.add_argument("--trace")
    _add_generator_flags(p)
    p.add_argument("--release-on", choices=[DATA_START, DATA_END], default=DATA_START,
                   help="closed-loop: event that frees a PE for its next request")
    p.add_argument("--records", help="per-request latency CSV")
    p.add_argument("--summary", help="run summary JSON (default: stdout)")
    p.add_argument("--figure", help="latency histogram")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="same trace through ddr-close-page and rldc")
    p.add_argument("--layout", choices=[x.value for x in Layout], default="share")
    p.add_argument("--pes", type=int, default=4)
    p.add_argument("--ranks", type=int, default=1)
    p.add_argument("--trace")
    _add_generator_flags(p)
    p.add_argument("--out")
    p.add_argument("--figure")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("sweep", help="per-N bound table under adversarial traces")
    p.add_argument("--pes", type=_pes_range, default=(1, 8), help="N or A..B")
    p.add_argument("--out")
    p.add_argument("--figure")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    args = parser.parse_args(argv)
    try:
        if getattr(args, "config", None):
            cfg = _load_run_config(args.config)
            known = vars(args)
            unknown = [k for k in cfg if k not in known]
            if unknown:
                raise ConfigError(f"unknown configuration key(s): {', '.join(unknown)}")
            # explicit flags win over the file
            sub = parser._subparsers._group_actions[0].choices[args.command]
            sub.set_defaults(**cfg)
            args = parser.parse_args(argv)
        return args.func(args)
    except (ConfigError, TraceParseError, ContractError, TimingViolation, ClosedLoopViolation,
            ValueError) as exc:
        print(f"rldsim {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
