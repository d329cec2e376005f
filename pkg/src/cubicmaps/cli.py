"""Command-line entry point for the full pipeline.

Subcommands: dataset (generate and label), check (label one triple),
oracle (uncovered-target report or full label/oracle sweep), train,
predict, verify (exact certificates), stats.  Every successful run
appends one JSON line to the manifest file recording the subcommand,
the resolved configuration, the tool version, wall time, input/output
paths, and the SHA-256 of the dataset file it read or wrote.

Exit codes: 0 success, 1 check or certificate failure, 2 usage error.
"""

import argparse
import hashlib
import json
import os
import sys
import time

from . import __version__
from .certify import numeric_preimage, verify_case
from .dataset import (
    NO_FILTER,
    NORM_ONLY,
    STRICT_ORTHONORMAL,
    EnumConfig,
    _subspace3_key,
    default_jobs,
    generate_dataset,
    iter_vectors,
    read_output,
    stats,
    write_output,
)
from .finitefield import build_field
from .linsys import FIVE_POINT, SIX_POINT, PointConfig, make_plane, vanishing_cubics
from .network import (
    TrainConfig,
    evaluate,
    load_checkpoint,
    mean_prediction,
    save_checkpoint,
    train,
    write_history,
)
from .surjectivity import UNRULY, forward_oracle, label_plane

_CASES = {
    "five": FIVE_POINT,
    "five_point": FIVE_POINT,
    "six": SIX_POINT,
    "six_point": SIX_POINT,
}
_FILTERS = {
    "norm": NORM_ONLY,
    "norm_only": NORM_ONLY,
    "strict": STRICT_ORTHONORMAL,
    "strict_orthonormal": STRICT_ORTHONORMAL,
    "none": NO_FILTER,
}


class UsageError(Exception):
    pass


def _parse_vector(text):
    parts = [p.strip() for p in text.strip().strip("()[]").split(",")]
    if not parts or any(not p for p in parts):
        raise UsageError(f"malformed vector {text!r}; expected comma-separated integers")
    try:
        return tuple(int(p) for p in parts)
    except ValueError:
        raise UsageError(f"malformed vector {text!r}; expected comma-separated integers") from None


def parse_triple(text):
    """Parse "v;u;t" with comma-separated integer components."""
    parts = text.split(";")
    if len(parts) != 3:
        raise UsageError(f"malformed triple {text!r}; expected three ';'-separated vectors")
    return tuple(_parse_vector(p) for p in parts)


def _parse_points(text):
    return tuple(_parse_vector(p) for p in text.split(";"))


def _resolve_config(args):
    if args.case == "custom":
        if not getattr(args, "points", None):
            raise UsageError("--case custom requires --points \"x,y,z;x,y,z;...\"")
        cfg_points = PointConfig(_parse_points(args.points))
        system = vanishing_cubics(cfg_points, build_field(args.p))
        case = system
    else:
        case = _CASES[args.case]
    return EnumConfig(
        case,
        p=args.p,
        filter_mode=_FILTERS[args.filter] if hasattr(args, "filter") else NORM_ONLY,
        scan_bound=getattr(args, "scan_bound", 9),
    )


def _sha256(path):
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _write_manifest(args, config, paths, dataset_path, started):
    entry = {
        "subcommand": args.subcommand,
        "config": config,
        "version": __version__,
        "wall_time_s": round(time.time() - started, 3),
        "paths": paths,
        "dataset_sha256": _sha256(dataset_path) if dataset_path else None,
    }
    with open(args.manifest, "a") as fh:
        fh.write(json.dumps(entry, sort_keys=True) + "\n")


def _plane_for(cfg, args):
    v, u, t = parse_triple(args.triple)
    want = len(cfg.system.basis)
    if any(len(vec) != want for vec in (v, u, t)):
        raise UsageError(f"triple vectors must have length {want} for this case")
    if any(c < 0 or c >= cfg.p for vec in (v, u, t) for c in vec):
        raise UsageError(f"triple entries must lie in 0..{cfg.p - 1}")
    plane = make_plane(cfg.system, v, u, t)
    if plane is None:
        raise UsageError("triple does not span an admissible plane (rank < 3 or common factor)")
    return plane


def _iter_admissible_planes(cfg):
    """Distinct admissible planes of a system, one per coefficient subspace."""
    dim = cfg.system.dim
    seen = set()
    for v in iter_vectors(cfg.p, dim):
        for u in iter_vectors(cfg.p, dim):
            for t in iter_vectors(cfg.p, dim):
                key = _subspace3_key(cfg.p, v, u, t)
                if key is None or key in seen:
                    continue
                seen.add(key)
                plane = make_plane(cfg.system, *key)
                if plane is not None:
                    yield plane


def cmd_dataset(args):
    started = time.time()
    cfg = _resolve_config(args)
    jobs = args.jobs if args.jobs is not None else default_jobs()
    records = generate_dataset(cfg, jobs=jobs)
    write_output(records, args.out)
    summary = stats(records)
    print(f"wrote {summary['count']} records to {args.out}")
    print(f"positives: {summary['positives']}  negatives: {summary['negatives']}  "
          f"positive_rate: {summary['positive_rate']:.6f}")
    if summary["positives"] == 0:
        print("all labels are 0")
    _write_manifest(
        args,
        {"case": args.case, "p": args.p, "filter": _FILTERS[args.filter],
         "scan_bound": args.scan_bound, "jobs": jobs},
        {"out": os.path.abspath(args.out)},
        args.out,
        started,
    )
    return 0


def cmd_check(args):
    started = time.time()
    cfg = _resolve_config(args)
    plane = _plane_for(cfg, args)
    label = label_plane(plane, scan_bound=args.scan_bound, find_all=True)
    print(f"label: {label.value}")
    for a, b in label.unruly_pencils:
        print(f"unruly pencil: a={a} b={b}")
    _write_manifest(
        args,
        {"case": args.case, "p": args.p, "triple": args.triple, "scan_bound": args.scan_bound},
        {},
        None,
        started,
    )
    return 0


def cmd_oracle(args):
    started = time.time()
    cfg = _resolve_config(args)
    code = 0
    if args.all:
        planes = disagreements = 0
        for plane in _iter_admissible_planes(cfg):
            planes += 1
            label = label_plane(plane, scan_bound=args.scan_bound).value
            uncovered = forward_oracle(plane, source_bound=args.source_bound)
            if (label == 1) != (len(uncovered) == 0):
                disagreements += 1
                print(f"DISAGREEMENT: plane {plane.vectors} label {label}, "
                      f"{len(uncovered)} uncovered targets")
        print(f"planes checked: {planes}")
        print(f"{disagreements} disagreements")
        code = 1 if disagreements else 0
    else:
        if not args.triple:
            raise UsageError("oracle requires --triple or --all")
        plane = _plane_for(cfg, args)
        uncovered = forward_oracle(plane, source_bound=args.source_bound)
        print(f"uncovered targets: {len(uncovered)}")
        for point in uncovered:
            print(f"  {point}")
    _write_manifest(
        args,
        {"case": args.case, "p": args.p, "triple": args.triple, "all": args.all,
         "source_bound": args.source_bound, "scan_bound": args.scan_bound},
        {},
        None,
        started,
    )
    return code


def cmd_train(args):
    started = time.time()
    records = read_output(args.data)
    cfg = TrainConfig(epochs=args.epochs, batch_size=args.batch_size, seed=args.seed)
    model, test_idx, history = train(records, cfg)
    save_checkpoint(model, args.model_out)
    paths = {"data": os.path.abspath(args.data), "model": os.path.abspath(args.model_out)}
    if args.history_out:
        write_history(history, args.history_out)
        paths["history"] = os.path.abspath(args.history_out)
    mse = evaluate(model, records, test_idx)
    mean_pred = mean_prediction(model, records, test_idx)
    print(f"trained on {len(records) - len(test_idx)} records, held out {len(test_idx)}")
    print(f"final train mse: {history[-1][1]:.6f}")
    print(f"test mse: {mse:.6f}")
    print(f"mean prediction: {mean_pred:.6f}")
    print(f"checkpoint written to {args.model_out}")
    _write_manifest(args, cfg.to_dict(), paths, args.data, started)
    return 0


def cmd_predict(args):
    started = time.time()
    model = load_checkpoint(args.model)
    triple = parse_triple(args.triple)
    if any(len(vec) != model.params.w for vec in triple):
        raise UsageError(f"triple vectors must have length {model.params.w} for this model")
    value = model.predict_raw(triple)
    print(f"{value!r}")
    _write_manifest(
        args,
        {"model": os.path.abspath(args.model), "triple": args.triple},
        {"model": os.path.abspath(args.model)},
        None,
        started,
    )
    return 0


def cmd_verify(args):
    started = time.time()
    cases = (FIVE_POINT, SIX_POINT) if args.case == "all" else (_CASES[args.case],)
    ok = True
    for case in cases:
        cert = verify_case(case)
        print(cert.report())
        ok = ok and cert.passed
    if args.targets:
        for case in cases:
            triples = [(1.5, 1.0, -2.25), (0.0, 1.0, 0.0), (1.0, 0.0, 0.0), (-3.0, 1.0, 7.0)]
            worst = 0.0
            for target in triples:
                _, residual = numeric_preimage(case, target)
                worst = max(worst, residual)
            print(f"{case}: numeric spot checks worst residual {worst:.3e}")
            ok = ok and worst < 1e-9
    _write_manifest(args, {"case": args.case, "targets": args.targets}, {}, None, started)
    return 0 if ok else 1


def cmd_stats(args):
    started = time.time()
    records = read_output(args.data)
    summary = stats(records)
    for key in ("count", "positives", "negatives"):
        print(f"{key}: {summary[key]}")
    print(f"positive_rate: {summary['positive_rate']:.6f}")
    _write_manifest(args, {"data": os.path.abspath(args.data)}, {}, args.data, started)
    return 0


def _add_case_args(sub, with_filter=False):
    sub.add_argument("--case", choices=sorted(set(_CASES)) + ["custom"], default="five")
    sub.add_argument("--p", type=int, default=2, help="base field characteristic (prime)")
    sub.add_argument("--points", help="custom case: ';'-separated projective points \"x,y,z\"")
    sub.add_argument("--scan-bound", type=int, default=9, dest="scan_bound",
                     help="largest extension degree scanned for witnesses")
    if with_filter:
        sub.add_argument("--filter", choices=sorted(set(_FILTERS)), default="norm")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cubicmaps",
        description="Surjectivity of cubic rational self-maps of the projective plane "
                    "over finite fields: datasets, oracles, a learned score, and exact "
                    "certificates for two explicit maps.",
    )
    parser.add_argument("--manifest", default="cubicmaps-runs.jsonl",
                        help="JSON-lines file that records every run")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="subcommand", required=True)

    sub = subs.add_parser("dataset", help="enumerate triples, label planes, write output.txt")
    _add_case_args(sub, with_filter=True)
    sub.add_argument("--out", default="output.txt")
    sub.add_argument("--jobs", type=int, default=None,
                     help="worker processes (default: CUBICMAPS_JOBS or cpu count)")
    sub.set_defaults(func=cmd_dataset)

    sub = subs.add_parser("check", help="label the plane spanned by one coefficient triple")
    _add_case_args(sub)
    sub.add_argument("--triple", required=True, help="\"v;u;t\", comma-separated entries")
    sub.set_defaults(func=cmd_check)

    sub = subs.add_parser("oracle", help="uncovered-target report, or full label/oracle sweep")
    _add_case_args(sub)
    sub.add_argument("--triple", help="\"v;u;t\", comma-separated entries")
    sub.add_argument("--all", action="store_true",
                     help="sweep every admissible plane and compare labels against the oracle")
    sub.add_argument("--source-bound", type=int, default=9, dest="source_bound",
                     help="largest source extension degree for the forward oracle")
    sub.set_defaults(func=cmd_oracle)

    sub = subs.add_parser("train", help="train the surjectivity score on a dataset file")
    sub.add_argument("--data", required=True)
    sub.add_argument("--epochs", type=int, default=150)
    sub.add_argument("--batch-size", type=int, default=32, dest="batch_size")
    sub.add_argument("--seed", type=int, default=42)
    sub.add_argument("--model-out", default="model.ckpt", dest="model_out")
    sub.add_argument("--history-out", default=None, dest="history_out",
                     help="optional CSV of per-epoch training loss")
    sub.set_defaults(func=cmd_train)

    sub = subs.add_parser("predict", help="score one coefficient triple with a trained model")
    sub.add_argument("--model", required=True)
    sub.add_argument("--triple", required=True, help="\"v;u;t\", comma-separated entries")
    sub.set_defaults(func=cmd_predict)

    sub = subs.add_parser("verify", help="run the exact certificates for the explicit maps")
    sub.add_argument("--case", choices=["five", "six", "all"], default="all")
    sub.add_argument("--targets", action="store_true",
                     help="also run numeric preimage spot checks")
    sub.set_defaults(func=cmd_verify)

    sub = subs.add_parser("stats", help="summarize a dataset file")
    sub.add_argument("--data", required=True)
    sub.set_defaults(func=cmd_stats)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
