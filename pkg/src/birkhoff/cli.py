"""Command-line entry point.

Exit codes: 0 on success (certificates of nonexistence included), 1 on a
domain error with a JSON error record on stdout, 2 on I/O or parse errors.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import coorient as co
from . import monodromy as mono
from . import torus_oracle as to
from .birkhoff_surface import build_skeleton, gamma_f, gamma_v
from .cohomology import Certificate, class_of, construct_coorientation, load_cochain
from .errors import BirkhoffError
from .surface_map import DATA_DIR, MultiCurveMap, build_map

log = logging.getLogger("birkhoff")

LOG_LEVELS = {"quiet": logging.WARNING, "info": logging.INFO, "debug": logging.DEBUG}


class InputError(Exception):
    """Unreadable or malformed input file (exit code 2)."""


# -- input helpers -------------------------------------------------------------

def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def load_map_arg(arg: str) -> MultiCurveMap:
    """A map file path, or the name of a bundled map (T1, T6, G2)."""
    p = Path(arg)
    if not p.exists() and (DATA_DIR / f"{arg}.json").exists():
        p = DATA_DIR / f"{arg}.json"
    data = _read_json(str(p))
    if not isinstance(data, dict):
        raise InputError("map file must hold a JSON object")
    return build_map(data)


def load_eta_arg(arg: str, m: MultiCurveMap) -> co.Coorientation:
    """A coorientation file, or a literal string of 0/1 bits."""
    if set(arg) <= {"0", "1"} and not Path(arg).exists():
        bits = [int(c) for c in arg]
    else:
        data = _read_json(arg)
        if not isinstance(data, dict) or not isinstance(data.get("bits"), list):
            raise InputError("coorientation file needs a 'bits' list")
        bits = data["bits"]
        if any(b not in (0, 1) for b in bits):
            raise InputError("coorientation bits must be 0 or 1")
    if len(bits) != m.num_edges:
        raise InputError(f"expected {m.num_edges} bits, got {len(bits)}")
    return co.Coorientation.from_bits(bits)


def parse_representation(arg: str | None, m: MultiCurveMap, eta: co.Coorientation):
    if arg is None or arg == "first":
        return mono.first_representation(m, eta)
    if arg.isdigit():
        reps = list(co.representations(m, eta, limit=int(arg) + 1))
        if int(arg) >= len(reps):
            raise InputError(f"only {len(reps)} representations exist")
        return reps[int(arg)]
    # comma list such as f0,v2,f1,...
    out = []
    for tok in arg.split(","):
        tok = tok.strip()
        if len(tok) < 2 or tok[0] not in "fv" or not tok[1:].isdigit():
            raise InputError(f"bad representation token {tok!r}")
        out.append((tok[0], int(tok[1:])))
    return out


def _emit(args, payload: dict, human: list[str] | None = None) -> None:
    if args.out:
        Path(args.out).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    if args.json or human is None:
        print(json.dumps(payload, indent=2))
    else:
        print("\n".join(human))


# -- subcommands -----------------------------------------------------------------

def cmd_validate(args) -> int:
    m = load_map_arg(args.map)
    summary = m.summary()
    human = [f"{k}: {v}" for k, v in summary.items()]
    payload: dict = {"map": summary}
    if args.coorientation:
        eta = load_eta_arg(args.coorientation, m)
        co.check_eulerian(m, eta)
        ok, walk = co.acyclicity(m, eta)
        report = {
            "eulerian": True,
            "vertices": co.vertex_report(m, eta),
            "sinks": co.sink_faces(m, eta) if ok else [],
            "acyclic": ok,
            "witness": None if ok else co.witness_faces(m, walk),
        }
        payload["coorientation"] = report
        human.append("vertex types: " + ", ".join(f"{r['vertex']}:{r['type']}" for r in report["vertices"]))
        human.append(f"acyclic: {ok}")
        human.append(f"sinks: {report['sinks']}" if ok else f"witness cycle (faces): {report['witness']}")
    _emit(args, payload, human)
    return 0


def _classify(item):
    m, bits = item
    return co.is_acyclic(m, co.Coorientation(bits))


def cmd_enumerate(args) -> int:
    m = load_map_arg(args.map)
    etas = co.enumerate_eulerian(m)
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            flags = list(ex.map(_classify, [(m, e.bits) for e in etas], chunksize=16))
    else:
        flags = [co.is_acyclic(m, e) for e in etas]
    rows = [{"bits": list(e.bits), "acyclic": a} for e, a in zip(etas, flags)]
    if args.acyclic_only:
        rows = [r for r in rows if r["acyclic"]]
    if args.limit is not None:
        rows = rows[: args.limit]
    payload = {"map": m.name, "eulerian": len(etas), "acyclic": sum(flags), "coorientations": rows}
    human = [f"eulerian: {len(etas)}  acyclic: {sum(flags)}"]
    human += ["".join(map(str, r["bits"])) + ("  acyclic" if r["acyclic"] else "") for r in rows]
    _emit(args, payload, human)
    return 0


def cmd_construct(args) -> int:
    m = load_map_arg(args.map)
    data = _read_json(args.cls)
    if not isinstance(data, dict) or not isinstance(data.get("weights"), list):
        raise InputError("class file needs a 'weights' list")
    omega = load_cochain(data)
    res = construct_coorientation(m, omega)
    if isinstance(res, Certificate):
        payload = res.to_dict()
        human = [f"no Eulerian coorientation: cycle {payload['cycle']} has length {res.length} < omega {res.omega}"]
    else:
        payload = res.to_dict(m)
        human = ["".join(map(str, res.bits))]
    _emit(args, payload, human)
    return 0


def cmd_flip_run(args) -> int:
    m = load_map_arg(args.map)
    eta = load_eta_arg(args.coorientation, m)
    if args.order:
        order = [int(x) for x in args.order.split(",")]
    else:
        order = next(co.partial_representations(m, eta, limit=1))
    seq = co.flip_algorithm(m, eta, order)
    payload = {
        "order": order,
        "steps": [{"flipped": f, "bits": list(x.bits)} for f, x in zip(order, seq[1:])],
        "returned": seq[-1] == eta,
    }
    human = [f"{k + 1}: flip face {f} -> {''.join(map(str, x.bits))}" for k, (f, x) in enumerate(zip(order, seq[1:]))]
    human.append(f"returned to start: {payload['returned']}")
    _emit(args, payload, human)
    return 0


def cmd_surface(args) -> int:
    m = load_map_arg(args.map)
    eta = load_eta_arg(args.coorientation, m)
    model = build_skeleton(m, eta)
    ok = co.is_acyclic(m, eta)

    def darts(curve):
        return [m.dart_ids[n] for n in curve.nodes(model.ribbon)]

    curves = {}
    for v in range(m.num_vertices):
        c = gamma_v(model, v)
        curves[c.name] = {"darts": darts(c), "class": list(c.vector), "simple": c.simple}
    if ok:
        for f in range(m.num_faces):
            c = gamma_f(model, f)
            curves[c.name] = {"darts": darts(c), "class": list(c.vector), "simple": c.simple}
    payload = {**model.to_dict(), "acyclic": ok, "curves": curves, "pairing": model.pairing}
    human = [
        f"euler characteristic: {model.euler_characteristic}",
        f"boundary components: {model.num_boundary}",
        f"genus: {model.genus}",
    ]
    human += [f"{name}: {c['darts']}" for name, c in curves.items()]
    human.append("pairing:")
    human += ["  " + " ".join(f"{x:3d}" for x in row) for row in model.pairing]
    _emit(args, payload, human)
    return 0


def cmd_word(args) -> int:
    m = load_map_arg(args.map)
    eta = load_eta_arg(args.coorientation, m)
    rep = parse_representation(args.representation, m, eta)
    word = mono.Monodromy(m, eta).word(rep)
    lines = word.lines()
    _emit(args, {"word": lines, "labels": [list(x) for x in word.labels]}, lines)
    return 0


def cmd_matrix(args) -> int:
    m = load_map_arg(args.map)
    eta = load_eta_arg(args.coorientation, m)
    rep = parse_representation(args.representation, m, eta)
    M = mono.Monodromy(m, eta).matrix(rep)
    payload = {
        "rows": [[int(x) for x in row] for row in M],
        "charpoly": mono.charpoly(M),
        "trace": int(sum(M[i, i] for i in range(len(M)))),
    }
    _emit(args, payload)
    return 0


def cmd_compare(args) -> int:
    m = load_map_arg(args.map)
    eta = load_eta_arg(args.eta, m)
    nu = load_eta_arg(args.nu, m)
    rep = mono.hurwitz_compare(m, eta, nu)
    payload = {
        "flip_path": rep["flip_path"],
        "moves_preserve_product": rep["moves_preserve_product"],
        "charpoly_eta": rep["charpoly_eta"],
        "charpoly_nu": rep["charpoly_nu"],
        "charpoly_equal": rep["charpoly_equal"],
        "stepwise_charpoly_equal": rep["stepwise_charpoly_equal"],
    }
    if args.common_model:
        cm = mono.common_model_word(m, eta, nu)
        payload["common_model"] = {
            "found": cm["found"],
            "word": cm["word"].lines() if cm["found"] else None,
            "cases": cm["cases"],
            "tried": cm["tried"],
        }
    _emit(args, payload)
    return 0


def cmd_connectivity(args) -> int:
    m = load_map_arg(args.map)
    if args.cls:
        data = _read_json(args.cls)
        if not isinstance(data, dict) or not isinstance(data.get("weights"), list):
            raise InputError("class file needs a 'weights' list")
        omega = load_cochain(data)
    else:
        omega = class_of(m, load_eta_arg(args.coorientation, m))
    _emit(args, mono.flip_connectivity(m, omega))
    return 0


def _oracle_chunk(job):
    p, q, bits, samples, horizon, seed = job
    model = to.embed_grid(p, q)
    return to.verify_birkhoff(model, co.Coorientation(bits), samples=samples, horizon=horizon, seed=seed)


def cmd_oracle(args) -> int:
    p, q = args.grid
    model = to.embed_grid(p, q)
    eta = load_eta_arg(args.coorientation, model.map)
    co.check_eulerian(model.map, eta)
    horizon = Fraction(args.horizon)
    jobs = max(1, args.jobs)
    if jobs == 1:
        verdict = to.verify_birkhoff(model, eta, args.samples, horizon, args.seed)
        payload = verdict.to_dict()
    else:
        sizes = [args.samples // jobs + (i < args.samples % jobs) for i in range(jobs)]
        work = [(p, q, eta.bits, n, horizon, args.seed * 1000 + i) for i, n in enumerate(sizes)]
        with ProcessPoolExecutor(jobs) as ex:
            parts = list(ex.map(_oracle_chunk, work))
        payload = _merge_verdicts(parts)
    payload["acyclic"] = co.is_acyclic(model.map, eta)
    payload["agrees"] = payload["acyclic"] == payload["bounded"]
    if args.factorization and payload["acyclic"]:
        order = next(co.partial_representations(model.map, eta, limit=1))
        fv = to.verify_factorization(model, eta, order, samples=args.samples, seed=args.seed, horizon=horizon)
        payload["factorization"] = {
            "ok": fv.ok,
            "samples": fv.samples,
            "skipped": fv.skipped,
            "failures": len(fv.failures),
            "max_return_time": float(fv.max_time) if fv.max_time is not None else None,
        }
    _emit(args, payload)
    return 0


def _merge_verdicts(parts) -> dict:
    out = parts[0].to_dict()
    times = [v.max_time for v in parts if v.max_time is not None]
    out["max_return_time"] = float(max(times)) if times else None
    out["within_bound"] = all(v.within_bound for v in parts)
    out["samples"] = sum(v.samples for v in parts)
    out["skipped"] = sum(v.skipped for v in parts)
    out["no_return_within_horizon"] = sum(v.escapes for v in parts)
    out["bounded"] = all(v.bounded for v in parts)
    hist: dict[str, int] = {}
    for v in parts:
        for k, c in v.histogram.items():
            hist[k] = hist.get(k, 0) + c
    out["histogram"] = dict(sorted(hist.items(), key=lambda kv: float(kv[0])))
    return out


# -- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="birkhoff", description="Birkhoff sections from Eulerian coorientations.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print JSON instead of text")
    common.add_argument("--out", help="also write the JSON report to this file")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1, help="worker processes for enumerate/oracle")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check a map (and optionally a coorientation)")
    p.add_argument("map")
    p.add_argument("coorientation", nargs="?")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("enumerate", parents=[common], help="list Eulerian coorientations")
    p.add_argument("map")
    p.add_argument("--acyclic-only", action="store_true")
    p.add_argument("--limit", type=int)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("construct", parents=[common], help="coorientation in a class, or a certificate")
    p.add_argument("map")
    p.add_argument("--class", dest="cls", required=True, help="cochain file {'weights': [...]}")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("flip-run", parents=[common], help="run the flip algorithm")
    p.add_argument("map")
    p.add_argument("coorientation")
    p.add_argument("--order", help="comma-separated face order (default: first extension)")
    p.set_defaults(func=cmd_flip_run)

    p = sub.add_parser("surface", parents=[common], help="section surface invariants and curves")
    p.add_argument("map")
    p.add_argument("coorientation")
    p.set_defaults(func=cmd_surface)

    for name, func, help_ in (("word", cmd_word, "twist word"), ("matrix", cmd_matrix, "monodromy matrix")):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("map")
        p.add_argument("coorientation")
        p.add_argument("--representation", default="first", help="'first', an index, or a list like f0,v1,...")
        p.set_defaults(func=func)

    p = sub.add_parser("compare", parents=[common], help="Hurwitz comparison of two coorientations")
    p.add_argument("map")
    p.add_argument("eta")
    p.add_argument("nu")
    p.add_argument("--common-model", action="store_true", help="also search a word in the first model's curves")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("connectivity", parents=[common], help="flip-graph components of a class")
    p.add_argument("map")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--class", dest="cls")
    g.add_argument("--coorientation")
    p.set_defaults(func=cmd_connectivity)

    p = sub.add_parser("oracle", parents=[common], help="flat-torus flow check")
    p.add_argument("--grid", type=int, nargs=2, metavar=("P", "Q"), required=True)
    p.add_argument("--coorientation", required=True)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--horizon", default="100")
    p.add_argument("--factorization", action="store_true", help="also check the partial-return factorisation")
    p.set_defaults(func=cmd_oracle)
    return parser


def run(argv=None) -> int:
    level = LOG_LEVELS.get(os.environ.get("BIRKHOFF_LOG", "quiet"), logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    log.info("running %s", args.command)
    try:
        return args.func(args)
    except BirkhoffError as exc:
        print(json.dumps(exc.record()))
        return 1
    except InputError as exc:
        print(json.dumps({"error": "input", "message": str(exc)}))
        return 2
    except OSError as exc:
        print(json.dumps({"error": "io", "message": str(exc)}))
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
