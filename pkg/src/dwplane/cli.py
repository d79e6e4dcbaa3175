"""Command-line front end.

    dwplane dw --norm mixed:inf,1 --format json
    dwplane equiv --norm lp:2
    dwplane sphere --norm regular:12 -n 12 --format csv

Engine and oracle settings not covered by a flag can be given as trailing
``key=value`` words naming an ``EngineConfig`` or ``OracleConfig`` field
(``refine_top_k=32`` or ``refineTopK=32``).

Exit status: 0 on success, 2 for a bad norm spec or bad arguments, 3 when a
computed result violates an invariant (which indicates a bug).
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import re
import sys
import time

import numpy as np

from . import birkhoff, dwengine, normspace, oracle
from .errors import ArgumentError, DWPlaneError, InternalError, SpecError

COMMANDS = ("dw", "dwb", "ib", "equiv", "ortho", "dual", "sphere", "validate")
SIG_DIGITS = 12
DEFAULT_SAMPLES = 10**5
DEFAULT_ORTHO_POINTS = 16


def _round(x: float) -> float:
    return float(f"{float(x):.{SIG_DIGITS}g}")


def _camel(name: str) -> str:
    head, *rest = name.split("_")
    return head + "".join(w[:1].upper() + w[1:] for w in rest)


def _snake(name: str) -> str:
    return re.sub(r"(?<!^)([A-Z])", r"_\1", name).lower()


def _config_dict(cfg) -> dict:
    return {_camel(f.name): getattr(cfg, f.name) for f in dataclasses.fields(cfg)}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="dwplane",
        description="Dunkl-Williams and related constants of two-dimensional normed spaces.",
    )
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--norm", required=True,
                   help="norm spec: lp:P, mixed:P,Q, polygon:x,y;..., regular:N or dual(SPEC)")
    p.add_argument("--grid", type=int, help="angle grid size (angle_grid_n)")
    p.add_argument("--t-grid", type=int, help="coarse t resolution (t_grid_n)")
    p.add_argument("--t-margin", type=float, help="t domain margin (t_margin)")
    p.add_argument("--refine", type=int, help="refinement sweeps (refine_sweeps)")
    p.add_argument("--formulation", choices=("triple", "1", "2", "3", "4", "5"), default="triple",
                   help="DW formulation used by the dw command")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.add_argument("--oracle", action="store_true",
                   help="also run the brute-force oracle (dw, dwb, ortho)")
    p.add_argument("--seed", type=int, default=0, help="random seed (validate)")
    p.add_argument("-n", type=int, default=None,
                   help="number of sphere points (sphere, ortho) or samples (validate)")
    p.add_argument("overrides", nargs="*", metavar="key=value",
                   help="EngineConfig / OracleConfig field overrides")
    return p


def _configs(args) -> tuple[dwengine.EngineConfig, oracle.OracleConfig]:
    eng: dict = {}
    orc: dict = {}
    eng_fields = {f.name: f.type for f in dataclasses.fields(dwengine.EngineConfig)}
    orc_fields = {f.name: f.type for f in dataclasses.fields(oracle.OracleConfig)}
    for item in args.overrides:
        key, sep, text = item.partition("=")
        if not sep:
            raise ArgumentError(f"override {item!r} is not of the form key=value")
        name = _snake(key.strip()).replace("-", "_")
        if name in eng_fields:
            target, ftype = eng, eng_fields[name]
        elif name in orc_fields:
            target, ftype = orc, orc_fields[name]
        else:
            raise ArgumentError(f"unknown configuration field {key!r}")
        try:
            target[name] = int(text) if ftype in (int, "int") else float(text)
        except ValueError:
            raise ArgumentError(f"bad value {text!r} for {key!r}") from None
    for flag, name in (("grid", "angle_grid_n"), ("t_grid", "t_grid_n"),
                       ("t_margin", "t_margin"), ("refine", "refine_sweeps")):
        if getattr(args, flag) is not None:
            eng[name] = getattr(args, flag)
    return dwengine.EngineConfig(**eng), oracle.OracleConfig(**orc)


def _witness(norm, formulation, res: dwengine.DWResult) -> tuple[dict, float]:
    """Round the witness and recompute the value at the rounded witness."""
    u = [_round(c) for c in res.witness.u]
    v = [_round(c) for c in res.witness.v]
    param = _round(res.witness.param)
    value = dwengine.evaluate_witness(norm, formulation, (u, v, param))
    return {"u": u, "v": v, "param": param}, _round(value)


def _result_payload(norm, res: dwengine.DWResult) -> dict:
    w, value = _witness(norm, res.formulation, res)
    return {"value": value, "witness": w, "formulation": res.formulation.value,
            "boundaryFlag": res.boundary_flag}


def run(argv: list[str] | None = None, out=None) -> int:
    """Parse ``argv``, run the command and write the report to ``out``."""
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_intermixed_args(argv)
    except SystemExit as exc:  # usage errors; argparse has already printed the message
        return int(exc.code or 0)
    start = time.perf_counter()
    try:
        eng, orc = _configs(args)
        spec = normspace.parse_norm(args.norm)
        norm = normspace.build_norm(spec)
        payload = _dispatch(args, norm, eng, orc)
    except SpecError as exc:
        print(f"dwplane: norm spec error: {exc}", file=sys.stderr)
        return 2
    except ArgumentError as exc:
        print(f"dwplane: {exc}", file=sys.stderr)
        return 2
    except InternalError as exc:
        print(f"dwplane: internal error: {exc}", file=sys.stderr)
        return 3
    except DWPlaneError as exc:  # pragma: no cover - every subclass is handled above
        print(f"dwplane: {exc}", file=sys.stderr)
        return 3
    doc = {"command": args.command, "norm": normspace.format_norm(spec)}
    doc.update(payload)
    doc["config"] = _config_dict(eng)
    if args.oracle:
        doc["oracleConfig"] = _config_dict(orc)
    doc["elapsedMs"] = int(round(1000 * (time.perf_counter() - start)))
    _emit(doc, args.format, out)
    return 0


def _dispatch(args, norm, eng, orc) -> dict:
    cmd = args.command
    if args.oracle and cmd not in ("dw", "dwb", "ortho"):
        raise ArgumentError(f"--oracle is not available for the {cmd} command")
    if cmd == "dw":
        if args.formulation == "triple":
            res = dwengine.compute_dw(norm, eng)
        else:
            res = dwengine.compute_dw_formulation(norm, int(args.formulation), eng)
        doc = _result_payload(norm, res)
        if args.oracle:
            ov = oracle.oracle_dw(norm, orc)
            doc["oracleValue"] = _round(ov)
            doc["oracleGap"] = _round(res.value - ov)
        return doc
    if cmd == "dwb":
        res = dwengine.compute_dwb(norm, eng)
        doc = _result_payload(norm, res)
        if args.oracle:
            ov = oracle.oracle_dwb(norm)
            doc["oracleValue"] = _round(ov)
            doc["oracleGap"] = _round(res.value - ov)
        return doc
    if cmd == "ib":
        return _result_payload(norm, dwengine.compute_ib(norm, eng))
    if cmd == "equiv":
        rep = dwengine.check_equivalences(norm, eng)
        doc = _result_payload(norm, rep.results["Triple"])
        doc["formulationValues"] = {k: _round(v) for k, v in rep.values.items()}
        doc["maxDeviation"] = _round(rep.max_deviation)
        doc["pass"] = rep.passed
        return doc
    if cmd == "dual":
        primal = dwengine.compute_dw(norm, eng)
        dual_norm = normspace.build_norm(normspace.DualOf(norm.spec))
        dual = dwengine.compute_dw(dual_norm, eng)
        doc = _result_payload(dual_norm, dual)
        doc["dual"] = normspace.format_norm(dual_norm.spec)
        doc["dwPrimal"] = _result_payload(norm, primal)["value"]
        doc["gap"] = _round(abs(doc["value"] - doc["dwPrimal"]))
        return doc
    if cmd == "sphere":
        pts = normspace.sphere_polyline(norm, args.n or 64)
        return {"points": [[_round(p.x1), _round(p.x2)] for p in pts]}
    if cmd == "validate":
        rep = normspace.validate_norm(norm, args.n or DEFAULT_SAMPLES, args.seed)
        return {"isNorm": rep.is_norm, "symmetryDefect": _round(rep.symmetry_defect),
                "worstTriangleViolation": _round(rep.worst_triangle_violation),
                "samplesUsed": rep.samples_used, "seed": args.seed}
    if cmd == "ortho":
        return _ortho(args, norm, eng, orc)
    raise ArgumentError(f"unknown command {cmd!r}")  # pragma: no cover


def _ortho(args, norm, eng, orc) -> dict:
    pairs = []
    worst = 0.0
    for u in normspace.sphere_polyline(norm, args.n or DEFAULT_ORTHO_POINTS):
        for pair in birkhoff.orthogonal_companions(norm, u, eng.angle_grid_n):
            holds, bdef = birkhoff.baronti_check(norm, pair.u, pair.v)
            worst = max(worst, bdef)
            row = {"u": [_round(c) for c in pair.u], "v": [_round(c) for c in pair.v],
                   "defect": _round(pair.defect), "baronti": holds, "barontiDefect": _round(bdef)}
            if args.oracle:
                m = oracle.oracle_line_min(norm, pair.u, pair.v, lambda_n=orc.lambda_n)
                row["oracleDefect"] = _round(norm(np.asarray(pair.u)) - m)
            pairs.append(row)
    return {"value": _round(worst), "pairs": pairs}


# ---------------------------------------------------------------------------
# output


def _emit(doc: dict, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(doc) + "\n")
        return
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if "points" in doc:
            w.writerow(["x1", "x2"])
            w.writerows(doc["points"])
        elif "pairs" in doc:
            w.writerow(["u1", "u2", "v1", "v2", "defect", "baronti", "baronti_defect"])
            for r in doc["pairs"]:
                w.writerow([*r["u"], *r["v"], r["defect"], r["baronti"], r["barontiDefect"]])
        else:
            w.writerow(["key", "value"])
            for k, v in _flatten(doc):
                w.writerow([k, v])
        out.write(buf.getvalue())
        return
    _text(doc, out)


def _flatten(doc, prefix=""):
    for k, v in doc.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            yield from _flatten(v, key + ".")
        elif isinstance(v, list):
            yield key, " ".join(str(x) for x in v)
        else:
            yield key, v


def _text(doc: dict, out) -> None:
    cmd = doc["command"]
    out.write(f"{cmd} {doc['norm']}\n")
    if "points" in doc:
        for x1, x2 in doc["points"]:
            out.write(f"  {x1:+.12g} {x2:+.12g}\n")
    elif "pairs" in doc:
        for r in doc["pairs"]:
            mark = "holds" if r["baronti"] else "FAILS"
            out.write(f"  u={r['u']} v={r['v']} defect={r['defect']:.3g} "
                      f"baronti {mark} ({r['barontiDefect']:.3g})\n")
        out.write(f"  worst Baronti defect: {doc['value']:.6g}\n")
    elif cmd == "validate":
        out.write(f"  norm: {'yes' if doc['isNorm'] else 'NO'}  symmetry defect "
                  f"{doc['symmetryDefect']:.3g}  worst triangle violation "
                  f"{doc['worstTriangleViolation']:.3g}  ({doc['samplesUsed']} samples)\n")
    else:
        out.write(f"  value          {doc['value']:.12g}\n")
        w = doc["witness"]
        out.write(f"  witness        u={w['u']} v={w['v']} param={w['param']:.12g}\n")
        out.write(f"  boundary flag  {doc['boundaryFlag']}\n")
        for key in ("dwPrimal", "gap", "maxDeviation", "pass", "oracleValue", "oracleGap"):
            if key in doc:
                out.write(f"  {key:<14} {doc[key]}\n")
        for k, v in doc.get("formulationValues", {}).items():
            out.write(f"    {k:<6} {v:.12g}\n")
    out.write(f"  elapsed        {doc['elapsedMs']} ms\n")


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
