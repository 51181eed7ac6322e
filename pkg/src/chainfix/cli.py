"""Batch front end: load instances, run a pipeline, write a deterministic JSON report.

Exit status 0 when every check passes, 1 when a check fails, 2 on bad input.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Any, Dict, List, Optional

from . import algebra, complexes, index as index_mod, multivalued, realization
from .algebra import QQ, ZZ, Ring, fmt_scalar, to_jsonable

COMMANDS = ("verify-complex", "homology", "lefschetz", "realize", "check-thm2",
            "index", "axioms", "multi", "modp")

BUILTIN_COMPLEXES = {
    "point": complexes.point_complex,
    "segment": complexes.segment,
    "path3": complexes.path3,
    "hollow-triangle": complexes.hollow_triangle,
    "hollow-hexagon": lambda: complexes.polygon(6),
    "hexagon-disk": complexes.hexagon_disk,
    "octahedron": complexes.octahedron,
}

BUILTIN_MAPS = {
    "octahedron-identity": ("octahedron", {v: v for v in range(6)}),
    "octahedron-antipode": ("octahedron", {v: v ^ 1 for v in range(6)}),
    "hexagon-rotation": ("hexagon-disk", {**{i: (i + 2) % 6 for i in range(6)}, 6: 6}),
    "hollow-hexagon-half-turn": ("hollow-hexagon", {i: (i + 3) % 6 for i in range(6)}),
    "path-reflection": ("path3", {0: 2, 1: 1, 2: 0}),
}


class InputError(ValueError):
    pass


# ---------------------------------------------------------------- loading

def _load_json_ref(ref, base_dir: str):
    if isinstance(ref, str) and (ref.endswith(".json") or os.sep in ref):
        path = ref if os.path.isabs(ref) else os.path.join(base_dir, ref)
        try:
            with open(path) as fh:
                return json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read {ref}: {exc}") from None
    return ref


def load_complex(ref, base_dir: str = ".") -> complexes.SimplicialComplex:
    ref = _load_json_ref(ref, base_dir)
    if isinstance(ref, str):
        if ref not in BUILTIN_COMPLEXES:
            raise InputError(f"unknown complex {ref!r}")
        return BUILTIN_COMPLEXES[ref]()
    if isinstance(ref, dict):
        if ref.get("kind") == "convex-body":
            raise InputError("expected a simplicial complex, got a convex body")
        try:
            return complexes.SimplicialComplex.from_json(ref)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad complex: {exc}") from None
    raise InputError("complex must be a builtin name, a file or an inline object")


def load_map(cfg: dict, base_dir: str):
    """(complex, vertex map) from {"map": name} or {"complex": ..., "map": {v: w}}."""
    m = _load_json_ref(cfg.get("map"), base_dir)
    if isinstance(m, str):
        if m not in BUILTIN_MAPS:
            raise InputError(f"unknown map {m!r}")
        name, vm = BUILTIN_MAPS[m]
        return load_complex(name), dict(vm), m
    if isinstance(m, dict):
        x = load_complex(cfg.get("complex"), base_dir)
        try:
            vm = {int(k): int(v) for k, v in m.items()}
        except (TypeError, ValueError):
            raise InputError("map must send integer vertices to integer vertices") from None
        if set(vm) != set(x.vertices):
            raise InputError("map must be defined on every vertex")
        return x, vm, "f"
    raise InputError("missing map")


def load_body(ref, base_dir: str = ".") -> realization.ConvexBody:
    ref = _load_json_ref(ref, base_dir)
    if ref in (None, "triangle"):
        return realization.triangle_body()
    if isinstance(ref, dict):
        try:
            return realization.ConvexBody.from_json(ref)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad convex body: {exc}") from None
    raise InputError(f"unknown body {ref!r}")


def antipodal_multimap_json() -> dict:
    octa = complexes.octahedron().to_json()
    return {"name": "F", "domain": octa, "target": octa,
            "branches": [{str(v): v for v in range(6)}, {str(v): v ^ 1 for v in range(6)}],
            "values": {}, "flags": {"route": "continuous"}}


def load_multimap(ref, base_dir: str = "."):
    ref = _load_json_ref(ref, base_dir)
    if ref in (None, "antipodal"):
        ref = antipodal_multimap_json()
    if not isinstance(ref, dict):
        raise InputError(f"unknown multimap {ref!r}")
    try:
        return multivalued.MultiMap.from_json(ref), ref.get("flags", {})
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad multimap: {exc}") from None


def _fraction(x, what: str) -> Fraction:
    try:
        return Fraction(str(x))
    except (ValueError, ZeroDivisionError):
        raise InputError(f"{what} must be an exact rational, got {x!r}") from None


def _region(x: complexes.SimplicialComplex, cells) -> index_mod.OpenRegion:
    if cells is None:
        return index_mod.OpenRegion.whole(x)
    try:
        return index_mod.OpenRegion.open_star(x, [tuple(c) for c in cells])
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad region: {exc}") from None


# ---------------------------------------------------------------- commands

def cmd_verify_complex(cfg, ring, seed, base_dir):
    x = load_complex(cfg.get("complex", cfg.get("input")), base_dir)
    rep = algebra.verify_complex(x.chain_complex(ring or ZZ))
    return {"ok": rep.ok, "cells": len(x), "dim": x.dim,
            "violation": to_jsonable(rep.violation) if rep.violation else None}


def cmd_homology(cfg, ring, seed, base_dir):
    x = load_complex(cfg.get("complex", cfg.get("input")), base_dir)
    ring = ring or ZZ
    h = algebra.homology(x.chain_complex(ring))
    over_z = algebra.homology(x.chain_complex(ZZ))
    rank_betti = algebra.betti_via_rank(x.chain_complex(QQ))
    oracle = {q: v for q, v in over_z.ranks.items()} == rank_betti
    return {"ok": oracle, "ring": str(ring), "betti": list(h.betti(x.dim)),
            "torsion": {str(q): t for q, t in sorted(h.torsion.items())},
            "oracle": {"rank_betti": [rank_betti.get(q, 0) for q in range(x.dim + 1)],
                       "smith_free_ranks": [over_z.ranks.get(q, 0) for q in range(x.dim + 1)],
                       "agree": oracle}}


def cmd_lefschetz(cfg, ring, seed, base_dir):
    x, vm, name = load_map(cfg, base_dir)
    tower = index_mod.Tower(x)
    try:
        f = index_mod.SimplicialMap(tower, vm, name)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    ring = ring or QQ
    chain = f.chain_map(ring)
    lam = algebra.lefschetz_number(algebra.induced_on_homology(chain))
    chain_level = algebra.lefschetz_number(chain)
    out = {"map": name, "ring": str(ring), "lambda": fmt_scalar(lam),
           "chain_level": fmt_scalar(chain_level), "hopf_trace": lam == chain_level}
    if "expect" in cfg:
        out["expected"] = str(cfg["expect"])
        out["ok"] = out["hopf_trace"] and _fraction(cfg["expect"], "expect") == lam
    else:
        out["ok"] = out["hopf_trace"]
    return out


def _params(cfg, body):
    eps = _fraction(cfg.get("epsilon", "1/4"), "epsilon")
    try:
        return realization.choose_parameters(body, eps)
    except realization.RealizationError as exc:
        raise InputError(str(exc)) from None


def _build(body, params):
    try:
        return realization.build_realization(body, params.eps, params)
    except realization.RealizationError as exc:
        raise InputError(f"{exc} {to_jsonable(exc.witness) if exc.witness else ''}".strip()) from None


def cmd_realize(cfg, ring, seed, base_dir):
    body = load_body(cfg.get("body"), base_dir)
    params = _params(cfg, body)
    bundle = _build(body, params)
    return {"ok": all(c.holds for c in bundle.certificates), "params": params.to_json(),
            "sizes": bundle.sizes(), "certificates": [c.to_json() for c in bundle.certificates]}


def cmd_check_thm2(cfg, ring, seed, base_dir):
    body = load_body(cfg.get("body"), base_dir)
    params = _params(cfg, body)
    bundle = _build(body, params)
    realization.audit_chain_maps(bundle, seed=seed)
    compact = cfg.get("compact")
    if compact is not None:
        compact = [tuple(_fraction(c, "compact point") for c in p) for p in compact]
    conditions = realization.verify_realization_conditions(bundle, compact)
    manifest = realization.realization_manifest(bundle, conditions)
    manifest["ok"] = manifest.pop("passed")
    return manifest


def cmd_index(cfg, ring, seed, base_dir):
    x, vm, name = load_map(cfg, base_dir)
    tower = index_mod.Tower(x)
    try:
        f = index_mod.SimplicialMap(tower, vm, name)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    region = _region(x, cfg.get("region"))
    try:
        res = index_mod.index_of_map(f, region, ring=ring or ZZ)
    except ValueError as exc:
        return {"ok": False, "admissible": False, "error": str(exc)}
    out = {"map": name, "index": fmt_scalar(res.value), "choice": vars(res.choice),
           "certificates": {k: v for k, v in vars(res.certificates).items() if k != "witness"},
           "fix_cells": [list(c) for c in res.fix_cells], "admissible": True}
    ok = res.certificates.ok
    if region.is_whole:
        lam = index_mod.lefschetz_of_map(f)
        out["lefschetz"] = fmt_scalar(lam)
        ok = ok and lam == res.value
    if cfg.get("invariance"):
        inv = index_mod.index_invariance(f, region)
        out["invariance"] = {k.replace("Choice", ""): fmt_scalar(v) for k, v in inv.items()}
        ok = ok and len(set(inv.values())) == 1 and len(inv) >= 3
    out["ok"] = ok
    return out


def cmd_axioms(cfg, ring, seed, base_dir):
    which = cfg.get("axioms")
    unknown = set(which or []) - set(index_mod.AXIOMS)
    if unknown:
        raise InputError(f"unknown axioms {sorted(unknown)}")
    suite = index_mod.property_suite_axioms(which)
    report = {k: [c.to_json() for c in cases] for k, cases in suite.items()}
    counts = {k: len(cases) for k, cases in suite.items()}
    ok = all(c.ok for cases in suite.values() for c in cases) and all(n >= 3 for n in counts.values())
    return {"ok": ok, "cases": report, "counts": counts}


def cmd_multi(cfg, ring, seed, base_dir):
    multimap, flags = load_multimap(cfg.get("multimap"), base_dir)
    schedule = [(int(l), _fraction(e, "schedule eps")) for l, e in cfg.get("schedule", [[0, "1/4"]])]
    route = cfg.get("route", flags.get("route", "continuous"))
    usc = multivalued.is_usc(multimap)
    cont = multivalued.is_vietoris_continuous(multimap)
    out: Dict[str, Any] = {"usc": usc.ok, "continuous": cont.ok,
                           "usc_witness": to_jsonable(usc.witness) if usc.witness else None}
    try:
        certs = {}
        for level, eps in schedule:
            cert = multivalued.approximate(multimap, level, eps, cfg.get("strategy", "average"), route)
            ver = multivalued.verify_approximation(cert)
            certs[f"{level}@{eps}"] = {"verified": ver.ok, "lefschetz": fmt_scalar(cert.lefschetz())}
        out["approximations"] = certs
        dich = multivalued.lefschetz_of_multimap(multimap, schedule)
        out["dichotomy"] = dich.to_json()
        ok = all(c["verified"] for c in certs.values())
        if dich.mixing is not None:
            ok = ok and dich.mixing.ok
    except multivalued.ApproximationError as exc:
        out["error"] = {"message": str(exc), "witness": to_jsonable(exc.witness)}
        ok = False
    if cfg.get("fixed_points"):
        rep = multivalued.fixed_point_certificate(multimap, int(cfg.get("max_level", 3)))
        out["fixed_points"] = rep.to_json()
        ok = ok and rep.outcome != "inconclusive"
    out["ok"] = ok
    return out


def cmd_modp(cfg, ring, seed, base_dir):
    x, vm, name = load_map(cfg, base_dir)
    tower = index_mod.Tower(x)
    try:
        f = index_mod.SimplicialMap(tower, vm, name)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    p = int(cfg.get("p", 2))
    k = int(cfg.get("k", 1))
    try:
        Ring("Zp", p)
    except ValueError:
        raise InputError(f"p must be prime, got {p}") from None
    try:
        rep = index_mod.mod_p_check(f, _region(x, cfg.get("region")), p, k)
    except ValueError as exc:
        return {"ok": False, "error": str(exc)}
    return {"ok": rep.congruent, "p": p, "m": rep.m, "index_f": fmt_scalar(rep.index_f),
            "index_f_m": fmt_scalar(rep.index_fm), "invariant_set_ok": rep.invariant_set_ok}


HANDLERS = {
    "verify-complex": cmd_verify_complex,
    "homology": cmd_homology,
    "lefschetz": cmd_lefschetz,
    "realize": cmd_realize,
    "check-thm2": cmd_check_thm2,
    "index": cmd_index,
    "axioms": cmd_axioms,
    "multi": cmd_multi,
    "modp": cmd_modp,
}


# ---------------------------------------------------------------- battery

def emit_instance_battery(out_dir: str, seed: int = 0) -> List[str]:
    """Write the canonical desk-scale instances; content does not depend on the seed."""
    os.makedirs(out_dir, exist_ok=True)
    files = {
        "point.json": complexes.point_complex().to_json(),
        "segment.json": complexes.segment().to_json(),
        "hollow_triangle.json": complexes.hollow_triangle().to_json(),
        "hexagon_disk.json": complexes.hexagon_disk().to_json(),
        "octahedron.json": complexes.octahedron().to_json(),
        "triangle_body.json": {"kind": "convex-body", **realization.triangle_body().to_json()},
        "antipodal_multimap.json": antipodal_multimap_json(),
    }
    written = []
    for name, data in sorted(files.items()):
        path = os.path.join(out_dir, name)
        with open(path, "w") as fh:
            fh.write(dumps(data))
        written.append(path)
    return written


# ---------------------------------------------------------------- entry point

def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _text(report: dict) -> str:
    lines = [f"{report['command']}: {'PASS' if report.get('ok') else 'FAIL'}"]
    for key in sorted(report):
        if key in ("command", "ok"):
            continue
        val = report[key]
        if isinstance(val, (str, int, float, bool)) or val is None:
            lines.append(f"  {key}: {val}")
        else:
            lines.append(f"  {key}: {json.dumps(val, sort_keys=True)[:200]}")
    return "\n".join(lines) + "\n"


def run(command: str, cfg: dict, ring: Optional[Ring] = None, seed: int = 0, base_dir: str = ".") -> dict:
    if command not in HANDLERS:
        raise InputError(f"unknown command {command!r}")
    report = HANDLERS[command](cfg, ring, seed, base_dir)
    report["command"] = command
    report["seed"] = seed
    return report


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="chainfix", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS + ("battery",))
    ap.add_argument("--config", help="JSON job description")
    ap.add_argument("--out", help="write the report (or the battery directory) here")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--ring", default=None, help="Z, Q or Zp:<p>")
    ap.add_argument("--text", action="store_true", help="human-readable summary on stdout")
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "battery":
            paths = emit_instance_battery(args.out or "instances", args.seed)
            sys.stdout.write(dumps({"command": "battery", "files": paths, "ok": True}))
            return 0
        cfg: dict = {}
        base_dir = "."
        if args.config:
            base_dir = os.path.dirname(os.path.abspath(args.config))
            try:
                with open(args.config) as fh:
                    cfg = json.load(fh)
            except (OSError, json.JSONDecodeError) as exc:
                raise InputError(f"cannot read config: {exc}") from None
            if not isinstance(cfg, dict):
                raise InputError("config must be a JSON object")
        ring_text = args.ring or cfg.get("ring")
        try:
            ring = Ring.parse(ring_text) if ring_text else None
        except ValueError as exc:
            raise InputError(str(exc)) from None
        report = run(args.command, cfg, ring, args.seed, base_dir)
    except InputError as exc:
        sys.stdout.write(dumps({"command": args.command, "ok": False, "error": {"type": "input", "message": str(exc)}}))
        return 2
    text = dumps(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    sys.stdout.write(_text(report) if args.text else text)
    return 0 if report.get("ok") else 1


if __name__ == "__main__":
    sys.exit(main())
