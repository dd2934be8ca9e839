"""Comparison of identify_moduli reports against the worked-example golden file."""

from __future__ import annotations

import json
import re
from pathlib import Path

from quivsheaf.cli import identify_moduli, parse_poly
from quivsheaf.ktheory import Polarization, SheafClass, Surface
from quivsheaf.quivercore import numerically_equivalent, weight_pairing

GOLDEN = Path(__file__).parent / "golden" / "worked_examples.json"


def load() -> list[dict]:
    return json.loads(GOLDEN.read_text())


def iso_label(moduli: dict) -> str:
    """Projective spaces under their common names: G_1(n) and G_{n-1}(n) are P^{n-1}."""
    m = re.fullmatch(r"G_(\d+)\((\d+)\)", moduli["label"])
    if m and int(m.group(1)) in (1, int(m.group(2)) - 1):
        return f"P^{int(m.group(2)) - 1}"
    return moduli["label"]


def check(entry: dict) -> list[str]:
    surface = Surface(entry["surface"])
    v = SheafClass.from_coords(surface, entry["coords"])
    A = Polarization(surface, tuple(entry["polarization"])) if "polarization" in entry else None
    report = identify_moduli(v, A).to_json()
    ident = report["identification"]
    moduli = ident["moduli"]
    problems = []
    if not ident["via"]:
        problems.append("missing provenance")
    for key, want in entry["moduli"].items():
        got = iso_label(moduli) if key == "isomorphic_to" else moduli.get(key)
        if got != want:
            problems.append(f"{key}: {got!r} != {want!r}")
    views = {view["collection"]: view for view in report["collections"]}
    for coll, want in entry.get("dims", {}).items():
        if coll not in views or views[coll]["dims"] != want:
            problems.append(f"dims on {coll}: {views.get(coll, {}).get('dims')} != {want}")
    for coll, want in entry.get("theta", {}).items():
        got = [parse_poly(x) for x in views[coll]["theta"]] if coll in views else None
        if got != [parse_poly(x) for x in want]:
            problems.append(f"theta on {coll}: {views.get(coll, {}).get('theta')} != {want}")
    found = [report["identification"]] + report["alternatives"]
    for coll, model in entry.get("model", {}).items():
        if not any(i["collection"] == coll and i["moduli"].get("model") == model for i in found):
            problems.append(f"no {model} identification on {coll}")
    if "kronecker" in entry:
        trace = ident.get("trace") or []
        if not trace or [trace[0]["a"], trace[0]["b"]] != entry["kronecker"]:
            problems.append(f"Kronecker reduction does not start at {entry['kronecker']}")
    for view in report["collections"]:
        theta = [parse_poly(x) for x in view["theta"]]
        if not weight_pairing(theta, view["dims"]).is_zero():
            problems.append(f"theta not orthogonal on {view['collection']}")
    chosen = report["chosen"]
    if report["theta_integral"] is not None:
        theta = [parse_poly(x) for x in chosen["theta"]]
        if not numerically_equivalent(theta, report["theta_integral"], chosen["dims"]):
            problems.append("integral representative leaves the chamber")
    return problems
