"""Moduli identification and the ``quivsheaf`` command line."""

from __future__ import annotations

import argparse
import itertools
import json
import math
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import sympy
from sympy.parsing.sympy_parser import (implicit_multiplication_application, parse_expr,
                                        standard_transformations)

from . import linalg as la
from .exactalg import ExactAlgError, RatPoly, format_rational
from .ktheory import (P1XP1_STD, P2_FIRST, P2_SECOND, CollectionId, KTheoryError, NoTwistFound,
                      NonPositiveRank, Polarization, SheafClass, Surface, bogomolov_delta,
                      collection_data, deg_A, euler_pairing, line_bundle, normalize_twist,
                      psi_oracle, region_membership, theta_arrays, theta_components, to_dim_vector)
from .kronecker import (EMPTY, KroneckerError, ModuliDescription, Pencil, blocks_to_sheaf,
                        classify_K2, classify_P1, kcf, point, reduce_Kn)
from .quivercore import (BudgetExceeded, QuiverError, Representation, as_weight,
                         distinct_hyperplanes, find_destabilizer, hn_filtration,
                         integral_weight_in_class, is_theta_coprime, moduli_dimension,
                         numerically_equivalent, quiver_by_name, sign_vector, walls)


class OutOfRegion(KTheoryError):
    pass


# --- identification ----------------------------------------------------------------


@dataclass
class Identification:
    moduli: ModuliDescription
    via: str
    collection: str | None = None
    trace: list = field(default_factory=list)
    symbolic: dict | None = None

    def to_json(self) -> dict:
        out = {"via": self.via, "moduli": self.moduli.to_json()}
        if self.collection:
            out["collection"] = self.collection
        if self.trace:
            out["trace"] = [{"a": s.a, "b": s.b, "rule": s.rule} for s in self.trace]
        if self.symbolic:
            out["symbolic"] = self.symbolic
        return out


@dataclass
class CollectionView:
    collection: CollectionId
    twist: object
    cls: SheafClass
    dims: tuple
    theta: tuple
    regions: object

    @property
    def in_theorem_region(self) -> bool:
        if self.collection.tag == "P2_second":
            return self.regions.in_Rtilde
        return self.regions.in_R_A

    def to_json(self) -> dict:
        return {"collection": str(self.collection), "twist": _jsonable(self.twist),
                "class": self.cls.to_json(), "dims": list(self.dims),
                "theta": [str(x) for x in self.theta], "regions": self.regions.to_json(),
                "in_theorem_region": self.in_theorem_region}


@dataclass
class ModuliReport:
    input_class: SheafClass
    polarization: Polarization
    views: list
    chosen: CollectionView | None
    identification: Identification
    alternatives: list
    expected_dimension: int | None
    bogomolov_delta: Fraction | None
    gcd: int
    theta_integral: tuple | None
    coprime: bool | None
    notes: list

    def to_json(self) -> dict:
        out = {
            "input": self.input_class.to_json(),
            "polarization": self.polarization.to_json(),
            "identification": self.identification.to_json(),
            "alternatives": [a.to_json() for a in self.alternatives],
            "expected_dimension": self.expected_dimension,
            "gcd_rk_degA_chi": self.gcd,
            "notes": list(self.notes),
            "collections": [v.to_json() for v in self.views],
            "chosen": self.chosen.to_json() if self.chosen is not None else None,
            "bogomolov_delta": None,
            "bogomolov_ok": None,
            "theta_integral": list(self.theta_integral) if self.theta_integral is not None else None,
            "theta_coprime": self.coprime,
        }
        if self.bogomolov_delta is not None:
            out["bogomolov_delta"] = format_rational(self.bogomolov_delta)
            out["bogomolov_ok"] = self.bogomolov_delta >= 0
        return out


def _jsonable(x):
    if isinstance(x, tuple):
        return list(x)
    return x


_REFERENCE_WEIGHT = (-1, -1, 4)


def _views(v: SheafClass, A: Polarization) -> list[CollectionView]:
    if v.surface is Surface.P1:
        fams = ["P1"]
    elif v.surface is Surface.P2:
        fams = ["P2_first", "P2_second"]
    else:
        fams = ["P1xP1_std"]
    out = []
    for fam in fams:
        try:
            nz = normalize_twist(v, fam, A)
        except NoTwistFound:
            continue
        cid = nz.collection
        out.append(CollectionView(cid, nz.twist, nz.cls, to_dim_vector(nz.cls, cid),
                                  theta_arrays(nz.cls, cid, A), region_membership(nz.cls, cid, A)))
    return out


def _kron(view: CollectionView, a: int, b: int, via: str) -> Identification:
    trace, desc = reduce_Kn(3, a, b)
    return Identification(desc, via, str(view.collection), trace)


def _closed_forms(view: CollectionView) -> list[Identification]:
    d = view.dims
    cid = str(view.collection)
    out = []
    if min(d) < 0:
        out.append(Identification(EMPTY, "dimension vector has a negative entry", cid))
        return out
    support = [x for x in d if x]
    if len(support) == 1:
        out.append(Identification(point(support[0] == 1), "dimension vector supported at one vertex", cid))
    tag = view.collection.tag
    if tag == "P2_first":
        if d[0] == 0:
            out.append(_kron(view, d[1], d[2], "Kronecker reduction d_{-1} = 0: K(3; d_0, d_1)"))
        if d[2] == 0:
            out.append(_kron(view, d[0], d[1], "Kronecker reduction d_1 = 0: K(3; d_{-1}, d_0)"))
    elif tag == "P2_second":
        if d[0] == 0:
            out.append(_kron(view, d[1], d[2], "Kronecker reduction d'_{-1} = 0: K(3; d'_0, d'_1)"))
        if d[2] == 0:
            out.append(_kron(view, d[0], d[1], "Kronecker reduction d'_1 = 0: K(3; d'_{-1}, d'_0)"))
    return out


def _pattern_rules(view: CollectionView) -> list[Identification]:
    if view.collection.tag not in ("P2_first", "P2_second") or view.dims != (1, 3, 1):
        return []
    if not numerically_equivalent(view.theta, _REFERENCE_WEIGHT, view.dims):
        return []
    cid = str(view.collection)
    if view.collection.tag == "P2_first":
        m = ModuliDescription("ProjectiveSpace", 2, "equal", {"m": 2, "model": "P(Ant_3)"})
        return [Identification(m, "B3 with symmetric relations, d = (1,3,1), theta ~ (-1,-1,4): "
                                  "(a, b) -> ba onto antisymmetric matrices", cid)]
    m = ModuliDescription("ProjectiveSpace", 5, "equal", {"m": 5, "model": "P(Sym_3)"})
    return [Identification(m, "B3 with antisymmetric relations, d = (1,3,1), theta ~ (-1,-1,4): "
                              "(a, b) -> ba onto symmetric matrices", cid)]


def _hilbert(v: SheafClass, delta: Fraction, cid: str) -> Identification:
    ell = int(delta / 2)
    if ell == 0:
        return Identification(point(True), "rank one with Delta = 0: a line bundle", cid)
    m = ModuliDescription("HilbertScheme", 2 * ell, "equal", {"length": ell})
    return Identification(m, "rank one: twisted ideal sheaves of zero-dimensional subschemes", cid)


def _p1xp1_reduction(view: CollectionView) -> list[Identification]:
    d = view.dims
    out = []
    q = quiver_by_name("Q4_J")
    for idx, name, keep in ((0, "three-vertex quiver with arrows b (d_{0,-1} = 0)", (1, 2, 3)),
                            (3, "three-vertex quiver with arrows a (d_{1,0} = 0)", (0, 1, 2))):
        if d[idx] == 0:
            sym = {"quiver": "Q4_J restricted", "vertices": [list(q.vertices[i]) for i in keep],
                   "dims": [d[i] for i in keep], "theta": [str(view.theta[i]) for i in keep]}
            m = ModuliDescription("SymbolicQuiverModuli", moduli_dimension(q, d), "unknown")
            out.append(Identification(m, name, str(view.collection), symbolic=sym))
    return out


def _symbolic(view: CollectionView) -> Identification:
    q = quiver_by_name(view.collection.quiver_name)
    sym = {"quiver": q.name, "dims": list(view.dims), "theta": [str(x) for x in view.theta]}
    return Identification(ModuliDescription("SymbolicQuiverModuli", moduli_dimension(q, view.dims), "unknown"),
                          "no closed form applies", str(view.collection), symbolic=sym)


def _gcd(v: SheafClass, A: Polarization) -> int:
    if v.surface is Surface.P1:
        return math.gcd(v.rank, v.c1)
    return math.gcd(math.gcd(v.rank, deg_A(v, A)), int(v.chi))


def identify_moduli(v: SheafClass, A: Polarization | None = None) -> ModuliReport:
    A = A or Polarization.default(v.surface)
    notes = []
    if v.surface is Surface.P1:
        return _identify_p1(v, A)
    if v.rank <= 0:
        raise NonPositiveRank("moduli identification on surfaces needs positive rank")
    delta = bogomolov_delta(v)
    g = _gcd(v, A)
    views = _views(v, A)
    inside = [w for w in views if w.in_theorem_region]
    found: list[Identification] = []
    if delta < 0:
        found.append(Identification(EMPTY, "Bogomolov inequality violated (Delta < 0)"))
    if not inside:
        if delta < 0:
            # emptiness does not need a quiver model
            return ModuliReport(v, A, views, None, found[0], [], None, delta, g, None, None,
                                ["no twist brings the class into a theorem region"])
        raise OutOfRegion("no twist brings the class into a theorem region")
    for w in inside:
        found += _closed_forms(w)
    for w in inside:
        found += _pattern_rules(w)
    if v.rank == 1 and delta >= 0:
        found.append(_hilbert(v, delta, str(inside[0].collection)))
    if not found:
        for w in inside:
            if w.collection.tag == "P1xP1_std" and min(w.dims) >= 0:
                found += _p1xp1_reduction(w)
    if not found:
        found.append(_symbolic(inside[0]))
    primary = found[0]
    chosen = next((w for w in inside if str(w.collection) == primary.collection), inside[0])
    expected = moduli_dimension(quiver_by_name(chosen.collection.quiver_name), chosen.dims)
    theta_int = coprime = None
    if min(chosen.dims) >= 0 and any(chosen.dims):
        try:
            theta_int = integral_weight_in_class(chosen.theta, chosen.dims)
            coprime = is_theta_coprime(chosen.theta, chosen.dims)
        except BudgetExceeded as exc:
            notes.append(f"chamber data skipped: {exc}")
    if coprime:
        notes.append("dimension vector is theta-coprime: gcd(rk, deg_A, chi) = 1, "
                     "semistable equals stable and a universal family exists")
    elif g == 1:
        notes.append("gcd(rk, deg_A, chi) = 1")
    else:
        notes.append(f"gcd(rk, deg_A, chi) = {g}")
    if delta >= 0:
        notes.append("Bogomolov inequality holds")
    return ModuliReport(v, A, views, chosen, primary, found[1:], expected, delta, g,
                        theta_int, coprime, notes)


def _identify_p1(v: SheafClass, A: Polarization) -> ModuliReport:
    desc = classify_P1(v)
    ident = Identification(desc, "classification of semistable sheaves on P1")
    notes: list = []
    views = _views(v, A) if v.rank >= 0 else []
    chosen = views[0] if views else None
    expected = theta_int = coprime = None
    if chosen is not None and min(chosen.dims) >= 0:
        ident.collection = str(chosen.collection)
        expected = moduli_dimension(quiver_by_name("K2"), chosen.dims)
        if any(chosen.dims):
            try:
                theta_int = integral_weight_in_class(chosen.theta, chosen.dims)
                coprime = is_theta_coprime(chosen.theta, chosen.dims)
            except BudgetExceeded as exc:
                notes.append(f"chamber data skipped: {exc}")
    alts = []
    if chosen is not None and min(chosen.dims) >= 0:
        alts.append(Identification(classify_K2(chosen.dims), "Kronecker quiver K2", str(chosen.collection)))
    return ModuliReport(v, A, views, chosen, ident, alts, expected, None, _gcd(v, A),
                        theta_int, coprime, notes)


# --- parsing helpers ------------------------------------------------------------------


_T = sympy.Symbol("t")


_TRANSFORMS = standard_transformations + (implicit_multiplication_application,)


def parse_poly(x) -> RatPoly:
    """Read a weight entry: a number, a "p/q" string, a coefficient list or a polynomial in t."""
    if isinstance(x, RatPoly):
        return x
    if isinstance(x, list):
        return RatPoly.from_json(x)
    if isinstance(x, (int, Fraction)):
        return RatPoly.const(x)
    if isinstance(x, float):
        raise ValueError("floating point weights are not accepted")
    s = str(x).strip().replace("^", "**")
    try:
        return RatPoly.const(Fraction(s))
    except ValueError:
        pass
    expr = parse_expr(s, local_dict={"t": _T}, transformations=_TRANSFORMS)
    p = sympy.Poly(expr, _T, domain=sympy.QQ)
    return RatPoly(Fraction(int(c.p), int(c.q)) for c in reversed(p.all_coeffs()))


def parse_weight(items) -> tuple[RatPoly, ...]:
    if isinstance(items, str):
        items = [s for s in items.split(",")]
    return tuple(parse_poly(x) for x in items)


def parse_ints(s: str) -> tuple[int, ...]:
    return tuple(int(x) for x in s.replace(" ", "").split(",") if x)


def parse_class(data: dict, surface: Surface) -> SheafClass:
    if "coords" in data:
        return SheafClass.from_coords(surface, data["coords"])
    return SheafClass.from_json(data, surface)


def parse_polarization(s: str | None, surface: Surface) -> Polarization:
    if not s:
        return Polarization.default(surface)
    vals = parse_ints(s)
    if surface is Surface.P1xP1:
        if len(vals) != 2:
            raise KTheoryError("P1xP1 polarization needs a,b")
        return Polarization(surface, vals)
    return Polarization(surface, vals[0])


def default_collection(surface: Surface) -> CollectionId:
    return {Surface.P1: CollectionId.P1(0), Surface.P2: P2_FIRST, Surface.P1xP1: P1XP1_STD}[surface]


class MalformedInput(Exception):
    pass


def _read_json(arg: str | None):
    if arg is None:
        text = sys.stdin.read()
    elif os.path.exists(arg):
        with open(arg) as fh:
            text = fh.read()
    else:
        text = arg
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(str(exc)) from exc


# --- subcommands ------------------------------------------------------------------------


def cmd_dict(args) -> dict:
    surface = Surface(args.surface)
    v = parse_class(_read_json(args.input), surface)
    A = parse_polarization(args.polarization, surface)
    cid = CollectionId.parse(args.collection) if args.collection else default_collection(surface)
    tm, tc = theta_components(v, cid, A)
    return {
        "class": v.to_json(),
        "coords": list(v.coords()),
        "collection": str(cid),
        "dims": list(to_dim_vector(v, cid)),
        "dims_psi_oracle": list(psi_oracle(v, cid)),
        "theta": [str(x) for x in theta_arrays(v, cid, A)],
        "theta_M": [format_rational(x) for x in tm],
        "theta_chi": [format_rational(x) for x in tc],
        "regions": region_membership(v, cid, A).to_json(),
    }


def cmd_classify(args) -> dict:
    surface = Surface(args.surface)
    v = parse_class(_read_json(args.input), surface)
    return identify_moduli(v, parse_polarization(args.polarization, surface)).to_json()


def _representation(data: dict, prime: int | None) -> Representation:
    r = Representation.from_json(data)
    if prime and r.field == la.QQ:
        r = r.reduce_mod(prime)
    return r


def cmd_stab_check(args) -> dict:
    data = _read_json(args.input)
    if not isinstance(data, dict) or "theta" not in data:
        raise MalformedInput("expected an object with a representation and theta")
    theta = parse_weight(data["theta"])
    mode = args.mode
    r = _representation(data, args.prime if mode == "exhaustive" else None)
    verdict = find_destabilizer(r, theta, mode=mode, budget=args.budget)
    out = {"field": r.field.name, "verdict": verdict.to_json(r.field)}
    if args.hn:
        steps = hn_filtration(r, theta, mode=mode, budget=args.budget)
        out["hn"] = [{"dims": list(s.dims), "quotient_dims": list(s.quotient_dims),
                      "slope": str(s.slope)} for s in steps]
    return out


def cmd_kcf(args) -> dict:
    data = _read_json(args.input)
    if not isinstance(data, dict):
        raise MalformedInput("expected a pencil object")
    if "f0" in data:
        F = la.field_from_name(str(data.get("field", "Q")))
        f0, f1 = data["f0"], data["f1"]
        src = data.get("source_dim", len(f0[0]) if f0 else 0)
        p = Pencil.from_matrices(F, f0, f1, src)
    else:
        p = Pencil.from_json(data)
    F = p.field
    res = kcf(p, seed=args.seed)
    out = {"field": F.name, "dims": list(p.dims),
           "blocks": [b.to_json(F) for b in res.blocks],
           "g0": [[F.fmt(x) for x in row] for row in res.g0],
           "g_src": [[F.fmt(x) for x in row] for row in res.g_src]}
    if args.k is not None:
        summands = blocks_to_sheaf(res.blocks, args.k, F)
        out["sheaf"] = [s.to_json(F) for s in summands]
    return out


def chamber_samples(d: Sequence[int], radius: int = 4, limit: int = 20) -> list[tuple[int, ...]]:
    """Small integral weights in d-perp, one per chamber met, avoiding every wall."""
    d = tuple(d)
    seen, out = set(), []
    for theta in itertools.product(range(-radius, radius + 1), repeat=len(d)):
        if sum(a * b for a, b in zip(theta, d)) != 0 or not any(theta):
            continue
        sv = sign_vector(theta, d)
        full = all(sum(a * b for a, b in zip(theta, w.normal)) != 0 for w in walls(d))
        if not full or sv in seen:
            continue
        seen.add(sv)
        out.append(theta)
        if len(out) >= limit:
            break
    return out


def cmd_walls(args) -> dict:
    d = parse_ints(args.dims)
    ws = walls(d)
    return {"quiver": args.quiver, "dims": list(d), "wall_count": len(ws),
            "distinct_hyperplanes": len(distinct_hyperplanes(d)),
            "walls": [w.to_json() for w in ws],
            "chamber_samples": [list(t) for t in chamber_samples(d, args.radius)]}


def _line_bundles(surface: Surface, bound: int):
    if surface is Surface.P1xP1:
        for x in range(-bound, bound + 1):
            for y in range(-bound, bound + 1):
                yield line_bundle(surface, (x, y))
    else:
        for x in range(-bound, bound + 1):
            yield line_bundle(surface, x)


def cohomology_table(cid: CollectionId, bound: int = 3) -> list[dict]:
    rows = []
    for L in _line_bundles(cid.surface, bound):
        d = to_dim_vector(L, cid)
        o = psi_oracle(L, cid)
        rows.append({"c1": _jsonable(L.c1), "dims": list(d), "oracle": list(o), "match": d == o})
    return rows


def cmd_cohomology_oracle(args) -> dict:
    cid = CollectionId.parse(args.collection)
    rows = cohomology_table(cid, args.bound)
    data = collection_data(cid)
    return {"collection": str(cid),
            "dual_objects": [E.to_json() for E in data.dual_objects],
            "rows": rows, "mismatches": sum(not r["match"] for r in rows)}


# --- entry point -------------------------------------------------------------------------


def _text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not all(isinstance(x, (int, str, bool)) for x in v):
                lines.append(f"{pad}{k}:")
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(_text(x, indent) if isinstance(x, (dict, list)) else f"{pad}- {x}" for x in obj)
    return f"{pad}{obj}"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quivsheaf", description="Sheaves on P1, P2, P1xP1 and quiver moduli")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--in", dest="input", help="JSON text or a path; stdin when omitted")
        sp.add_argument("--out", choices=("json", "text"), default="json")
        sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("dict", help="dimension vector, weights and regions of a class")
    common(sp)
    sp.add_argument("--surface", choices=[s.value for s in Surface], required=True)
    sp.add_argument("--collection")
    sp.add_argument("--polarization")
    sp.set_defaults(func=cmd_dict)

    sp = sub.add_parser("classify", help="identify the moduli space of a class")
    common(sp)
    sp.add_argument("--surface", choices=[s.value for s in Surface], required=True)
    sp.add_argument("--polarization")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("stab-check", help="King stability of a representation")
    common(sp)
    sp.add_argument("--mode", choices=("exhaustive", "kcf"), default="exhaustive")
    sp.add_argument("--prime", type=int, default=5)
    sp.add_argument("--budget", type=int, default=5_000_000)
    sp.add_argument("--hn", action="store_true", help="also print the HN filtration")
    sp.set_defaults(func=cmd_stab_check)

    sp = sub.add_parser("kcf", help="Kronecker canonical form of a pencil")
    common(sp)
    sp.add_argument("--k", type=int)
    sp.set_defaults(func=cmd_kcf)

    sp = sub.add_parser("walls", help="numerical walls for a dimension vector")
    common(sp)
    sp.add_argument("--quiver", default="B3")
    sp.add_argument("--dims", required=True)
    sp.add_argument("--radius", type=int, default=4)
    sp.set_defaults(func=cmd_walls)

    sp = sub.add_parser("cohomology-oracle", help="Euler pairing check of a collection")
    common(sp)
    sp.add_argument("--collection", required=True)
    sp.add_argument("--bound", type=int, default=3)
    sp.set_defaults(func=cmd_cohomology_oracle)
    return p


def _emit(obj, fmt: str) -> None:
    print(json.dumps(obj, indent=2) if fmt == "json" else _text(obj))


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result = args.func(args)
    except MalformedInput as exc:
        _emit({"error": "malformed_json", "message": str(exc)}, "json")
        return 1
    except BudgetExceeded as exc:
        _emit({"error": "budget_exceeded", "message": str(exc)}, "json")
        return 3
    except (KTheoryError, QuiverError, KroneckerError, ExactAlgError, ValueError, KeyError,
            ZeroDivisionError) as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)}, "json")
        return 2
    _emit(result, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
