"""Scenario files: the serializable description of one computation.

A scenario bundles everything the pipeline needs: a lattice, affine
generators of the finite group, an optional cocycle on the closed
group, extra hyperplane families for the cell structure, the sliced
loci with their weights, and run options.  Rationals are written as
strings like "1/2" so files are exact and diff-friendly.

``run_scenario`` drives the full pipeline: close the group, refine the
arrangement, blow up along the sliced loci, compute the requested
coefficient systems, and assemble a K-theory report.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .arrangement import equivariant_refine, make_family
from .blowup import SlicedLocus, blow_up
from .bredon import (
    LyingOverCoefficients,
    TwistedRepCoefficients,
    blowup_cells,
    check_fiber_bijection,
    equivariant_cohomology,
    validate_system,
)
from .errors import SchemaError
from .groups import AffineTorusMap, Cocycle, FiniteGroup, Lattice, close_affine_group
from .ktheory import KReport, assemble_report

SYSTEMS = ("both", "blowup", "x-side")
CHECK_LEVELS = ("fast", "full")


@dataclass(frozen=True)
class GeneratorSpec:
    matrix: tuple
    shift: tuple


@dataclass(frozen=True)
class FamilySpec:
    normal: tuple
    offsets: tuple


@dataclass(frozen=True)
class SlicedSpec:
    reflection: GeneratorSpec
    normal: tuple
    loci: tuple  # (offset, weight) pairs


@dataclass(frozen=True)
class CocycleSpec:
    modulus: int = 1
    pairs: tuple = ()  # (i, j, value) on closed-group indices


@dataclass(frozen=True)
class Options:
    systems: str = "both"
    check: str = "fast"
    max_group_order: int = 64


@dataclass(frozen=True)
class Scenario:
    name: str
    lattice: tuple
    generators: tuple
    cocycle: CocycleSpec = CocycleSpec()
    families: tuple = ()
    sliced: tuple = ()
    options: Options = Options()


def _fraction(value, where: str) -> Fraction:
    try:
        if isinstance(value, str) or isinstance(value, int):
            return Fraction(value)
    except (ValueError, ZeroDivisionError):
        pass
    raise SchemaError(f"{where}: expected a rational like \"1/2\", got {value!r}")


def _int_matrix(value, n: int, where: str) -> tuple:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != n
        or any(
            not isinstance(row, (list, tuple))
            or len(row) != n
            or any(not isinstance(x, int) for x in row)
            for row in value
        )
    ):
        raise SchemaError(f"{where}: expected a {n}x{n} integer matrix")
    return tuple(tuple(row) for row in value)


def _int_vector(value, n: int, where: str) -> tuple:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != n
        or any(not isinstance(x, int) for x in value)
    ):
        raise SchemaError(f"{where}: expected {n} integers")
    return tuple(value)


def _generator(value, n: int, where: str) -> GeneratorSpec:
    if not isinstance(value, dict) or set(value) - {"matrix", "shift"}:
        raise SchemaError(f"{where}: expected keys matrix and shift")
    matrix = _int_matrix(value.get("matrix"), n, f"{where}.matrix")
    raw = value.get("shift", ["0"] * n)
    if not isinstance(raw, (list, tuple)) or len(raw) != n:
        raise SchemaError(f"{where}.shift: expected {n} rationals")
    shift = tuple(_fraction(x, f"{where}.shift") for x in raw)
    return GeneratorSpec(matrix, shift)


def scenario_from_dict(data: dict) -> Scenario:
    if not isinstance(data, dict):
        raise SchemaError("scenario: expected an object")
    unknown = set(data) - {"name", "lattice", "generators", "cocycle", "families", "sliced", "options"}
    if unknown:
        raise SchemaError(f"scenario: unknown fields {sorted(unknown)}")
    name = data.get("name")
    if not isinstance(name, str) or not name:
        raise SchemaError("name: expected a nonempty string")
    lattice = data.get("lattice")
    if not isinstance(lattice, (list, tuple)) or not lattice:
        raise SchemaError("lattice: expected a square integer matrix")
    n = len(lattice)
    lattice = _int_matrix(lattice, n, "lattice")
    raw_gens = data.get("generators", [])
    if not isinstance(raw_gens, (list, tuple)):
        raise SchemaError("generators: expected a list")
    generators = tuple(
        _generator(g, n, f"generators[{i}]") for i, g in enumerate(raw_gens)
    )
    cocycle = CocycleSpec()
    if "cocycle" in data:
        raw = data["cocycle"]
        if not isinstance(raw, dict) or set(raw) - {"modulus", "pairs"}:
            raise SchemaError("cocycle: expected keys modulus and pairs")
        modulus = raw.get("modulus", 1)
        if not isinstance(modulus, int) or modulus < 1:
            raise SchemaError("cocycle.modulus: expected a positive integer")
        pairs = []
        for k, entry in enumerate(raw.get("pairs", [])):
            if (
                not isinstance(entry, (list, tuple))
                or len(entry) != 3
                or any(not isinstance(x, int) for x in entry)
            ):
                raise SchemaError(f"cocycle.pairs[{k}]: expected [i, j, value] integers")
            pairs.append(tuple(entry))
        cocycle = CocycleSpec(modulus, tuple(pairs))
    families = []
    for i, raw in enumerate(data.get("families", [])):
        where = f"families[{i}]"
        if not isinstance(raw, dict) or set(raw) - {"normal", "offsets"}:
            raise SchemaError(f"{where}: expected keys normal and offsets")
        normal = _int_vector(raw.get("normal"), n, f"{where}.normal")
        offs = raw.get("offsets", [])
        if not isinstance(offs, (list, tuple)) or not offs:
            raise SchemaError(f"{where}.offsets: expected a nonempty list")
        families.append(FamilySpec(normal, tuple(_fraction(x, f"{where}.offsets") for x in offs)))
    sliced = []
    for i, raw in enumerate(data.get("sliced", [])):
        where = f"sliced[{i}]"
        if not isinstance(raw, dict) or set(raw) - {"reflection", "normal", "loci"}:
            raise SchemaError(f"{where}: expected keys reflection, normal, loci")
        reflection = _generator(raw.get("reflection"), n, f"{where}.reflection")
        normal = _int_vector(raw.get("normal"), n, f"{where}.normal")
        loci = []
        for k, entry in enumerate(raw.get("loci", [])):
            inner = f"{where}.loci[{k}]"
            if not isinstance(entry, dict) or set(entry) - {"offset", "weight"}:
                raise SchemaError(f"{inner}: expected keys offset and weight")
            loci.append(
                (
                    _fraction(entry.get("offset", "0"), f"{inner}.offset"),
                    _fraction(entry.get("weight", "0"), f"{inner}.weight"),
                )
            )
        if not loci:
            raise SchemaError(f"{where}.loci: expected a nonempty list")
        sliced.append(SlicedSpec(reflection, normal, tuple(loci)))
    options = Options()
    if "options" in data:
        raw = data["options"]
        if not isinstance(raw, dict) or set(raw) - {"systems", "check", "max_group_order"}:
            raise SchemaError("options: expected keys systems, check, max_group_order")
        options = make_options(
            raw.get("systems", "both"),
            raw.get("check", "fast"),
            raw.get("max_group_order", 64),
        )
    return Scenario(name, lattice, generators, cocycle, tuple(families), tuple(sliced), options)


def make_options(systems: str, check: str, max_group_order: int) -> Options:
    if systems not in SYSTEMS:
        raise SchemaError(f"options.systems: expected one of {SYSTEMS}, got {systems!r}")
    if check not in CHECK_LEVELS:
        raise SchemaError(f"options.check: expected one of {CHECK_LEVELS}, got {check!r}")
    if not isinstance(max_group_order, int) or max_group_order < 1:
        raise SchemaError("options.max_group_order: expected a positive integer")
    return Options(systems, check, max_group_order)


def _frac_str(q: Fraction) -> str:
    return str(q)


def scenario_to_dict(sc: Scenario) -> dict:
    """Canonical dict form; inverse of ``scenario_from_dict``."""
    out = {
        "name": sc.name,
        "lattice": [list(row) for row in sc.lattice],
        "generators": [
            {"matrix": [list(r) for r in g.matrix], "shift": [_frac_str(x) for x in g.shift]}
            for g in sc.generators
        ],
    }
    if sc.cocycle != CocycleSpec():
        out["cocycle"] = {
            "modulus": sc.cocycle.modulus,
            "pairs": [list(p) for p in sc.cocycle.pairs],
        }
    if sc.families:
        out["families"] = [
            {"normal": list(f.normal), "offsets": [_frac_str(x) for x in f.offsets]}
            for f in sc.families
        ]
    if sc.sliced:
        out["sliced"] = [
            {
                "reflection": {
                    "matrix": [list(r) for r in s.reflection.matrix],
                    "shift": [_frac_str(x) for x in s.reflection.shift],
                },
                "normal": list(s.normal),
                "loci": [
                    {"offset": _frac_str(off), "weight": _frac_str(w)} for off, w in s.loci
                ],
            }
            for s in sc.sliced
        ]
    if sc.options != Options():
        out["options"] = {
            "systems": sc.options.systems,
            "check": sc.options.check,
            "max_group_order": sc.options.max_group_order,
        }
    return out


def load_scenario(path: str) -> Scenario:
    try:
        with open(path) as f:
            data = json.load(f)
    except OSError as e:
        raise SchemaError(f"cannot read scenario file: {e}")
    except json.JSONDecodeError as e:
        raise SchemaError(f"scenario file is not valid JSON: {e}")
    return scenario_from_dict(data)


def dump_scenario(sc: Scenario) -> str:
    return json.dumps(scenario_to_dict(sc), indent=2) + "\n"


@dataclass
class PipelineState:
    """Intermediate objects of one run, for diagnostics and tests."""

    scenario: Scenario
    lattice: Lattice
    group: FiniteGroup
    cocycle: Cocycle
    complex: object
    action: object
    blowup: object
    systems: dict


def build_pipeline(sc: Scenario) -> PipelineState:
    """Run everything up to the coefficient systems."""
    lat = Lattice(sc.lattice)
    gens = [AffineTorusMap(lat, g.matrix, g.shift) for g in sc.generators]
    if not gens:
        gens = [AffineTorusMap.identity(lat)]
    maps = close_affine_group(gens, sc.options.max_group_order)
    group = FiniteGroup.from_elements(maps, lambda a, b: a.compose(b))
    values = [[0] * group.n for _ in range(group.n)]
    for i, j, v in sc.cocycle.pairs:
        if not (0 <= i < group.n and 0 <= j < group.n):
            raise SchemaError(
                f"cocycle.pairs: index ({i},{j}) outside the closed group of order {group.n}"
            )
        values[i][j] = v
    cocycle = Cocycle(group, sc.cocycle.modulus, values)
    fams = [make_family(lat, f.normal, list(f.offsets)) for f in sc.families]
    cx, act = equivariant_refine(lat, fams, maps)
    sliced = [
        SlicedLocus.make(
            lat,
            AffineTorusMap(lat, s.reflection.matrix, s.reflection.shift),
            s.normal,
            {off: w for off, w in s.loci},
        )
        for s in sc.sliced
    ]
    bx = blow_up(group, cx, act, sliced)
    systems = {}
    if sc.options.systems in ("both", "blowup"):
        systems["blowup"] = TwistedRepCoefficients(blowup_cells(bx), cocycle)
    if sc.options.systems in ("both", "x-side"):
        systems["x-side"] = LyingOverCoefficients(bx, cocycle)
    return PipelineState(sc, lat, group, cocycle, cx, act, bx, systems)


def report_from_state(state: PipelineState) -> KReport:
    """Cohomology, K-groups, and verdict for an assembled pipeline."""
    if state.scenario.options.check == "full":
        for system in state.systems.values():
            validate_system(system)
        if len(state.systems) == 2:
            check_fiber_bijection(state.blowup, state.cocycle)
    bredon = {
        name: tuple(equivariant_cohomology(system))
        for name, system in state.systems.items()
    }
    return assemble_report(state.scenario.name, state.lattice.dim, bredon)


def run_scenario(sc: Scenario) -> KReport:
    """Full pipeline: scenario in, K-theory report out."""
    return report_from_state(build_pipeline(sc))
