"""Built-in scenarios and crossed-product diagnostics.

The scenario presets cover the worked component families: the eight
rank-two symplectic cases (dihedral, Klein four-group, single
reflection, and trivial Weyl groups with their slicing patterns), the
three dimension-one slicing patterns for the order-six dihedral circle
action, the free glide reflection whose quotient is a Klein bottle,
and free rotations giving discrete-series components.

All rank-two presets live on the doubled lattice 2Z^2, so mirror
circles sit at integer offsets and their unsliced partners at odd ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .crossed import (
    FiniteCrossedProduct,
    build_crossed_product,
    ideal_summand,
    orbit_dual,
    propagate_weights,
)
from .errors import SchemaError
from .groups import AffineTorusMap, Cocycle, FiniteGroup, Lattice, close_affine_group
from .scenario import CocycleSpec, FamilySpec, GeneratorSpec, Options, Scenario, SlicedSpec

DOUBLED = ((2, 0), (0, 2))
SWAP = GeneratorSpec(((0, 1), (1, 0)), (Fraction(0), Fraction(0)))
ANTISWAP = GeneratorSpec(((0, -1), (-1, 0)), (Fraction(0), Fraction(0)))
FLIP_Y = GeneratorSpec(((1, 0), (0, -1)), (Fraction(0), Fraction(0)))
FLIP_X = GeneratorSpec(((-1, 0), (0, 1)), (Fraction(0), Fraction(0)))
MINUS = GeneratorSpec(((-1, 0), (0, -1)), (Fraction(0), Fraction(0)))

ZERO2 = (Fraction(0), Fraction(0))


def _family(normal, *offsets) -> FamilySpec:
    return FamilySpec(tuple(normal), tuple(Fraction(x) for x in offsets))


def _sliced(reflection, normal, *loci) -> SlicedSpec:
    return SlicedSpec(reflection, tuple(normal), tuple((Fraction(o), Fraction(w)) for o, w in loci))


SQUARE_FAMILIES = (
    _family((1, -1), 0),
    _family((1, 1), 0),
    _family((1, 0), 0),
    _family((0, 1), 0),
)

_D4_GENS = (SWAP, FLIP_Y, MINUS)


def _circle_gen(shift) -> GeneratorSpec:
    return GeneratorSpec(((1,),), (Fraction(shift),))


def _circle_flip(shift) -> GeneratorSpec:
    return GeneratorSpec(((-1,),), (Fraction(shift),))


def _sp4_case1() -> Scenario:
    return Scenario(
        "sp4-case1",
        DOUBLED,
        _D4_GENS,
        families=SQUARE_FAMILIES,
        sliced=(
            _sliced(SWAP, (1, -1), (0, 0)),
            _sliced(ANTISWAP, (1, 1), (0, 0)),
            _sliced(FLIP_Y, (0, 1), (0, 0)),
            _sliced(FLIP_X, (1, 0), (0, 0)),
        ),
    )


def _sp4_case2() -> Scenario:
    return Scenario(
        "sp4-case2",
        DOUBLED,
        _D4_GENS,
        families=SQUARE_FAMILIES,
        sliced=(
            _sliced(SWAP, (1, -1), (0, 0)),
            _sliced(ANTISWAP, (1, 1), (0, 0)),
        ),
    )


def _sp4_case3() -> Scenario:
    return Scenario(
        "sp4-case3",
        DOUBLED,
        (SWAP,),
        families=(_family((1, 1), 0),),
        sliced=(_sliced(SWAP, (1, -1), (0, 0)),),
    )


def _sp4_case4() -> Scenario:
    return Scenario(
        "sp4-case4",
        DOUBLED,
        (FLIP_Y, MINUS),
        sliced=(_sliced(FLIP_Y, (0, 1), (0, 0)),),
    )


def _sp4_case5() -> Scenario:
    return Scenario("sp4-case5", DOUBLED, (FLIP_Y, MINUS))


def _sp4_case6() -> Scenario:
    return Scenario(
        "sp4-case6",
        DOUBLED,
        (FLIP_Y,),
        families=(_family((1, 0), 0),),
        sliced=(_sliced(FLIP_Y, (0, 1), (0, 0)),),
    )


def _sp4_case7() -> Scenario:
    return Scenario(
        "sp4-case7",
        DOUBLED,
        (FLIP_Y,),
        families=(_family((1, 0), 0),),
    )


def _sp4_case8() -> Scenario:
    return Scenario(
        "sp4-case8",
        DOUBLED,
        (),
        families=(_family((1, 0), 0), _family((0, 1), 0)),
    )


def _dim1_case_a() -> Scenario:
    return Scenario("dim1-case-a", ((1,),), (_circle_flip(0), _circle_gen(Fraction(1, 3))))


def _dim1_case_b() -> Scenario:
    return Scenario(
        "dim1-case-b",
        ((1,),),
        (_circle_flip(0), _circle_gen(Fraction(1, 3))),
        sliced=(
            _sliced(_circle_flip(0), (1,), (0, 0)),
            _sliced(_circle_flip(Fraction(2, 3)), (1,), (Fraction(1, 3), 0)),
            _sliced(_circle_flip(Fraction(1, 3)), (1,), (Fraction(2, 3), 0)),
        ),
    )


def _dim1_case_c() -> Scenario:
    return Scenario(
        "dim1-case-c",
        ((1,),),
        (_circle_flip(0), _circle_gen(Fraction(1, 3))),
        sliced=(
            _sliced(_circle_flip(0), (1,), (0, 0), (Fraction(1, 2), 0)),
            _sliced(_circle_flip(Fraction(2, 3)), (1,), (Fraction(1, 3), 0), (Fraction(5, 6), 0)),
            _sliced(_circle_flip(Fraction(1, 3)), (1,), (Fraction(2, 3), 0), (Fraction(1, 6), 0)),
        ),
    )


def _klein_bottle() -> Scenario:
    glide = GeneratorSpec(((1, 0), (0, -1)), (Fraction(1, 2), Fraction(0)))
    return Scenario(
        "klein-bottle",
        ((1, 0), (0, 1)),
        (glide,),
        families=(_family((1, 0), 0), _family((0, 1), 0)),
    )


def _discrete_series(k: int) -> Scenario:
    return Scenario(
        f"discrete-series-{k}",
        ((1,),),
        (_circle_gen(Fraction(1, k)),),
        families=(_family((1,), 0),),
    )


_SCENARIO_BUILDERS = {
    "sp4-case1": _sp4_case1,
    "sp4-case2": _sp4_case2,
    "sp4-case3": _sp4_case3,
    "sp4-case4": _sp4_case4,
    "sp4-case5": _sp4_case5,
    "sp4-case6": _sp4_case6,
    "sp4-case7": _sp4_case7,
    "sp4-case8": _sp4_case8,
    "dim1-case-a": _dim1_case_a,
    "dim1-case-b": _dim1_case_b,
    "dim1-case-c": _dim1_case_c,
    "klein-bottle": _klein_bottle,
    "discrete-series-2": lambda: _discrete_series(2),
    "discrete-series-3": lambda: _discrete_series(3),
}

_SCENARIO_NOTES = {
    "sp4-case1": "dihedral of order 8, all four mirror circles sliced",
    "sp4-case2": "dihedral of order 8, diagonal mirrors sliced",
    "sp4-case3": "single diagonal reflection, mirror sliced",
    "sp4-case4": "Klein four-group, horizontal mirror sliced",
    "sp4-case5": "Klein four-group, unsliced",
    "sp4-case6": "single axis reflection, mirror sliced",
    "sp4-case7": "single axis reflection, unsliced",
    "sp4-case8": "trivial group on the torus",
    "dim1-case-a": "order-six dihedral circle action, unsliced",
    "dim1-case-b": "order-six dihedral circle action, one fixed-point orbit sliced",
    "dim1-case-c": "order-six dihedral circle action, both fixed-point orbits sliced",
    "klein-bottle": "free glide reflection; quotient is a Klein bottle",
    "discrete-series-2": "free rotation of order 2 on the circle",
    "discrete-series-3": "free rotation of order 3 on the circle",
}


def preset(name: str) -> Scenario:
    """The named built-in scenario.

    >>> preset("sp4-case5").options.systems
    'both'
    """
    try:
        return _SCENARIO_BUILDERS[name]()
    except KeyError:
        known = ", ".join(sorted(_SCENARIO_BUILDERS) + sorted(_CROSSED_BUILDERS))
        raise SchemaError(f"unknown preset {name!r}; available: {known}")


def _torus_group(lattice_rows, gen_specs, max_order: int = 64):
    lat = Lattice(lattice_rows)
    gens = [AffineTorusMap(lat, g.matrix, g.shift) for g in gen_specs]
    maps = close_affine_group(gens, max_order)
    group = FiniteGroup.from_elements(maps, lambda a, b: a.compose(b))
    return lat, group


def _torus_orbit(lat, group, seed):
    seen = [lat.reduce(tuple(Fraction(x) for x in seed))]
    for x in seen:
        for g in group.elements:
            y = lat.reduce(g.apply(x))
            if y not in seen:
                seen.append(y)
    action = lambda w, x: lat.reduce(group.elements[w].apply(x))
    return seen, action


@dataclass(frozen=True)
class CrossedDiagnostic:
    """One crossed-product health report: the algebra, its dual, and
    optionally one central ideal cut out by sliced weights."""

    name: str
    group_order: int
    points: int
    dimension: int
    orbits: tuple
    block_dims: tuple
    summand_rank: int | None
    summand_dimension: int | None


def _diag(name: str, algebra: FiniteCrossedProduct, weights=None) -> CrossedDiagnostic:
    classes = orbit_dual(algebra)
    rank = dim = None
    if weights is not None:
        summand = ideal_summand(algebra, *weights)
        rank, dim = summand.rank, summand.dimension
    return CrossedDiagnostic(
        name,
        algebra.group.n,
        len(algebra.points),
        algebra.dim,
        tuple(len(o) for o in algebra.orbits()),
        tuple(c.block_dim for c in classes),
        rank,
        dim,
    )


def _crossed_dihedral_axes() -> CrossedDiagnostic:
    lat, group = _torus_group(DOUBLED, _D4_GENS)
    points, action = _torus_orbit(lat, group, (1, 0))
    algebra = build_crossed_product(group, points, action, Cocycle.trivial(group))
    return _diag("crossed-dihedral-axes", algebra)


def _crossed_rotation_halved() -> CrossedDiagnostic:
    rot = GeneratorSpec(((0, -1), (1, 0)), ZERO2)
    lat, group = _torus_group(((1, 0), (0, 1)), (rot,))
    points, action = _torus_orbit(lat, group, (Fraction(1, 2), 0))
    algebra = build_crossed_product(group, points, action, Cocycle.trivial(group))
    sign = {w: (1 if w == 0 else -1) for w in algebra.stabilizer(0)}
    weights = propagate_weights(algebra, {points[0]: sign})
    return _diag("crossed-rotation-halved", algebra, weights)


def _crossed_glide_free() -> CrossedDiagnostic:
    glide = GeneratorSpec(((1, 0), (0, -1)), (Fraction(1, 2), Fraction(0)))
    lat, group = _torus_group(((1, 0), (0, 1)), (glide,))
    points, action = _torus_orbit(lat, group, (0, Fraction(1, 4)))
    algebra = build_crossed_product(group, points, action, Cocycle.trivial(group))
    return _diag("crossed-glide-free", algebra)


_CROSSED_BUILDERS = {
    "crossed-dihedral-axes": _crossed_dihedral_axes,
    "crossed-rotation-halved": _crossed_rotation_halved,
    "crossed-glide-free": _crossed_glide_free,
}

_CROSSED_NOTES = {
    "crossed-dihedral-axes": "dihedral of order 8 on the two axis points; Klein four-group stabilizers",
    "crossed-rotation-halved": "order-four rotation on a two-point orbit; sign weight on the half stabilizer",
    "crossed-glide-free": "free glide orbit; the crossed product is a full matrix algebra",
}


def crossed_diagnostic(name: str) -> CrossedDiagnostic:
    try:
        return _CROSSED_BUILDERS[name]()
    except KeyError:
        known = ", ".join(sorted(_CROSSED_BUILDERS))
        raise SchemaError(f"unknown crossed diagnostic {name!r}; available: {known}")


@dataclass(frozen=True)
class PresetInfo:
    name: str
    kind: str  # "scenario" or "crossed"
    description: str


def list_presets() -> list[PresetInfo]:
    """The full catalog, scenarios first, in definition order."""
    out = [PresetInfo(n, "scenario", _SCENARIO_NOTES[n]) for n in _SCENARIO_BUILDERS]
    out.extend(PresetInfo(n, "crossed", _CROSSED_NOTES[n]) for n in _CROSSED_BUILDERS)
    return out
