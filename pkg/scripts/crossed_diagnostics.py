"""Walk through the crossed-product diagnostics in detail.

    python3 scripts/crossed_diagnostics.py

For each diagnostic this prints the orbit structure, the corner
algebras at each basepoint, the dual classes with their block sizes,
and, where weights are attached, the central ideal they cut out.
"""

from torusk.presets import _CROSSED_BUILDERS  # the three named constructions
from torusk.crossed import imprimitivity_corner, orbit_dual


def describe(name, build):
    print(f"== {name}")
    diag = build()
    print(f"   group order {diag.group_order}, {diag.points} points, dimension {diag.dimension}")
    for size in diag.orbits:
        print(f"   orbit of size {size}")
    print(f"   dual blocks: {', '.join(str(d) + 'x' + str(d) for d in diag.block_dims)}")
    total = sum(d * d for d in diag.block_dims)
    print(f"   sum of squares {total} == dimension {diag.dimension}")
    if diag.summand_rank is not None:
        print(
            f"   weighted ideal: rank {diag.summand_rank}, dimension "
            f"{diag.summand_dimension} of {diag.dimension}"
        )
    print()


def corners_demo():
    """Corner at a point = twisted group algebra of its stabilizer."""
    from torusk.groups import Cocycle
    from torusk.presets import _torus_group, _torus_orbit, DOUBLED, _D4_GENS
    from torusk.crossed import build_crossed_product

    lat, group = _torus_group(DOUBLED, _D4_GENS)
    points, action = _torus_orbit(lat, group, (1, 0))
    algebra = build_crossed_product(group, points, action, Cocycle.trivial(group))
    for p in points:
        keys = imprimitivity_corner(algebra, p)
        print(f"   corner at {tuple(str(c) for c in p)}: {len(keys)} basis elements")
    classes = orbit_dual(algebra)
    for c in classes:
        print(
            f"   class over character {c.char_index} (degree {c.degree}): "
            f"block {c.block_dim}x{c.block_dim}"
        )


def main() -> None:
    for name, build in _CROSSED_BUILDERS.items():
        describe(name, build)
    print("== corners and induced blocks for the dihedral axes orbit")
    corners_demo()


if __name__ == "__main__":
    main()
