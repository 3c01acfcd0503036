"""Finite twisted crossed products C(O) x_c W as explicit *-algebras.

For a finite W-set O and a normalized 2-cocycle c on W, the crossed
product is the algebra on the basis {delta_x . w : x in O, w in W} with

    (delta_x v)(delta_y w) = [x = v y] omega(v, w) delta_x (v w)
    (delta_x w)*           = conj(omega(w^{-1}, w)) delta_{w^{-1} x} w^{-1}

where omega is the root-of-unity value of the cocycle.  Everything is
exact: coefficients are cyclotomic numbers and every algebraic identity
is checked symbolically.

The dual is classified orbitwise by twisted characters of a basepoint
stabilizer (``orbit_dual``); a family of one-dimensional weights on
normal subgroups of the stabilizers cuts out a central projection and
an ideal whose K_0 rank is the number of dual classes lying over the
weights (``ideal_summand``).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .cyclotomic import Cyclotomic
from .errors import InvariantViolation, SchemaError
from .groups import Cocycle, FiniteGroup, lying_over_indices, twisted_character_table

_ONE = Cyclotomic.rational(1)


def _coefficient(value) -> Cyclotomic:
    if isinstance(value, Cyclotomic):
        return value
    return Cyclotomic.rational(Fraction(value))


class FiniteCrossedProduct:
    """The twisted crossed product of a finite W-set, as structure data.

    Elements are dicts mapping (point position, group index) to nonzero
    Cyclotomic coefficients; ``mult``, ``star``, ``add`` and ``scale``
    keep that normal form, so dict equality is element equality.
    Construct through ``build_crossed_product``, which validates the
    action and the *-algebra identities.
    """

    def __init__(self, group: FiniteGroup, points, perm, cocycle: Cocycle):
        self.group = group
        self.points = tuple(points)
        self.index = {p: i for i, p in enumerate(self.points)}
        self.perm = perm
        self.cocycle = cocycle
        self._tables = {}

    @property
    def dim(self) -> int:
        return len(self.points) * self.group.n

    def basis_keys(self):
        return [(x, w) for x in range(len(self.points)) for w in range(self.group.n)]

    def delta(self, point, w: int = 0) -> dict:
        """The basis element delta_point . w (w an index, default identity)."""
        return {(self.index[point], w): _ONE}

    def one(self) -> dict:
        return {(x, 0): _ONE for x in range(len(self.points))}

    def zero(self) -> dict:
        return {}

    def add(self, a: dict, b: dict) -> dict:
        out = dict(a)
        for key, c in b.items():
            s = out.get(key)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
        return out

    def scale(self, value, a: dict) -> dict:
        c = _coefficient(value)
        if c.is_zero():
            return {}
        return {key: c * v for key, v in a.items()}

    def mult(self, a: dict, b: dict) -> dict:
        by_point = {}
        for (y, w), c in b.items():
            by_point.setdefault(y, []).append((w, c))
        out = {}
        for (x, v), c in a.items():
            y = self.perm[self.group.inv(v)][x]
            for w, cw in by_point.get(y, ()):
                key = (x, self.group.mult(v, w))
                s = c * cw * self.cocycle.omega(v, w)
                t = out.get(key)
                s = s if t is None else t + s
                if s.is_zero():
                    out.pop(key, None)
                else:
                    out[key] = s
        return out

    def star(self, a: dict) -> dict:
        out = {}
        for (x, w), c in a.items():
            wi = self.group.inv(w)
            out[(self.perm[wi][x], wi)] = c.conjugate() * self.cocycle.omega(wi, w).conjugate()
        return out

    def is_central(self, a: dict) -> bool:
        for key in self.basis_keys():
            d = {key: _ONE}
            if self.mult(a, d) != self.mult(d, a):
                return False
        return True

    def left_regular_trace(self, a: dict) -> Cyclotomic:
        """Trace of left multiplication by ``a`` on the algebra itself."""
        total = Cyclotomic.rational(0)
        for key in self.basis_keys():
            total = total + self.mult(a, {key: _ONE}).get(key, Cyclotomic.rational(0))
        return total

    def orbits(self) -> tuple[tuple[int, ...], ...]:
        """The W-orbits as sorted tuples of point positions."""
        seen = set()
        out = []
        for start in range(len(self.points)):
            if start in seen:
                continue
            orbit = {self.perm[w][start] for w in range(self.group.n)}
            seen |= orbit
            out.append(tuple(sorted(orbit)))
        return tuple(out)

    def stabilizer(self, x: int) -> tuple[int, ...]:
        """Sorted group indices fixing point position x."""
        return tuple(w for w in range(self.group.n) if self.perm[w][x] == x)

    def stabilizer_table(self, x: int):
        """Twisted character table of the stabilizer of point position x."""
        stab = self.stabilizer(x)
        if stab not in self._tables:
            sub = self.group.subgroup(stab)
            self._tables[stab] = twisted_character_table(sub, self.cocycle.restrict(sub))
        return self._tables[stab]


def build_crossed_product(group: FiniteGroup, points, action, cocycle: Cocycle) -> FiniteCrossedProduct:
    """Build and validate C(points) x_c group for ``action(w, point)``.

    ``points`` is a sequence of distinct hashable labels, ``action``
    takes a group index and a label to a label.  The action must be a
    genuine group action (the cocycle twists the algebra, never the
    space); the resulting structure constants are checked to be
    associative and the involution to be an anti-automorphism.
    """
    points = tuple(points)
    if not points:
        raise SchemaError("crossed product needs at least one point")
    if len(set(points)) != len(points):
        raise SchemaError("orbit points are not distinct")
    if cocycle.group.elements != group.elements or cocycle.group.table != group.table:
        raise SchemaError("cocycle is defined on a different group")
    index = {p: i for i, p in enumerate(points)}
    perm = []
    for w in range(group.n):
        row = []
        for p in points:
            q = action(w, p)
            if q not in index:
                raise SchemaError(f"action sends {p!r} outside the point set")
            row.append(index[q])
        if len(set(row)) != len(row):
            raise SchemaError("action is not bijective on the points")
        perm.append(tuple(row))
    if perm[0] != tuple(range(len(points))):
        raise SchemaError("identity does not act trivially")
    for g in range(group.n):
        for h in range(group.n):
            gh = group.mult(g, h)
            if any(perm[g][perm[h][x]] != perm[gh][x] for x in range(len(points))):
                raise SchemaError("action is not compatible with the group law")
    algebra = FiniteCrossedProduct(group, points, perm, cocycle)
    _validate_star_algebra(algebra)
    return algebra


def _validate_star_algebra(algebra: FiniteCrossedProduct, samples: int = 400) -> None:
    """Associativity and involution identities, exhaustive when small."""
    keys = algebra.basis_keys()
    one = algebra.one()
    for key in keys:
        d = {key: _ONE}
        if algebra.mult(one, d) != d or algebra.mult(d, one) != d:
            raise InvariantViolation("unit fails on a basis element")
        if algebra.star(algebra.star(d)) != d:
            raise InvariantViolation("involution is not of order two")
    n = len(keys)
    if n**3 <= 20000:
        triples = [(a, b, c) for a in keys for b in keys for c in keys]
        pairs = [(a, b) for a in keys for b in keys]
    else:
        rng = random.Random(7)
        triples = [tuple(rng.choice(keys) for _ in range(3)) for _ in range(samples)]
        pairs = [tuple(rng.choice(keys) for _ in range(2)) for _ in range(samples)]
    for ka, kb, kc in triples:
        a, b, c = {ka: _ONE}, {kb: _ONE}, {kc: _ONE}
        if algebra.mult(algebra.mult(a, b), c) != algebra.mult(a, algebra.mult(b, c)):
            raise InvariantViolation("structure constants are not associative")
    for ka, kb in pairs:
        a, b = {ka: _ONE}, {kb: _ONE}
        lhs = algebra.star(algebra.mult(a, b))
        rhs = algebra.mult(algebra.star(b), algebra.star(a))
        if lhs != rhs:
            raise InvariantViolation("involution is not an anti-automorphism")


@dataclass(frozen=True)
class DualClass:
    """One irreducible block of the crossed product.

    The block is induced from the ``char_index``-th twisted character of
    the stabilizer of ``basepoint``; its matrix size is
    ``block_dim = |orbit| * degree``.
    """

    basepoint: object
    orbit: tuple
    char_index: int
    degree: int
    block_dim: int


def orbit_dual(algebra: FiniteCrossedProduct) -> list[DualClass]:
    """Dual classes, one per (orbit, stabilizer twisted character).

    The matrix blocks are checked to fill each orbit summand:
    sum of block_dim^2 over an orbit equals |orbit| * |W|.
    """
    out = []
    for orbit in algebra.orbits():
        x = orbit[0]
        tab = algebra.stabilizer_table(x)
        dims = [len(orbit) * d for d in tab.degrees]
        if sum(m * m for m in dims) != len(orbit) * algebra.group.n:
            raise InvariantViolation("dual blocks do not fill the orbit summand")
        for i, d in enumerate(tab.degrees):
            out.append(DualClass(algebra.points[x], orbit, i, d, len(orbit) * d))
    return out


def imprimitivity_corner(algebra: FiniteCrossedProduct, point) -> list[tuple[int, int]]:
    """Basis keys of the corner delta_x A delta_x.

    The corner is the twisted group algebra of the stabilizer of x:
    its basis keys are exactly (x, w) for w fixing x, and the corner
    products reproduce the cocycle.  Both facts are verified.
    """
    x = algebra.index[point]
    p = algebra.delta(point)
    stab = algebra.stabilizer(x)
    keys = set()
    for key in algebra.basis_keys():
        keys |= algebra.mult(p, algebra.mult({key: _ONE}, p)).keys()
    if keys != {(x, w) for w in stab}:
        raise InvariantViolation("corner basis does not match the stabilizer")
    for v in stab:
        for w in stab:
            prod = algebra.mult(algebra.delta(point, v), algebra.delta(point, w))
            want = {(x, algebra.group.mult(v, w)): algebra.cocycle.omega(v, w)}
            if prod != want:
                raise InvariantViolation("corner product deviates from the twisted group algebra")
    return sorted(keys)


def propagate_weights(algebra: FiniteCrossedProduct, seeds: dict):
    """Extend weight data from one point per orbit to the whole orbit.

    ``seeds`` maps a point label to {group index: value} prescribing a
    subgroup W' of its stabilizer together with one-dimensional weights.
    Conjugating by every group element spreads the data over the orbit:

        iota(w v w^{-1}, w x) = iota(v, x) omega(w v, w^{-1}) omega(w, v)
                                  conj(omega(w, w^{-1}))

    Raises when different routes to the same point disagree.  Returns a
    (wprime, iota) pair covering every point of the seeded orbits,
    ready for ``ideal_summand``.
    """
    wprime = {}
    iota = {}
    group = algebra.group
    om = algebra.cocycle.omega
    for label, seed in seeds.items():
        if label not in algebra.index:
            raise SchemaError(f"seed point {label!r} is not in the orbit")
        x = algebra.index[label]
        for w in range(group.n):
            y = algebra.perm[w][x]
            target = algebra.points[y]
            moved = {}
            for v, value in seed.items():
                wv = group.mult(w, v)
                factor = om(wv, group.inv(w)) * om(w, v) * om(w, group.inv(w)).conjugate()
                moved[group.conj(w, v)] = _coefficient(value) * factor
            if target in iota and iota[target] != moved:
                raise InvariantViolation(
                    "weights do not extend consistently over the orbit"
                )
            iota[target] = moved
            wprime[target] = sorted(moved)
    return wprime, iota


@dataclass(frozen=True)
class IdealSummand:
    """The ideal cut out of the crossed product by weight data.

    ``projection`` is the verified central projection, ``classes`` the
    dual classes lying over the weights, ``rank`` their count (the K_0
    rank of the ideal) and ``dimension`` the linear dimension of the
    ideal, equal to the trace of the projection in the left regular
    representation.
    """

    projection: dict = field(compare=False)
    rank: int
    dimension: int
    classes: tuple


def ideal_summand(algebra: FiniteCrossedProduct, wprime: dict, iota: dict) -> IdealSummand:
    """Central projection and ideal rank from subgroup weight data.

    ``wprime`` maps point labels to subgroups of their stabilizers
    (element indices); ``iota`` maps point labels to one-dimensional
    weights on those subgroups, multiplicative against the conjugate
    cocycle.  Points left out carry the trivial subgroup.  The
    projection

        P = sum_z |W'_z|^{-1} sum_{w in W'_z} iota(w, z) delta_z w

    is verified idempotent, self-adjoint and central, and the lying-over
    count is cross-checked against the trace of P in the left regular
    representation.
    """
    group = algebra.group
    data = {}
    for x, label in enumerate(algebra.points):
        sub = sorted(wprime.get(label, [0]))
        vals = {w: _coefficient(v) for w, v in iota.get(label, {0: 1}).items()}
        if sorted(vals) != sub:
            raise SchemaError(f"weights at {label!r} do not cover the subgroup")
        stab = set(algebra.stabilizer(x))
        if not set(sub) <= stab:
            raise InvariantViolation(f"subgroup at {label!r} does not fix the point")
        if not group.is_subgroup(sub):
            raise InvariantViolation(f"indices at {label!r} are not a subgroup")
        if any(group.conj(g, v) not in set(sub) for g in stab for v in sub):
            raise InvariantViolation(f"subgroup at {label!r} is not normal in the stabilizer")
        for v in sub:
            for w in sub:
                lhs = vals[v] * vals[w]
                rhs = algebra.cocycle.omega(v, w).conjugate() * vals[group.mult(v, w)]
                if lhs != rhs:
                    raise InvariantViolation(
                        f"weights at {label!r} are not a conjugate-twisted character"
                    )
        data[x] = (sub, vals)
    projection = {}
    for x, (sub, vals) in data.items():
        share = Fraction(1, len(sub))
        for w in sub:
            projection[(x, w)] = Cyclotomic.rational(share) * vals[w]
    p = {k: v for k, v in projection.items() if not v.is_zero()}
    if algebra.mult(p, p) != p:
        raise InvariantViolation("weight data does not give an idempotent")
    if algebra.star(p) != p:
        raise InvariantViolation("weight data does not give a self-adjoint element")
    if not algebra.is_central(p):
        raise InvariantViolation("projection is not central: weights are not conjugation-compatible")
    classes = []
    for orbit in algebra.orbits():
        x = orbit[0]
        tab = algebra.stabilizer_table(x)
        sub_ix, vals = data[x]
        positions = [tab.group.index[w] for w in sub_ix]
        inner = tab.group.subgroup(positions)
        weights = tuple(vals[tab.group.elements[pos]] for pos in inner.elements)
        lying = set(lying_over_indices(tab, inner, weights))
        for i, d in enumerate(tab.degrees):
            if i in lying:
                classes.append(DualClass(algebra.points[x], orbit, i, d, len(orbit) * d))
    trace = algebra.left_regular_trace(p)
    dimension = sum(c.block_dim**2 for c in classes)
    if trace != Cyclotomic.rational(dimension):
        raise InvariantViolation("ideal dimension does not match the lying-over classes")
    return IdealSummand(p, len(classes), dimension, tuple(classes))
