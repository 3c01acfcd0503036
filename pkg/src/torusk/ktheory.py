"""From Bredon cohomology to K-groups via the collapsing spectral sequence.

The K-theory of a component algebra is computed by a spectral sequence
whose E^2 page holds the equivariant cohomology groups in reversed
filtration degree, one Bott parity only:

    E^2_{p,q} = H^{n-p+1}   if q + n is odd,    0   if q + n is even,

converging to K_{p+q} with d^2 = 0.  In dimension n <= 2 every higher
differential vanishes for degree reasons, H^0 is torsion-free, and the
extension problems are trivial, so

    K_0 = H^0 + H^2,    K_1 = H^1

exactly.  In higher dimension only the rational statement survives:
rank K_0 = sum of even ranks, rank K_1 = sum of odd ranks; integral
answers are never fabricated there.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import SchemaError
from .exactla import AbelianGroupInv

RATIONAL_CAVEAT = "integral groups left open: higher differentials and extensions unresolved"


def e2_page(groups, n: int) -> dict:
    """Sparse E^2 page {(p, q): group} for p in 0..n+1 and q in {0, 1}.

    Only nonzero entries are stored; all of them sit in the single Bott
    parity q = n + 1 mod 2, so every key satisfies (q + n) odd.
    """
    _require_degrees(groups, n)
    q = (n + 1) % 2
    table = {}
    for p in range(n + 2):
        deg = n - p + 1
        if 0 <= deg <= n and not groups[deg].is_trivial():
            table[(p, q)] = groups[deg]
    return table


def rational_k(groups) -> tuple[int, int]:
    """(rank K_0 x Q, rank K_1 x Q): even and odd rank sums."""
    r0 = sum(g.rank for i, g in enumerate(groups) if i % 2 == 0)
    r1 = sum(g.rank for i, g in enumerate(groups) if i % 2 == 1)
    return r0, r1


@dataclass(frozen=True)
class KGroups:
    """K_0 and K_1 with an exactness flag.

    ``k0`` and ``k1`` are None when only the rational answer is
    available (dimension >= 3); ``rank0`` and ``rank1`` are always
    filled.
    """

    k0: AbelianGroupInv | None
    k1: AbelianGroupInv | None
    rank0: int
    rank1: int
    exact: bool
    caveat: str | None


def k_groups(groups, n: int) -> KGroups:
    """Assemble K-groups from the Bredon groups H^0..H^n."""
    _require_degrees(groups, n)
    r0, r1 = rational_k(groups)
    if n > 2:
        return KGroups(None, None, r0, r1, False, RATIONAL_CAVEAT)
    padded = list(groups) + [AbelianGroupInv(0)] * (3 - len(groups))
    k0 = padded[0].direct_sum(padded[2])
    k1 = padded[1]
    if (k0.rank, k1.rank) != (r0, r1):
        raise SchemaError("rank bookkeeping failed")
    return KGroups(k0, k1, r0, r1, True, None)


@dataclass(frozen=True)
class CrossCheck:
    """Degreewise comparison of two Bredon computations."""

    ok: bool
    degree: int | None = None
    left: AbelianGroupInv | None = None
    right: AbelianGroupInv | None = None

    def __str__(self) -> str:
        if self.ok:
            return "agree"
        if self.degree is None:
            return "disagree: degree ranges differ"
        return f"disagree at degree {self.degree}: {self.left} vs {self.right}"


def cross_check(x_side, blowup_side) -> CrossCheck:
    """Compare the two coefficient-system computations degree by degree."""
    if len(x_side) != len(blowup_side):
        return CrossCheck(False)
    for k, (a, b) in enumerate(zip(x_side, blowup_side)):
        if a != b:
            return CrossCheck(False, k, a, b)
    return CrossCheck(True)


@dataclass(frozen=True)
class KReport:
    """Everything the pipeline knows about one scenario.

    ``bredon`` maps a system name ("blowup", "x-side") to its groups by
    degree; the E^2 page and K-groups are assembled from the blow-up
    system when present, otherwise from the only one computed.
    """

    scenario: str
    dim: int
    bredon: dict
    e2: dict
    k0: AbelianGroupInv | None
    k1: AbelianGroupInv | None
    rank0: int
    rank1: int
    exact: bool
    caveat: str | None
    verdict: CrossCheck | None


def assemble_report(scenario: str, n: int, bredon: dict) -> KReport:
    """Build a KReport from per-system Bredon groups."""
    if not bredon:
        raise SchemaError("no Bredon computation to report")
    for name, groups in bredon.items():
        _require_degrees(groups, n)
    groups = bredon.get("blowup") or next(iter(bredon.values()))
    k = k_groups(groups, n)
    verdict = None
    if "blowup" in bredon and "x-side" in bredon:
        verdict = cross_check(bredon["x-side"], bredon["blowup"])
    return KReport(
        scenario=scenario,
        dim=n,
        bredon=dict(bredon),
        e2=e2_page(groups, n),
        k0=k.k0,
        k1=k.k1,
        rank0=k.rank0,
        rank1=k.rank1,
        exact=k.exact,
        caveat=k.caveat,
        verdict=verdict,
    )


def _require_degrees(groups, n: int) -> None:
    if n < 0:
        raise SchemaError("dimension must be nonnegative")
    if len(groups) != n + 1:
        raise SchemaError(f"expected {n + 1} Bredon groups for dimension {n}, got {len(groups)}")
    if not all(isinstance(g, AbelianGroupInv) for g in groups):
        raise SchemaError("Bredon groups must be abelian-group invariants")
