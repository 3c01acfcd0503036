"""Print the eight-case results table for the rank-two symplectic presets.

    python3 scripts/sp4_table.py

Each case is one Plancherel component: a Weyl group acting on the
doubled square torus with a slicing pattern determined by which
reflections detect the component's inducing character.  The table
shows the Bredon cohomology of the blown-up space and the resulting
K-groups.
"""

from torusk.presets import list_presets, preset
from torusk.scenario import build_pipeline, run_scenario

HEADER = f"{'case':<12} {'|W|':>3} {'cells':>10} {'sliced':>6}   {'H0':<8} {'H1':<8} {'H2':<8} {'K0':<8} {'K1':<8}"


def main() -> None:
    print(HEADER)
    print("-" * len(HEADER))
    for info in list_presets():
        if not info.name.startswith("sp4-"):
            continue
        sc = preset(info.name)
        state = build_pipeline(sc)
        report = run_scenario(sc)
        h = [str(g) for g in report.bredon["blowup"]]
        cells = "x".join(str(c) for c in state.complex.counts)
        print(
            f"{info.name:<12} {state.group.n:>3} {cells:>10} {len(sc.sliced):>6}   "
            f"{h[0]:<8} {h[1]:<8} {h[2]:<8} {str(report.k0):<8} {str(report.k1):<8}"
        )


if __name__ == "__main__":
    main()
