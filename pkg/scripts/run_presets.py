"""Run every built-in scenario and print a one-line summary per preset.

    python3 scripts/run_presets.py [--check-invariants full]

Useful as a quick regression sweep: each line shows the Bredon groups,
the assembled K-groups, the cross-check verdict, and the runtime.
"""

import argparse
import time
from dataclasses import replace

from torusk.presets import list_presets, preset
from torusk.scenario import make_options, run_scenario


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--check-invariants", choices=["fast", "full"], default="fast")
    args = parser.parse_args()

    total = time.perf_counter()
    for info in list_presets():
        if info.kind != "scenario":
            continue
        sc = preset(info.name)
        opts = make_options(sc.options.systems, args.check_invariants, sc.options.max_group_order)
        start = time.perf_counter()
        report = run_scenario(replace(sc, options=opts))
        elapsed = time.perf_counter() - start
        h = ", ".join(str(g) for g in report.bredon["blowup"])
        verdict = str(report.verdict) if report.verdict else "single system"
        print(
            f"{info.name:<18} H* = ({h:<14}) K0 = {str(report.k0):<8} "
            f"K1 = {str(report.k1):<8} cross-check {verdict:<6} {elapsed:6.2f}s"
        )
    print(f"{'total':<18} {time.perf_counter() - total:63.2f}s")


if __name__ == "__main__":
    main()
