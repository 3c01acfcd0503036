"""Scenario files: parsing, serialization, presets, and the pipeline driver."""

import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from torusk.errors import GroupClosureError, SchemaError
from torusk.presets import crossed_diagnostic, list_presets, preset
from torusk.scenario import (
    Options,
    Scenario,
    build_pipeline,
    dump_scenario,
    load_scenario,
    run_scenario,
    scenario_from_dict,
    scenario_to_dict,
)


def minimal() -> dict:
    return {
        "name": "circle",
        "lattice": [[1]],
        "generators": [{"matrix": [[-1]], "shift": ["0"]}],
    }


SCENARIO_PRESETS = [p.name for p in list_presets() if p.kind == "scenario"]
CROSSED_PRESETS = [p.name for p in list_presets() if p.kind == "crossed"]


class TestSerialization:
    @pytest.mark.parametrize("name", SCENARIO_PRESETS)
    def test_presets_round_trip_unchanged(self, name):
        sc = preset(name)
        data = scenario_to_dict(sc)
        assert scenario_from_dict(data) == sc
        assert scenario_to_dict(scenario_from_dict(data)) == data
        assert json.loads(dump_scenario(sc)) == data

    def test_defaults_are_omitted(self):
        data = scenario_to_dict(scenario_from_dict(minimal()))
        assert set(data) == {"name", "lattice", "generators"}

    def test_non_defaults_survive(self):
        raw = minimal()
        raw["options"] = {"systems": "blowup", "check": "full", "max_group_order": 8}
        raw["cocycle"] = {"modulus": 2, "pairs": [[1, 1, 1]]}
        sc = scenario_from_dict(raw)
        assert sc.options == Options("blowup", "full", 8)
        data = scenario_to_dict(sc)
        assert data["options"] == raw["options"]
        assert data["cocycle"] == raw["cocycle"]

    def test_load_scenario_reads_files(self, tmp_path):
        sc = preset("dim1-case-b")
        path = tmp_path / "sc.json"
        path.write_text(dump_scenario(sc))
        assert load_scenario(str(path)) == sc

    def test_shipped_examples_match_presets(self):
        import pathlib

        root = pathlib.Path(__file__).resolve().parent.parent / "docs" / "scenarios"
        for name in ["sp4-case1", "dim1-case-b", "klein-bottle"]:
            assert load_scenario(str(root / f"{name}.json")) == preset(name)

    @given(st.fractions())
    def test_rationals_survive_the_string_form(self, q):
        assert Fraction(str(q)) == q


class TestValidation:
    def bad(self, raw, needle):
        with pytest.raises(SchemaError, match=needle):
            scenario_from_dict(raw)

    def test_unknown_top_level_field(self):
        raw = minimal()
        raw["extra"] = 1
        self.bad(raw, "unknown fields.*extra")

    def test_missing_name(self):
        raw = minimal()
        del raw["name"]
        self.bad(raw, "name")

    def test_ragged_lattice(self):
        raw = minimal()
        raw["lattice"] = [[1, 0], [1]]
        self.bad(raw, "lattice")

    def test_float_shift(self):
        raw = minimal()
        raw["generators"][0]["shift"] = [0.5]
        self.bad(raw, "shift.*rational")

    def test_wrong_matrix_shape(self):
        raw = minimal()
        raw["generators"][0]["matrix"] = [[1, 0]]
        self.bad(raw, r"generators\[0\].matrix")

    def test_bad_cocycle_pair(self):
        raw = minimal()
        raw["cocycle"] = {"modulus": 2, "pairs": [[1, 1]]}
        self.bad(raw, r"cocycle.pairs\[0\]")

    def test_zero_modulus(self):
        raw = minimal()
        raw["cocycle"] = {"modulus": 0}
        self.bad(raw, "modulus")

    def test_family_without_offsets(self):
        raw = minimal()
        raw["families"] = [{"normal": [1], "offsets": []}]
        self.bad(raw, r"families\[0\].offsets")

    def test_sliced_missing_reflection(self):
        raw = minimal()
        raw["sliced"] = [{"normal": [1], "loci": [{"offset": "0"}]}]
        self.bad(raw, r"sliced\[0\].reflection")

    def test_sliced_empty_loci(self):
        raw = minimal()
        raw["sliced"] = [
            {"reflection": {"matrix": [[-1]], "shift": ["0"]}, "normal": [1], "loci": []}
        ]
        self.bad(raw, r"sliced\[0\].loci")

    def test_bad_systems_option(self):
        raw = minimal()
        raw["options"] = {"systems": "neither"}
        self.bad(raw, "options.systems")

    def test_bad_check_option(self):
        raw = minimal()
        raw["options"] = {"check": "paranoid"}
        self.bad(raw, "options.check")

    def test_bad_max_group_order(self):
        raw = minimal()
        raw["options"] = {"max_group_order": 0}
        self.bad(raw, "max_group_order")

    def test_unreadable_file(self, tmp_path):
        with pytest.raises(SchemaError, match="cannot read"):
            load_scenario(str(tmp_path / "missing.json"))

    def test_invalid_json_file(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{")
        with pytest.raises(SchemaError, match="not valid JSON"):
            load_scenario(str(path))


class TestRun:
    def test_reflection_circle(self):
        # two mirror points, each contributing the rank-2 ring of Z/2
        report = run_scenario(scenario_from_dict(minimal()))
        assert report.dim == 1
        assert [str(g) for g in report.bredon["blowup"]] == ["Z^3", "0"]
        assert report.verdict.ok

    def test_systems_selection(self):
        raw = minimal()
        raw["options"] = {"systems": "blowup"}
        report = run_scenario(scenario_from_dict(raw))
        assert set(report.bredon) == {"blowup"}
        assert report.verdict is None

    def test_x_side_only(self):
        raw = minimal()
        raw["options"] = {"systems": "x-side"}
        report = run_scenario(scenario_from_dict(raw))
        assert set(report.bredon) == {"x-side"}
        assert str(report.k0) == "Z^3"

    def test_full_check_runs_clean(self):
        sc = preset("dim1-case-b")
        raw = scenario_to_dict(sc)
        raw["options"] = {"check": "full"}
        report = run_scenario(scenario_from_dict(raw))
        assert report.verdict.ok

    def test_group_closure_bound(self):
        raw = scenario_to_dict(preset("sp4-case1"))
        raw["options"] = {"max_group_order": 4}
        with pytest.raises(GroupClosureError):
            run_scenario(scenario_from_dict(raw))

    def test_cocycle_index_out_of_bounds(self):
        raw = minimal()
        raw["cocycle"] = {"modulus": 2, "pairs": [[5, 1, 1]]}
        with pytest.raises(SchemaError, match="outside the closed group"):
            run_scenario(scenario_from_dict(raw))

    def test_foreign_reflection(self):
        raw = minimal()
        raw["sliced"] = [
            {
                "reflection": {"matrix": [[-1]], "shift": ["1/5"]},
                "normal": [1],
                "loci": [{"offset": "1/10", "weight": "0"}],
            }
        ]
        with pytest.raises(SchemaError, match="not a group element"):
            run_scenario(scenario_from_dict(raw))

    def test_pipeline_state_exposes_stages(self):
        state = build_pipeline(preset("discrete-series-3"))
        assert state.group.n == 3
        assert set(state.systems) == {"blowup", "x-side"}


class TestCatalog:
    def test_exactly_eight_sp4_presets(self):
        assert sum(name.startswith("sp4-") for name in SCENARIO_PRESETS) == 8

    def test_three_dim1_slicing_patterns(self):
        assert [n for n in SCENARIO_PRESETS if n.startswith("dim1-")] == [
            "dim1-case-a",
            "dim1-case-b",
            "dim1-case-c",
        ]

    def test_names_unique_and_match_scenarios(self):
        infos = list_presets()
        assert len({p.name for p in infos}) == len(infos)
        for name in SCENARIO_PRESETS:
            assert preset(name).name == name

    def test_unknown_preset(self):
        with pytest.raises(SchemaError, match="unknown preset.*available"):
            preset("sp4-case9")

    def test_unknown_crossed_diagnostic(self):
        with pytest.raises(SchemaError, match="unknown crossed diagnostic"):
            crossed_diagnostic("crossed-nothing")

    @pytest.mark.parametrize("name", CROSSED_PRESETS)
    def test_crossed_diagnostics_run(self, name):
        diag = crossed_diagnostic(name)
        assert diag.dimension == diag.group_order * diag.points
        assert sum(d * d for d in diag.block_dims) == diag.dimension
