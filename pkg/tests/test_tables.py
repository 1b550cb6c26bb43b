"""Result-table invariants, export round-trips and the JSON schema."""

from __future__ import annotations

import json

import pytest

from thermomachine import PRESETS, ResultTable, from_csv, make_table, run_scenario, to_csv, to_json
from thermomachine.scenarios import Scenario
from thermomachine.tables import export, schema_text, validate_table_json


def small_table() -> ResultTable:
    return make_table(
        ("a", "b"),
        ((1.0, 2.0), (0.1 + 0.2, 1e-300), (float(2**53 - 1), -4.9406564584124654e-324)),
        {"scenario": "unit", "kind": "steady-sweep", "version": "0.1.0", "seed": 7},
    )


def test_rectangularity_enforced():
    with pytest.raises(ValueError):
        ResultTable(columns=("a", "b"), rows=((1.0,),))


def test_csv_round_trip_is_exact():
    table = small_table()
    back = from_csv(to_csv(table))
    assert back.columns == table.columns
    assert back.rows == table.rows
    assert back.meta["scenario"] == "unit"


def test_exports_are_byte_identical(tmp_path):
    table = small_table()
    p1 = export(table, "csv", tmp_path / "one.csv")
    p2 = export(table, "csv", tmp_path / "two.csv")
    assert p1.read_bytes() == p2.read_bytes()
    j1 = export(table, "json", tmp_path / "one.json")
    j2 = export(table, "json", tmp_path / "two.json")
    assert j1.read_bytes() == j2.read_bytes()


def test_header_only_csv_for_empty_sweep():
    scenario = Scenario(name="empty", kind="steady-sweep", T_prior=0.25, points=0)
    table = run_scenario(scenario)
    text = to_csv(table)
    body = [ln for ln in text.splitlines() if not ln.startswith("#")]
    assert body == ["T_prior,T,p0_inf,sensitivity,snr,snr_thermal,snr_at_prior"]
    assert text.endswith("\n")


def test_metadata_lines_are_hash_prefixed():
    text = to_csv(small_table())
    meta_lines = [ln for ln in text.splitlines() if ln.startswith("#")]
    assert "# scenario=unit" in meta_lines
    assert "# seed=7" in meta_lines


def test_json_export_matches_schema():
    table = run_scenario(Scenario(name="s", kind="steady-sweep", T_prior=0.2, points=5))
    payload = json.loads(to_json(table))
    validate_table_json(payload)


def test_json_schema_cross_checked_with_jsonschema():
    jsonschema = pytest.importorskip("jsonschema")
    schema = json.loads(schema_text())
    table = run_scenario(Scenario(name="s", kind="cost-comparison", T=0.1, T_prior=0.11, k_max=5))
    jsonschema.validate(json.loads(to_json(table)), schema)
    bad = {"meta": {}, "columns": ["a"], "rows": [[1.0]]}
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(bad, schema)
    with pytest.raises(ValueError):
        validate_table_json(bad)


def test_validate_rejects_malformed_payloads():
    good = json.loads(to_json(small_table()))
    validate_table_json(good)
    with pytest.raises(ValueError):
        validate_table_json([])
    with pytest.raises(ValueError):
        validate_table_json({"meta": good["meta"], "columns": ["a"]})
    ragged = dict(good, rows=[[1.0]])
    with pytest.raises(ValueError):
        validate_table_json(ragged)
    stringy = dict(good, rows=[["x", "y"], ["z", "w"]])
    with pytest.raises(ValueError):
        validate_table_json(stringy)


def test_unknown_format_rejected(tmp_path):
    with pytest.raises(ValueError):
        export(small_table(), "yaml", tmp_path / "t.yaml")


def test_json_refuses_non_finite_cells():
    table = make_table(
        ("a",), ((float("inf"),),), {"scenario": "x", "kind": "verify", "version": "0"}
    )
    with pytest.raises(ValueError):
        to_json(table)
    assert "inf" in to_csv(table)  # CSV still carries the undefined marker


def test_fig1b_round_trips_through_csv():
    table = run_scenario(PRESETS["fig1b"])
    back = from_csv(to_csv(table))
    assert back.rows == table.rows
