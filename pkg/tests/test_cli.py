"""CLI contract: exit codes, report files, schema validity, determinism."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import pytest
from jsonschema import Draft202012Validator
from referencing import Registry, Resource

from soscert.cli import main


def _validator(schema_name: str) -> Draft202012Validator:
    schema_dir = resources.files("soscert") / "schemas"
    registry = Registry()
    for f in schema_dir.iterdir():
        if f.name.endswith(".schema.json"):
            res = Resource.from_contents(json.loads(f.read_text()))
            registry = registry.with_resource(f"soscert/{f.name}", res)
            registry = registry.with_resource(f.name, res)
    schema = json.loads((schema_dir / schema_name).read_text())
    return Draft202012Validator(schema, registry=registry)


def _validate(payload: dict, schema_name: str) -> None:
    _validator(schema_name).validate(payload)


def test_theorem2_pass(tmp_path):
    out = tmp_path / "r"
    code = main(
        ["theorem2", "--n", "5", "--d", "1", "--out", str(out), "--format", "both"]
    )
    assert code == 0
    payload = json.loads((out / "theorem2_n5_d1.json").read_text())
    _validate(payload, "theorem2_run.schema.json")
    assert payload["reports"][0]["objective_raw"] == "-1/4"
    assert payload["manifest"]["subcommand"] == "theorem2"
    csv_text = (out / "theorem2_n5_d1.csv").read_text()
    assert csv_text.splitlines()[0] == (
        "n,d,t,normalization_sum,g_sum,g_closed,reduced_psd,bruteforce_psd,pass"
    )


def test_theorem2_invalid_arguments(tmp_path):
    # d out of range for n surfaces as exit 2
    assert main(["theorem2", "--n", "5", "--d", "4", "--out", str(tmp_path)]) == 2
    assert main(["theorem2", "--n", "6", "--d", "1", "--out", str(tmp_path)]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["theorem2", "--n", "5"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit):
        main(["no-such-subcommand"])


def test_theorem2_sweep(tmp_path):
    out = tmp_path / "r"
    code = main(["theorem2-sweep", "--n-max", "5", "--out", str(out)])
    assert code == 0
    payload = json.loads((out / "theorem2_sweep.json").read_text())
    _validate(payload, "theorem2_run.schema.json")
    keys = [(r["n"], r["d"]) for r in payload["reports"]]
    assert keys == [(3, 1), (5, 1), (5, 2)]  # sorted by instance key
    rows = (out / "theorem2_sweep.csv").read_text().splitlines()
    assert len(rows) == 4


def test_rank_k_single_and_schema(tmp_path):
    out = tmp_path / "r"
    code = main(
        ["rank-k", "--n", "6", "--restarts", "8", "--seed", "5", "--out", str(out)]
    )
    assert code == 0
    payload = json.loads((out / "rank_k.json").read_text())
    _validate(payload, "rank_run.schema.json")
    assert payload["reports"][0]["rank"] == 3
    assert payload["consistency_problems"] == []


def test_rank_k_requires_exactly_one_size(tmp_path):
    assert main(["rank-k", "--out", str(tmp_path)]) == 2
    assert (
        main(["rank-k", "--n", "4", "--n-max", "6", "--out", str(tmp_path)]) == 2
    )


def test_rank_k_determinism_byte_identical(tmp_path):
    args = ["rank-k", "--n-max", "7", "--restarts", "8", "--seed", "11"]
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    for name in ["rank_k.json", "rank_k.csv"]:
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_criterion_psd_and_failure(tmp_path):
    good = tmp_path / "good.json"
    good.write_text(json.dumps({"n": 4, "weights": ["1/16", "1/16", "1/16", "1/16", "1/16"]}))
    out = tmp_path / "r1"
    assert main(["criterion", "--weights", str(good), "--t", "2", "--out", str(out)]) == 0
    payload = json.loads((out / "criterion.json").read_text())
    _validate(payload, "criterion_run.schema.json")
    assert payload["verdict"]["is_psd"] is True

    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"n": 4, "weights": ["-1", "0", "0", "0", "0"]}))
    out2 = tmp_path / "r2"
    assert main(["criterion", "--weights", str(bad), "--t", "1", "--out", str(out2)]) == 1
    payload = json.loads((out2 / "criterion.json").read_text())
    _validate(payload, "criterion_run.schema.json")
    verdict = payload["verdict"]
    assert verdict["is_psd"] is False
    assert verdict["witness"] == ["1", "0"]
    assert verdict["violating_sigma_p"] == ["1"]


def test_criterion_bad_file(tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text(json.dumps({"n": 3, "weights": ["1", "1"]}))
    assert main(["criterion", "--weights", str(broken), "--t", "1", "--out", str(tmp_path)]) == 2
    bad_t = tmp_path / "w.json"
    bad_t.write_text(json.dumps({"n": 3, "weights": ["1", "1", "1", "1"]}))
    assert main(["criterion", "--weights", str(bad_t), "--t", "9", "--out", str(tmp_path)]) == 2


def test_identity_suite(tmp_path):
    out = tmp_path / "r"
    code = main(["identity", "--d-max", "3", "--m-max", "6", "--out", str(out)])
    assert code == 0
    payload = json.loads((out / "identity.json").read_text())
    _validate(payload, "identity_run.schema.json")
    assert payload["pass"] is True
    assert payload["g_identity_mismatches"] == []
    rows = (out / "identity.csv").read_text().splitlines()
    assert rows[0] == "d,n,g_sum,g_closed,equal"


def test_json_only_format(tmp_path):
    out = tmp_path / "r"
    code = main(
        ["theorem2", "--n", "3", "--d", "1", "--out", str(out), "--format", "json"]
    )
    assert code == 0
    assert (out / "theorem2_n3_d1.json").exists()
    assert not (out / "theorem2_n3_d1.csv").exists()


def test_theorem2_determinism(tmp_path):
    args = ["theorem2", "--n", "7", "--d", "2"]
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    name = "theorem2_n7_d2.json"
    assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_reports_dir_created(tmp_path):
    nested = tmp_path / "deep" / "nested" / "dir"
    assert main(["theorem2", "--n", "3", "--d", "1", "--out", str(nested)]) == 0
    assert (Path(nested) / "theorem2_n3_d1.json").exists()
