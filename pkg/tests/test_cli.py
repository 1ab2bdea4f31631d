"""End-to-end tests of the command-line interface and its JSON contracts."""

import json
import math
from importlib import resources

import jsonschema
import pytest

from blaschke_persistence import cli, critical, distance, verify
from blaschke_persistence.errors import NonConvergenceError
from blaschke_persistence.levelset import read_grid

PAIR_SPEC = {"phase": [1.0, 0.0], "zeros": [[0.6, 0.0, 1], [-0.6, 0.0, 1]]}
SMALL_PAIR_SPEC = {"phase": [1.0, 0.0], "zeros": [[0.3, 0.0, 1], [-0.3, 0.0, 1]]}
DOUBLE_SPEC = {"phase": [1.0, 0.0], "zeros": [[0.5, 0.0, 2]]}


def write_spec(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def load_schema(name):
    ref = resources.files("blaschke_persistence").joinpath(f"schemas/{name}.schema.json")
    return json.loads(ref.read_text())


def run_json(capsys, argv):
    code = cli.main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


class TestBarcodeCommand:
    def test_symmetric_pair(self, tmp_path, capsys):
        spec = write_spec(tmp_path, "pair.json", PAIR_SPEC)
        code, payload = run_json(capsys, ["barcode", spec])
        assert code == 0
        assert payload["degree"] == 2
        bars = payload["bars"]
        assert [b["death"] for b in bars][-1] == "inf"
        assert abs(bars[0]["death"] - math.log(2.125)) < 1e-10
        assert abs(payload["deaths_theta"][0] - 0.36) < 1e-12
        jsonschema.validate(payload, load_schema("barcode"))

    def test_double_zero(self, tmp_path, capsys):
        spec = write_spec(tmp_path, "double.json", DOUBLE_SPEC)
        code, payload = run_json(capsys, ["barcode", spec])
        assert code == 0
        assert payload["bars"] == [{"birth": 0.0, "death": "inf", "mult": 1}]

    def test_malformed_zero_names_index(self, tmp_path, capsys):
        spec = write_spec(tmp_path, "bad.json",
                          {"phase": [1, 0], "zeros": [[0.1, 0.0, 1], [0.2, 0.0]]})
        code = cli.main(["barcode", spec])
        err = capsys.readouterr().err
        assert code == 2
        assert "zeros[1]" in err

    def test_missing_file(self, capsys):
        assert cli.main(["barcode", "/does/not/exist.json"]) == 2

    def test_deterministic_output(self, tmp_path, capsys):
        spec = write_spec(tmp_path, "pair.json", PAIR_SPEC)
        cli.main(["barcode", spec])
        first = capsys.readouterr().out
        cli.main(["barcode", spec])
        second = capsys.readouterr().out
        assert first == second

    def test_writes_json_and_svg(self, tmp_path, capsys):
        spec = write_spec(tmp_path, "pair.json", PAIR_SPEC)
        out = tmp_path / "out"
        assert cli.main(["barcode", spec, "--out", str(out), "--svg"]) == 0
        capsys.readouterr()
        written = json.loads((out / "pair.barcode.json").read_text())
        jsonschema.validate(written, load_schema("barcode"))
        svg = (out / "pair.barcode.svg").read_text()
        assert svg.lstrip().startswith("<?xml")


class TestDistanceCommand:
    def test_reference_pair(self, tmp_path, capsys):
        a = write_spec(tmp_path, "a.json", PAIR_SPEC)
        b = write_spec(tmp_path, "b.json", SMALL_PAIR_SPEC)
        code, payload = run_json(capsys, ["distance", a, b])
        assert code == 0
        assert abs(payload["value"] - 0.3768859011881901) < 1e-9
        assert payload["closed_formula"]["abs_difference"] < 1e-9
        assert 0.0 < payload["sup_norm_diff"] <= 2.0
        jsonschema.validate(payload, load_schema("distance"))

    def test_self_distance(self, tmp_path, capsys):
        a = write_spec(tmp_path, "a.json", PAIR_SPEC)
        code, payload = run_json(capsys, ["distance", a, a])
        assert code == 0 and payload["value"] == 0.0

    def test_mobius_composed_spec(self, tmp_path, capsys):
        import numpy as np

        from blaschke_persistence.blaschke import BlaschkeProduct, compose_mobius
        from blaschke_persistence.verify import sample_transform

        rng = np.random.default_rng(0)
        B = BlaschkeProduct.from_dict(PAIR_SPEC)
        moved = compose_mobius(B, sample_transform(rng))
        a = write_spec(tmp_path, "a.json", PAIR_SPEC)
        b = write_spec(tmp_path, "b.json", moved.to_dict())
        code, payload = run_json(capsys, ["distance", a, b])
        assert code == 0 and payload["value"] < 1e-9


class TestScanCommand:
    def test_counts_across_merge(self, tmp_path, capsys):
        spec = write_spec(tmp_path, "pair.json", PAIR_SPEC)
        code, payload = run_json(
            capsys, ["scan", spec, "--grid", "256", "--thresholds", "0.1,0.35,0.37,0.5"]
        )
        assert code == 0
        counts = [row["component_count"] for row in payload["thresholds"]]
        assert counts == [2, 2, 1, 1]
        assert all(row["chi_equals_components"] for row in payload["thresholds"])
        assert any(abs(e["theta"] - 0.36) < 5e-3 for e in payload["merge_events"])
        jsonschema.validate(payload, load_schema("scan"))

    def test_single_zero_counts(self, tmp_path, capsys):
        spec = write_spec(tmp_path, "single.json", {"zeros": [[0.0, 0.0, 1]], "phase": [1, 0]})
        code, payload = run_json(capsys, ["scan", spec, "--grid", "128"])
        assert code == 0
        assert all(row["component_count"] == 1 for row in payload["thresholds"])

    def test_svg_and_grid_dump(self, tmp_path, capsys):
        spec = write_spec(tmp_path, "pair.json", PAIR_SPEC)
        out = tmp_path / "scanout"
        dump = tmp_path / "grid.bin"
        code = cli.main(["scan", spec, "--grid", "128", "--out", str(out), "--svg",
                         "--dump-grid", str(dump)])
        capsys.readouterr()
        assert code == 0
        assert (out / "pair.scan.svg").exists()
        assert (out / "pair.scan_series.svg").exists()
        assert read_grid(dump).resolution == 128

    def test_bad_threshold_rejected(self, tmp_path, capsys):
        spec = write_spec(tmp_path, "pair.json", PAIR_SPEC)
        assert cli.main(["scan", spec, "--thresholds", "0.5,1.5"]) == 2


class TestCriticalCommand:
    def test_symmetric_pair(self, tmp_path, capsys):
        spec = write_spec(tmp_path, "pair.json", PAIR_SPEC)
        code, payload = run_json(capsys, ["critical", spec])
        assert code == 0
        assert payload["order_sum"] == 1
        cp = payload["critical_points"][0]
        assert abs(cp["critical_value"] - 0.36) < 1e-12
        assert not cp["at_zero"]
        jsonschema.validate(payload, load_schema("critical"))

    def test_double_zero_at_zero_point(self, tmp_path, capsys):
        spec = write_spec(tmp_path, "double.json", DOUBLE_SPEC)
        code, payload = run_json(capsys, ["critical", spec])
        cp = payload["critical_points"][0]
        assert cp["at_zero"] and cp["death_time"] is None


class TestEvalCommand:
    def test_values(self, tmp_path, capsys):
        spec = write_spec(tmp_path, "pair.json", PAIR_SPEC)
        code, payload = run_json(capsys, ["eval", spec, "--at", "0,0", "--at", "0.6,0"])
        assert code == 0
        assert payload["points"][0]["value"] == [-0.36, 0.0]
        assert payload["points"][1]["modulus"] == 0.0
        jsonschema.validate(payload, load_schema("eval"))

    def test_bad_point_format(self, tmp_path, capsys):
        spec = write_spec(tmp_path, "pair.json", PAIR_SPEC)
        assert cli.main(["eval", spec, "--at", "1;2"]) == 2


class TestVerifyCommand:
    def test_named_suites_pass(self, capsys):
        code, payload = run_json(
            capsys, ["verify", "--suite", "rho-triangle", "--suite", "log-lower-bound"]
        )
        assert code == 0 and payload["all_passed"]
        jsonschema.validate(payload, load_schema("verify"))

    def test_unknown_suite_is_input_error(self, capsys):
        assert cli.main(["verify", "--suite", "nope"]) == 2

    def test_injected_fault_fails_with_case(self, capsys, monkeypatch):
        true_formula = distance.degree2_distance
        monkeypatch.setattr(distance, "degree2_distance",
                            lambda w1, w2: true_formula(w1, w2) + 0.01)
        code, payload = run_json(capsys, ["verify", "--suite", "degree2-formula"])
        assert code == 1
        suite = payload["suites"][0]
        assert not suite["passed"] and suite["violations"]

    def test_seed_flag_reported(self, capsys):
        code, payload = run_json(capsys, ["verify", "--suite", "rho-triangle", "--seed", "7"])
        assert code == 0 and payload["seed"] == 7

    def test_report_is_byte_deterministic(self, capsys):
        argv = ["verify", "--suite", "rho-triangle", "--suite", "moduli-metric"]
        cli.main(argv)
        first = capsys.readouterr().out
        cli.main(argv)
        assert capsys.readouterr().out == first


class TestExitCodes:
    def test_numerical_failure_maps_to_3(self, tmp_path, capsys, monkeypatch):
        def boom(B, tol):
            raise NonConvergenceError("stalled")

        monkeypatch.setattr(cli, "from_product", boom)
        spec = write_spec(tmp_path, "pair.json", PAIR_SPEC)
        assert cli.main(["barcode", spec]) == 3
        assert "numerical failure" in capsys.readouterr().err
