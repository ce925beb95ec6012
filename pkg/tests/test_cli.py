import json
import math
import subprocess
import sys
from pathlib import Path

import pytest

from sinegap import cli

DATA = Path(__file__).parent / "data"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


class TestEval:
    def test_numeric_and_eq2(self, capsys):
        code, rows = run_json(capsys, "eval", "--s", "10", "--gamma", "1", "--method", "numeric,eq2")
        assert code == 0
        assert [r["method"] for r in rows] == ["numeric", "eq2"]
        num, eq2 = rows
        assert num["v"] == "inf" and num["gamma"] == 1.0
        assert num["residual_vs_numeric"] is None
        assert eq2["residual_vs_numeric"] == pytest.approx(num["ln_D"] - eq2["ln_D"])
        assert abs(eq2["residual_vs_numeric"]) < 0.1

    def test_v_zero(self, capsys):
        code, rows = run_json(capsys, "eval", "--s", "10", "--v", "0", "--method", "numeric,lu,eq3")
        assert code == 0
        assert all(r["ln_D"] == 0.0 for r in rows)

    def test_envelope_exit(self, capsys):
        code, err = run_json(capsys, "eval", "--s", "100", "--gamma", "1", "--method", "numeric")
        assert code == 2
        assert "PrecisionEnvelopeError" in err[0]["error"]

    def test_v_gamma_roundtrip(self, capsys):
        v = 0.8
        g = 1 - math.exp(-2 * v)
        _, a = run_json(capsys, "eval", "--s", "5", "--v", repr(v), "--method", "numeric,eq6")
        _, b = run_json(capsys, "eval", "--s", "5", "--gamma", repr(g), "--method", "numeric,eq6")
        for ra, rb in zip(a, b):
            for key in ("ln_D", "kappa", "gamma", "a", "V", "tau_im", "theta"):
                assert ra[key] == pytest.approx(rb[key], rel=1e-12, abs=1e-13)
            assert ra["regime"] == rb["regime"]

    @pytest.mark.parametrize(
        "argv",
        [
            ("eval", "--s", "5"),
            ("eval", "--s", "5", "--v", "1", "--gamma", "0.5"),
            ("eval", "--s", "5", "--v", "inf"),
            ("eval", "--s", "5", "--v", "1", "--method", "bogus"),
            ("nonsense",),
        ],
    )
    def test_usage_errors(self, capsys, argv):
        code, out = run(capsys, *argv)
        assert code == 2
        assert json.loads(out)["kind"] == "UsageError"

    def test_csv_format(self, capsys):
        code, out = run(capsys, "--format", "csv", "eval", "--s", "3", "--gamma", "0.5")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == ",".join(cli.CSV_HEADER)
        assert len(lines) == 2

    def test_linear(self, capsys):
        _, rows = run_json(capsys, "eval", "--s", "3", "--gamma", "0.5", "--linear")
        assert rows[0]["D"] == pytest.approx(math.exp(rows[0]["ln_D"]))

    def test_global_flags_after_subcommand(self, capsys):
        code, out = run(capsys, "eval", "--s", "3", "--gamma", "0.5", "--format", "csv", "--tol", "1e-10")
        assert code == 0 and out.startswith("s,v,gamma")


class TestRegimes:
    def test_values(self, capsys):
        code, out = run_json(capsys, "regimes", "--s", "100")
        assert code == 0
        curves = {c["name"]: c for c in out["curves"]}
        assert curves["stokes_k0"]["v"] == pytest.approx(98.8487, abs=5e-5)
        assert curves["elliptic_edge"]["kappa"] == pytest.approx(1 - 0.25 * math.log(100) ** (4 / 3) / 100, rel=1e-15)
        assert all(f"stokes_k{k}" in curves for k in range(6))

    def test_actual_band_ordering(self, capsys):
        # the saturation edge coincides with curve k=0, and the elliptic edge
        # falls between curves k=0 and k=1
        _, out = run_json(capsys, "regimes", "--s", "100")
        c = {x["name"]: x["v"] for x in out["curves"]}
        assert c["saturation_edge"] == pytest.approx(c["stokes_k0"], rel=1e-15)
        assert c["stokes_k1"] < c["elliptic_edge"] < c["stokes_k0"]

    def test_s_at_most_one(self, capsys):
        code, _ = run(capsys, "regimes", "--s", "1")
        assert code == 2


class TestSweep:
    def test_golden_header(self, capsys, tmp_path):
        out = tmp_path / "sw.csv"
        code, _ = run(capsys, "--format", "csv", "sweep", "--s-grid", "4,6", "--v-grid", "1,2", "--output", str(out))
        assert code == 0
        golden = (DATA / "sweep_header.csv").read_text()
        text = out.read_text()
        assert text.splitlines()[0] == golden.strip()
        assert len(text.strip().splitlines()) == 5

    def test_deterministic(self, capsys, tmp_path):
        outs = []
        for i, workers in enumerate(("1", "2")):
            out = tmp_path / f"sw{i}.csv"
            run(capsys, "--format", "csv", "sweep", "--s-grid", "4,6,8", "--kappa-grid", "0.2,0.5",
                "--methods", "numeric,eq6", "--output", str(out), "--workers", workers)
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_one_point_equals_eval(self, capsys, tmp_path):
        out = tmp_path / "one.json"
        run(capsys, "sweep", "--s-grid", "5", "--v-grid", "1.5", "--methods", "numeric,eq3", "--output", str(out))
        swept = json.loads(out.read_text())
        _, single = run_json(capsys, "eval", "--s", "5", "--v", "1.5", "--method", "numeric,eq3")
        assert swept == single

    def test_kappa_sweep_residual(self, capsys, tmp_path):
        out = tmp_path / "k.json"
        kappas = ",".join(f"{k / 10:.1f}" for k in range(2, 9))
        code, _ = run(capsys, "sweep", "--s-grid", "12", "--kappa-grid", kappas, "--methods", "numeric,eq6", "--output", str(out))
        assert code == 0
        rows = [r for r in json.loads(out.read_text()) if r["method"] == "eq6"]
        assert len(rows) == 7
        assert all(abs(r["residual_vs_numeric"]) <= 2 for r in rows)

    def test_partial_failure(self, capsys, tmp_path):
        out = tmp_path / "p.csv"
        code, _ = run(capsys, "--format", "csv", "sweep", "--s-grid", "10", "--v-grid", "2,5",
                      "--methods", "numeric,eq5", "--output", str(out))
        assert code == 0
        errs = (tmp_path / "p.csv.errors.csv").read_text().splitlines()
        assert errs[0] == "s,v,method,error"
        assert len(errs) == 3

    def test_config_file(self, capsys, tmp_path):
        cfg = tmp_path / "spec.json"
        out = tmp_path / "c.csv"
        plot = tmp_path / "plot.py"
        cfg.write_text(json.dumps({"s_grid": [3, 4], "v_grid": [1], "methods": ["numeric"], "output_path": str(out)}))
        code, _ = run(capsys, "--format", "csv", "sweep", "--config", str(cfg), "--plot-script", str(plot))
        assert code == 0
        assert len(out.read_text().splitlines()) == 3
        compile(plot.read_text(), str(plot), "exec")

    @pytest.mark.parametrize(
        "extra",
        [
            ("--s-grid", "4,3", "--v-grid", "1"),
            ("--s-grid", "4", "--v-grid", "1", "--b-mode", "nope"),
            ("--v-grid", "1"),
            ("--s-grid", "4"),
        ],
    )
    def test_invalid_spec(self, capsys, tmp_path, extra):
        code, _ = run(capsys, "sweep", *extra, "--output", str(tmp_path / "x.csv"))
        assert code == 2


class TestMc:
    def test_fields_and_determinism(self, capsys):
        argv = ("mc", "--s", "1", "--gamma", "0.5", "--size", "64", "--samples", "300", "--seed", "5")
        code, a = run_json(capsys, *argv)
        _, b = run_json(capsys, *argv)
        assert code == 0 and a == b
        assert a["z_score"] == pytest.approx((a["p_hat"] - a["det_reference"]) / a["stderr"])

    def test_invalid(self, capsys):
        code, out = run(capsys, "mc", "--size", "8")
        assert code == 2
        code, out = run(capsys, "mc", "--seed", "-1")
        assert code == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "sinegap", "regimes", "--s", "10"], capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["ladder_cap"] == 2
