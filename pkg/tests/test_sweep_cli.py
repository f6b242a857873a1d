"""Sweep evaluation, CSV/manifest emission, presets, plot script, CLI codes."""
import json
import math
from pathlib import Path

import pytest

from fockseries import (
    AdaptiveTruncation,
    FixedTruncation,
    InvalidParameter,
    SweepRequest,
    __version__,
    emit_plot_script,
    parse_policy,
    penson_solomon_state,
    photon_statistics,
    run_preset,
    run_sweep,
    truncate,
)
from fockseries.cli import main
from fockseries.output import read_curve_csv
from fockseries.sweep import policy_label


def small_sweep(tmp_path, **overrides):
    params = dict(observable="mandel_q", q=1.0, k=0,
                  alpha_min=0.5, alpha_max=3.0, steps=6,
                  output_path=tmp_path / "out.csv")
    params.update(overrides)
    return SweepRequest(**params)


class TestPolicyParsing:
    def test_round_trips(self):
        assert parse_policy("adaptive") == AdaptiveTruncation()
        assert parse_policy("adaptive:1e-10") == AdaptiveTruncation(rel_tol=1e-10)
        assert parse_policy("fixed:700") == FixedTruncation(n_max=700)
        assert policy_label(parse_policy("fixed:700")) == "fixed:700"
        assert policy_label(AdaptiveTruncation()) == "adaptive:1e-14"
        odd = AdaptiveTruncation(rel_tol=1.23456789101112e-12)
        assert parse_policy(policy_label(odd)) == odd

    def test_rejects_garbage(self):
        for bad in ("geometric", "fixed", "fixed:x", "adaptive:zero"):
            with pytest.raises(InvalidParameter):
                parse_policy(bad)


class TestRunSweep:
    def test_poisson_row_is_flat_zero(self, tmp_path):
        """Coherent-family sweeps give Q = 0 row-wise.  The 1e-12 bound needs
        a tail tolerance below the default: the neglected tail biases the
        second moment by ~ tail * (n_max - mean)^2 / mean, which reaches
        2e-12 at alpha = 0.5 under the default 1e-14 policy."""
        path = run_sweep(small_sweep(tmp_path, policy=AdaptiveTruncation(rel_tol=1e-16)))
        metadata, rows = read_curve_csv(path)
        assert metadata["observable"] == "mandel_q"
        assert metadata["policy"] == "adaptive:1e-16"
        assert len(rows) == 6
        for row in rows:
            assert abs(float(row["value"])) < 1e-12
            assert row["converged"] == "true"

    def test_poisson_row_default_policy_envelope(self, tmp_path):
        _, rows = read_curve_csv(run_sweep(small_sweep(tmp_path)))
        for row in rows:
            assert abs(float(row["value"])) < 5e-12
            assert row["converged"] == "true"

    def test_schema_header_and_version(self, tmp_path):
        path = run_sweep(small_sweep(tmp_path))
        lines = path.read_text().splitlines()
        assert lines[0] == f"# fockseries v{__version__}"
        assert any(line == "# q=1.0" for line in lines)
        assert any(line == "# k=0" for line in lines)
        header_idx = next(i for i, line in enumerate(lines) if not line.startswith("#"))
        assert lines[header_idx] == "alpha,value,n_max_used,tail_bound_rel,converged"

    def test_vacuum_row_has_empty_value(self, tmp_path):
        path = run_sweep(small_sweep(tmp_path, alpha_min=0.0, alpha_max=1.0, steps=3))
        _, rows = read_curve_csv(path)
        assert rows[0]["alpha"] == "0.0"
        assert rows[0]["value"] == ""
        assert rows[0]["converged"] == "false"
        assert rows[1]["value"] != ""

    def test_mandel_sweep_starts_at_minus_one_and_grows(self, tmp_path):
        req = small_sweep(tmp_path, q=0.5, k=3, alpha_min=0.0, alpha_max=5.0, steps=21)
        _, rows = read_curve_csv(run_sweep(req))
        values = [float(r["value"]) for r in rows]
        assert values[0] == -1.0
        assert all(v2 >= v1 for v1, v2 in zip(values, values[1:]))

    def test_linear_entropy_sweep_coherent_is_zero(self, tmp_path):
        req = small_sweep(tmp_path, observable="linear_entropy",
                          alpha_min=0.0, alpha_max=2.0, steps=5)
        metadata, rows = read_curve_csv(run_sweep(req))
        assert "theta" in metadata
        for row in rows:
            assert abs(float(row["value"])) < 1e-12

    def test_unconverged_fixed_rows_are_flagged(self, tmp_path):
        req = small_sweep(tmp_path, q=0.5, k=3, alpha_min=4.0, alpha_max=5.0,
                          steps=2, policy=FixedTruncation(n_max=100))
        _, rows = read_curve_csv(run_sweep(req))
        for row in rows:
            assert row["converged"] == "false"
            assert row["tail_bound_rel"] == "inf"
            assert row["n_max_used"] == "100"

    def test_distribution_observable_wide_rows(self, tmp_path):
        req = small_sweep(tmp_path, observable="distribution", q=0.5, k=2,
                          alpha_min=0.0, alpha_max=1.0, steps=2)
        _, rows = read_curve_csv(run_sweep(req))
        assert set(rows[0]) == {"alpha", "photon_number", "probability",
                                "n_max_used", "tail_bound_rel", "converged"}
        assert rows[0]["photon_number"] == "2"  # support starts at k
        by_alpha_zero = [float(r["probability"]) for r in rows if r["alpha"] == "0.0"]
        assert by_alpha_zero == [1.0]

    def test_determinism_byte_identical(self, tmp_path):
        req1 = small_sweep(tmp_path, q=0.7, k=2, output_path=tmp_path / "a.csv")
        req2 = small_sweep(tmp_path, q=0.7, k=2, output_path=tmp_path / "b.csv")
        assert run_sweep(req1).read_bytes() == run_sweep(req2).read_bytes()

    def test_threaded_run_matches_serial(self, tmp_path, monkeypatch):
        serial = run_sweep(small_sweep(tmp_path, q=0.5, k=1, output_path=tmp_path / "s.csv"))
        monkeypatch.setenv("FOCKSERIES_THREADS", "4")
        threaded = run_sweep(small_sweep(tmp_path, q=0.5, k=1, output_path=tmp_path / "t.csv"))
        assert serial.read_bytes() == threaded.read_bytes()

    def test_row_round_trip_reproduces_exact_value(self, tmp_path):
        """Re-running any row from its own parameters lands on the same digits."""
        req = small_sweep(tmp_path, q=0.6, k=2, alpha_min=0.3, alpha_max=4.7, steps=7)
        metadata, rows = read_curve_csv(run_sweep(req))
        policy = parse_policy(metadata["policy"])
        for row in rows:
            spec = penson_solomon_state(float(row["alpha"]), int(metadata["k"]),
                                        float(metadata["q"]))
            stats = photon_statistics(truncate(spec, policy))
            assert repr(stats.mandel_q) == row["value"]

    def test_request_validation(self, tmp_path):
        with pytest.raises(InvalidParameter):
            small_sweep(tmp_path, steps=1)
        with pytest.raises(InvalidParameter):
            small_sweep(tmp_path, alpha_min=2.0, alpha_max=1.0)
        with pytest.raises(InvalidParameter):
            small_sweep(tmp_path, observable="wigner")


class TestPresets:
    def test_fig1_left_curves(self, tmp_path):
        paths = run_preset("fig1-left", tmp_path, steps=9)
        names = {p.name for p in paths}
        assert names == {"fig1-left_k1.csv", "fig1-left_k2.csv",
                         "fig1-left_k3.csv", "manifest.json"}
        for k in (1, 2, 3):
            _, rows = read_curve_csv(tmp_path / f"fig1-left_k{k}.csv")
            assert len(rows) == 9
            assert float(rows[0]["value"]) == -1.0  # Fock point at alpha = 0

    def test_fig1_right_override_steps(self, tmp_path):
        run_preset("fig1-right", tmp_path, steps=5)
        for k in (4, 6, 8):
            _, rows = read_curve_csv(tmp_path / f"fig1-right_k{k}.csv")
            assert len(rows) == 5
            assert rows[-1]["alpha"] == "5.0"

    def test_fig2_emits_five_curves_and_assumption(self, tmp_path):
        paths = run_preset("fig2", tmp_path, steps=11)
        csvs = [p for p in paths if p.suffix == ".csv"]
        assert len(csvs) == 5
        manifest = json.loads((tmp_path / "manifest.json").read_text())
        assert manifest["fockseries_version"] == __version__
        assert "0.5" in manifest["assumptions"]["q"]
        labels = {c["label"] for c in manifest["curves"]}
        assert labels == {"n_max=100", "n_max=200", "n_max=400", "n_max=700",
                          "adaptive reference"}
        styles = {c["style"] for c in manifest["curves"]}
        assert styles == {"dotted", "dashed", "dot-dashed", "solid"}

    def test_preset_determinism(self, tmp_path):
        run_preset("fig1-left", tmp_path / "one", steps=5)
        run_preset("fig1-left", tmp_path / "two", steps=5)
        for name in ("fig1-left_k1.csv", "manifest.json"):
            assert (tmp_path / "one" / name).read_bytes() == (tmp_path / "two" / name).read_bytes()

    def test_unknown_preset(self, tmp_path):
        with pytest.raises(InvalidParameter):
            run_preset("fig9", tmp_path)


class TestPlotScript:
    def test_script_references_all_curves(self, tmp_path):
        run_preset("fig2", tmp_path, steps=5)
        script = emit_plot_script(tmp_path / "manifest.json")
        assert script.name == "plot.gp"
        text = script.read_text()
        for n in (100, 200, 400, 700):
            assert f"fig2_nmax{n}.csv" in text
        assert "fig2_adaptive.csv" in text
        assert "dashtype 3" in text   # dotted, per the caption
        assert "dashtype 4" in text   # dot-dashed
        assert "set ylabel 'Mandel Q'" in text

    def test_empty_manifest_is_an_error(self, tmp_path):
        empty = tmp_path / "manifest.json"
        empty.write_text("")
        with pytest.raises(ValueError):
            emit_plot_script(empty)
        empty.write_text("{}")
        with pytest.raises(InvalidParameter):
            emit_plot_script(empty)


class TestCliExitCodes:
    def test_sweep_success(self, tmp_path, capsys):
        out = tmp_path / "q.csv"
        code = main(["sweep", "--observable", "mandel_q", "--q", "0.5", "--k", "1",
                     "--alpha-min", "0", "--alpha-max", "2", "--steps", "4",
                     "--out", str(out)])
        assert code == 0
        assert out.exists()
        assert str(out) in capsys.readouterr().out

    def test_bad_arguments_exit_2(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["sweep", "--observable", "wigner", "--out", "x.csv"])
        assert exc.value.code == 2
        code = main(["sweep", "--observable", "mandel_q", "--steps", "1",
                     "--out", str(tmp_path / "x.csv")])
        assert code == 2
        code = main(["sweep", "--observable", "mandel_q", "--policy", "fixed:nope",
                     "--out", str(tmp_path / "x.csv")])
        assert code == 2
        code = main(["sweep", "--observable", "mandel_q", "--q", "0.0",
                     "--out", str(tmp_path / "x.csv")])
        assert code == 2

    def test_numeric_failure_exit_3(self, tmp_path):
        code = main(["sweep", "--observable", "mandel_q", "--q", "0.2", "--k", "5",
                     "--alpha-min", "3.9", "--alpha-max", "4.0", "--steps", "2",
                     "--out", str(tmp_path / "x.csv")])
        assert code == 3

    def test_io_failure_exit_4(self, tmp_path):
        code = main(["sweep", "--observable", "mandel_q", "--steps", "2",
                     "--alpha-min", "1", "--alpha-max", "2",
                     "--out", str(tmp_path / "no-such-dir" / "x.csv")])
        assert code == 4

    def test_preset_and_plot_pipeline(self, tmp_path):
        assert main(["preset", "--name", "fig1-left", "--out-dir", str(tmp_path),
                     "--steps", "4"]) == 0
        assert main(["plot", "--manifest", str(tmp_path / "manifest.json")]) == 0
        assert (tmp_path / "plot.gp").exists()

    def test_plot_missing_manifest_exit_4(self, tmp_path):
        assert main(["plot", "--manifest", str(tmp_path / "absent.json")]) == 4

    def test_identity_nonlinearity_requires_unit_q(self, tmp_path):
        code = main(["sweep", "--observable", "mandel_q", "--nonlinearity", "identity",
                     "--q", "0.5", "--steps", "2", "--out", str(tmp_path / "x.csv")])
        assert code == 2

    def test_default_grids_per_observable(self, tmp_path):
        """Unset flags fall back to 201 points on [0,5] for Q and 61 points
        on [0,3] for S."""
        out_q = tmp_path / "q.csv"
        assert main(["sweep", "--observable", "mandel_q", "--q", "0.5", "--k", "1",
                     "--out", str(out_q)]) == 0
        _, rows = read_curve_csv(out_q)
        assert len(rows) == 201
        assert (rows[0]["alpha"], rows[-1]["alpha"]) == ("0.0", "5.0")

        out_s = tmp_path / "s.csv"
        assert main(["sweep", "--observable", "linear_entropy", "--q", "0.5", "--k", "1",
                     "--out", str(out_s)]) == 0
        _, rows = read_curve_csv(out_s)
        assert len(rows) == 61
        assert (rows[0]["alpha"], rows[-1]["alpha"]) == ("0.0", "3.0")
