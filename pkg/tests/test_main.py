"""Tests for hybrid_link.__main__ - CLI entry point."""

from __future__ import annotations

import json
from pathlib import Path
from unittest.mock import patch

import pytest

from hybrid_link.__main__ import (
    EXIT_CHECK_FAILED,
    EXIT_INFEASIBLE,
    EXIT_IO,
    EXIT_OK,
    EXIT_USAGE,
    main,
)
from hybrid_link.config import RunConfig, parse_config
from hybrid_link.errors import InfeasibleError
from hybrid_link.manifest import MANIFEST_NAME


def _config(tmp_path: Path, text: str) -> str:
    path = tmp_path / "link.yaml"
    path.write_text(text)
    return str(path)


# -----------------------------------------------------------------------
# main() dispatch
# -----------------------------------------------------------------------


class TestMainDispatch:
    """CLI argument parsing and sub-command dispatch."""

    def test_no_args_prints_help(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main([]) == EXIT_USAGE
        out = capsys.readouterr().out
        assert "usage" in out.lower()

    def test_help_flag(self) -> None:
        with pytest.raises(SystemExit) as exc_info:
            main(["--help"])
        assert exc_info.value.code == 0

    def test_unknown_command(self) -> None:
        with pytest.raises(SystemExit) as exc_info:
            main(["fig9"])
        assert exc_info.value.code == 2

    def test_sweep_requires_figure(self) -> None:
        with pytest.raises(SystemExit) as exc_info:
            main(["sweep"])
        assert exc_info.value.code == 2


# -----------------------------------------------------------------------
# init-config
# -----------------------------------------------------------------------


class TestInitConfig:
    def test_stdout(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["init-config"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "g_ghz: 16.0" in out
        assert parse_config(text=out) == RunConfig()

    def test_to_file(self, tmp_path: Path) -> None:
        target = tmp_path / "link.yaml"
        assert main(["init-config", "--output", str(target)]) == EXIT_OK
        assert parse_config(target) == RunConfig()


# -----------------------------------------------------------------------
# eval / check
# -----------------------------------------------------------------------


class TestEvalAndCheck:
    def test_eval_text(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["eval"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "F spectral" in out
        assert "success probability P" in out

    def test_eval_json_without_atom_branch(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        cfg = _config(tmp_path, "beta_enabled: false\n")
        assert main(["eval", "--config", cfg, "--format", "json"]) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["spectral_fidelity"] == pytest.approx(0.25, abs=1e-12)
        assert report["cooperativity"] == pytest.approx(40.96)

    def test_check_fails_on_defaults(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["check"]) == EXIT_CHECK_FAILED
        assert "fail" in capsys.readouterr().out

    def test_check_warns_for_longer_pulse(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        cfg = _config(tmp_path, "tau_ns: 10.0\n")
        assert main(["check", "-c", cfg, "--format", "json"]) == EXIT_OK
        assert json.loads(capsys.readouterr().out)["atom_verdict"] == "warn"


# -----------------------------------------------------------------------
# figure commands
# -----------------------------------------------------------------------


class TestFigureCommands:
    def test_fig3_default_table(self, tmp_path: Path) -> None:
        assert main(["fig3", "--out", str(tmp_path)]) == EXIT_OK
        lines = (tmp_path / "fig3.csv").read_text().splitlines()
        assert lines[0] == "tau_ns,delta_a_ghz,fidelity"
        assert len(lines) == 1 + 180
        manifest = json.loads((tmp_path / MANIFEST_NAME).read_text())
        assert set(manifest["outputs"]) == {"fig3.csv"}
        assert manifest["command"] == "fig3"

    @pytest.mark.parametrize("figure", ["fig5", "fig7"])
    def test_reruns_are_byte_identical(self, tmp_path: Path, figure: str) -> None:
        assert main([figure, "--out", str(tmp_path / "a")]) == EXIT_OK
        assert main([figure, "--out", str(tmp_path / "b")]) == EXIT_OK
        first = (tmp_path / "a" / f"{figure}.csv").read_bytes()
        assert first == (tmp_path / "b" / f"{figure}.csv").read_bytes()

    def test_fig7_with_plot(self, tmp_path: Path) -> None:
        pytest.importorskip("matplotlib")
        assert main(["fig7", "--out", str(tmp_path), "--plot"]) == EXIT_OK
        assert (tmp_path / "fig7.csv").exists()
        assert (tmp_path / "fig7.svg").exists()
        manifest = json.loads((tmp_path / MANIFEST_NAME).read_text())
        assert set(manifest["outputs"]) == {"fig7.csv", "fig7.svg"}

    def test_json_format(self, tmp_path: Path) -> None:
        assert main(["fig5", "--out", str(tmp_path), "--format", "json"]) == EXIT_OK
        document = json.loads((tmp_path / "fig5.json").read_text())
        assert len(document["columns"]["fidelity"]) == 200

    def test_custom_sweep(self, tmp_path: Path) -> None:
        args = ["sweep", "--figure", "fig6", "--grid-min", "0.05", "--grid-max", "0.7", "--grid-count", "5"]
        assert main([*args, "--series", "0", "50", "--out", str(tmp_path)]) == EXIT_OK
        lines = (tmp_path / "fig6.csv").read_text().splitlines()
        assert lines[0] == "delta_rad,nbar,n_s,probability,status"
        assert len(lines) == 1 + 10

    def test_bad_custom_grid(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        args = ["sweep", "--figure", "fig5", "--grid-min", "0.5", "--grid-max", "0.1", "--out", str(tmp_path)]
        assert main(args) == EXIT_USAGE
        assert "--grid" in capsys.readouterr().err


# -----------------------------------------------------------------------
# error mapping
# -----------------------------------------------------------------------


class TestExitCodes:
    def test_bad_config_value(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        cfg = _config(tmp_path, "tau_ns: 1.0\ng_ghz: -1\n")
        assert main(["eval", "--config", cfg]) == EXIT_USAGE
        assert "line 2: g_ghz" in capsys.readouterr().err

    def test_missing_config(self, tmp_path: Path) -> None:
        assert main(["eval", "--config", str(tmp_path / "missing.yaml")]) == EXIT_USAGE

    def test_bad_tolerance(self) -> None:
        assert main(["eval", "--tol", "-1"]) == EXIT_USAGE

    def test_infeasible(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        error = InfeasibleError("no crossing", diagnostic={"f_target": 0.9})
        with patch("hybrid_link.sweeps.run_sweep", side_effect=error):
            assert main(["fig4", "--out", str(tmp_path)]) == EXIT_INFEASIBLE
        err = capsys.readouterr().err
        assert "infeasible" in err
        assert '"f_target": 0.9' in err
        assert not (tmp_path / MANIFEST_NAME).exists()

    def test_output_is_a_file(self, tmp_path: Path) -> None:
        blocker = tmp_path / "blocker"
        blocker.write_text("x")
        assert main(["fig7", "--out", str(blocker)]) == EXIT_IO
