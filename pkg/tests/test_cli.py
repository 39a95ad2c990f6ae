"""Command-line behavior: exit codes, file outputs, manifests, verification."""

import json

import pytest

from statecloak import analysis, cli


def run_cli(args):
    return cli.main([str(a) for a in args])


# --------------------------------------------------------------------- design


def test_design_prints_solution(make_config, capsys):
    assert run_cli(["design", make_config()]) == 0
    out = capsys.readouterr().out
    assert "mu_op = 0.504425164140608" in out
    assert "p_bar = 0.005446412879734529" in out
    assert "feasible = true" in out


def test_design_writes_json_and_manifest(make_config, tmp_path, capsys):
    out = tmp_path / "design.json"
    assert run_cli(["design", make_config(), "--out", out]) == 0
    payload = json.loads(out.read_text())
    assert payload["mu_op"] == pytest.approx(0.504425164140608, rel=1e-12)
    manifest = json.loads((tmp_path / "design.json.manifest.json").read_text())
    assert manifest["tool"] == "statecloak"
    assert manifest["command"] == "design"
    assert manifest["config"]["system"]["a"] == 0.6


def test_design_deaf_eavesdropper_is_infeasible(make_config, capsys):
    assert run_cli(["design", make_config(gamma_eaves=1.0)]) == 3
    assert "eavesdropper already at open loop" in capsys.readouterr().out


def test_design_only_config_suffices(tmp_path, capsys):
    # encoding and simulation tables are not needed to solve the design
    path = tmp_path / "min.toml"
    path.write_text(
        "[system]\na = 0.6\nq = 0.01\nr = 0.01\n"
        "[channels]\ngamma_user = 0.3\ngamma_eaves = 0.3\n"
    )
    assert run_cli(["design", path]) == 0
    assert "mu_op" in capsys.readouterr().out


# ---------------------------------------------------------------- bad configs


def test_unstable_plant_rejected(make_config, capsys):
    assert run_cli(["design", make_config(a=1.2)]) == 2
    assert "config error" in capsys.readouterr().err


def test_malformed_toml_rejected(tmp_path, capsys):
    path = tmp_path / "broken.toml"
    path.write_text("[system\na = 0.6\n")
    assert run_cli(["design", path]) == 2
    assert "invalid TOML" in capsys.readouterr().err


def test_missing_file_rejected(tmp_path, capsys):
    assert run_cli(["design", tmp_path / "absent.toml"]) == 2
    assert "no such config file" in capsys.readouterr().err


def test_unknown_key_rejected(make_config, tmp_path, capsys):
    path = make_config()
    path.write_text(path.read_text() + "\ntypo_key = 3\n")
    assert run_cli(["design", path]) == 2


# ---------------------------------------------------------------------- sweep


def test_sweep_header_and_grid(make_config, tmp_path):
    out = tmp_path / "sweep.csv"
    assert run_cli(["sweep", make_config(), "--grid", 2, "--out", out]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "mu,expected_legit,expected_eaves,p_bar,p_op,p_n,mu_op"
    assert len(lines) == 3
    assert lines[1].startswith("0,")
    assert lines[2].startswith("0.5,")
    assert (tmp_path / "sweep.csv.manifest.json").exists()


def test_sweep_rejects_tiny_grid(make_config, tmp_path, capsys):
    code = run_cli(["sweep", make_config(), "--grid", 1, "--out", tmp_path / "s.csv"])
    assert code == 2


def test_sweep_mc_needs_full_config(tmp_path, capsys):
    path = tmp_path / "min.toml"
    path.write_text(
        "[system]\na = 0.6\nq = 0.01\nr = 0.01\n"
        "[channels]\ngamma_user = 0.3\ngamma_eaves = 0.3\n"
    )
    assert run_cli(["sweep", path, "--grid", 4, "--mc", "--out", tmp_path / "s.csv"]) == 2
    # closed forms alone are fine without those tables
    assert run_cli(["sweep", path, "--grid", 4, "--out", tmp_path / "s2.csv"]) == 0


def test_sweep_mc_columns_present(make_config, tmp_path):
    out = tmp_path / "mc.csv"
    cfgpath = make_config(horizon=4000, burn_in=100, trials=8)
    assert run_cli(["sweep", cfgpath, "--grid", 2, "--mc", "--workers", 4, "--out", out]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].endswith(",mc_legit,mc_legit_ci,mc_eaves,mc_eaves_ci")
    assert len(lines[1].split(",")) == 11


def test_sweep_unwritable_path(make_config, tmp_path, capsys):
    blocker = tmp_path / "blocker"
    blocker.write_text("a file, not a directory")
    code = run_cli(["sweep", make_config(), "--grid", 2, "--out", blocker / "s.csv"])
    assert code == 4


# ------------------------------------------------------------------- simulate


def test_simulate_deterministic_bytes(make_config, tmp_path):
    cfgpath = make_config(horizon=500, burn_in=10, trials=1)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run_cli(["simulate", cfgpath, "--out", a]) == 0
    assert run_cli(["simulate", cfgpath, "--out", b]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_simulate_header_and_length(make_config, tmp_path):
    out = tmp_path / "traj.csv"
    assert run_cli(["simulate", make_config(horizon=200, burn_in=0), "--out", out]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "k,x,y,u,z,lambda,lambda_e,xhat_s,xhat,xhat_e,p,p_e,sqerr,sqerr_e"
    assert len(lines) == 201
    assert lines[1].split(",")[0] == "0"


def test_simulate_seed_override_changes_output(make_config, tmp_path):
    cfgpath = make_config(horizon=300, burn_in=0)
    a, b, c = tmp_path / "a.csv", tmp_path / "b.csv", tmp_path / "c.csv"
    run_cli(["simulate", cfgpath, "--out", a])
    run_cli(["simulate", cfgpath, "--seed", 777, "--out", b])
    run_cli(["simulate", cfgpath, "--seed", 777, "--out", c])
    assert a.read_bytes() != b.read_bytes()
    assert b.read_bytes() == c.read_bytes()
    manifest = json.loads((tmp_path / "b.csv.manifest.json").read_text())
    assert manifest["master_seed"] == 777
    assert manifest["seed_override"] == 777
    assert manifest["config"]["simulation"]["master_seed"] == 777


def test_simulate_requires_simulation_tables(tmp_path, capsys):
    path = tmp_path / "min.toml"
    path.write_text(
        "[system]\na = 0.6\nq = 0.01\nr = 0.01\n"
        "[channels]\ngamma_user = 0.3\ngamma_eaves = 0.3\n"
    )
    assert run_cli(["simulate", path, "--out", tmp_path / "t.csv"]) == 2


# --------------------------------------------------------------------- verify


def test_verify_passes_on_consistent_build(make_config, capsys):
    cfgpath = make_config(horizon=20000, burn_in=500, trials=20)
    assert run_cli(["verify", cfgpath, "--workers", 4]) == 0
    out = capsys.readouterr().out
    assert "all 6 checks passed" in out
    assert "FAIL" not in out


def test_verify_catches_corrupted_formula(make_config, capsys, monkeypatch):
    # negative control: a wrong closed form must fail verification, proving
    # the cross-checks are live and not comparing a value with itself
    def corrupted(params, gamma_user, mu):
        return 0.9 * analysis.chain_oracle_legit(params, gamma_user, mu)

    monkeypatch.setattr(analysis, "expected_legit_variance", corrupted)
    cfgpath = make_config(horizon=4000, burn_in=100, trials=8)
    assert run_cli(["verify", cfgpath]) == 5
    out = capsys.readouterr().out
    assert "FAIL" in out
    assert "worst offender" in out


def test_verify_single_trial_skips_ci_checks(make_config, capsys):
    cfgpath = make_config(horizon=20000, burn_in=500, trials=1)
    assert run_cli(["verify", cfgpath]) == 0
    out = capsys.readouterr().out
    assert "all 4 checks passed" in out
    assert "needs at least 2 trials" in out


def test_verify_boundary_skips_chain(make_config, capsys):
    # total blackout: chain checks are skipped, and the MC comparison is
    # exact because the variance recursions sit at the open-loop fixed point
    cfgpath = make_config(gamma_user=1.0, gamma_eaves=1.0, horizon=4000, trials=1, burn_in=100)
    assert run_cli(["verify", cfgpath]) == 0
    out = capsys.readouterr().out
    assert "skip legit closed form vs chain oracle" in out
    assert "skip eaves closed form vs chain oracle" in out
    assert "all 2 checks passed" in out


# ----------------------------------------------------------------------- misc


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["--version"])
    assert exc.value.code == 0
    assert "statecloak" in capsys.readouterr().out
