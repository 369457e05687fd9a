import json

from robinbec.cli import main


def run(argv):
    return main(argv)


def test_spectrum_command(tmp_path, capsys):
    out = tmp_path / "spec.csv"
    rc = run(["spectrum", "--sigma", "-1", "--L", "20", "--k-max", "10",
              "--out", str(out)])
    assert rc == 0
    lines = out.read_text().splitlines()
    header_idx = next(i for i, l in enumerate(lines) if not l.startswith("#"))
    assert lines[header_idx] == "k,parity,epsilon,wavenumber,residual,bracket_lo,bracket_hi"
    rows = lines[header_idx + 1:]
    assert len(rows) == 11
    # bracket invariant holds row by row for k >= 2
    for row in rows[2:]:
        f = row.split(",")
        assert float(f[5]) < float(f[2]) < float(f[6])


def test_spectrum_command_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for out in (a, b):
        assert run(["spectrum", "--sigma", "-1.3", "--L", "17", "--k-max", "7",
                    "--out", str(out)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_oracle_command_occupation_bound(tmp_path):
    out = tmp_path / "oracle.json"
    rc = run(["oracle", "--check", "occupation-bound", "--sigma", "-1", "--L", "10",
              "--beta", "1", "--mu", "-1.5", "--lambda", "1", "--mode", "2",
              "--out", str(out)])
    assert rc == 0
    rep = json.loads(out.read_text())
    assert rep["check"] == "occupation-bound"
    assert rep["pass"] is True
    assert rep["lhs"] <= rep["rhs"] + rep["tail_budget"] + 1e-12
    assert set(rep) >= {"check", "params", "lhs", "rhs", "residual", "tail_budget", "pass"}


def test_oracle_command_exchange_default_instance(tmp_path):
    out = tmp_path / "oracle.json"
    rc = run(["oracle", "--check", "exchange", "--sigma", "-1", "--L", "10",
              "--beta", "1", "--mu", "-1.5", "--lambda", "1", "--out", str(out)])
    assert rc == 0
    rep = json.loads(out.read_text())
    assert rep["params"]["j"] == 1
    assert rep["params"]["targets"] == [[0, 1]]
    assert rep["pass"] is True


def test_thermo_command(tmp_path):
    out = tmp_path / "thermo.json"
    rc = run(["thermo", "--sigma", "-1", "--L", "40", "--beta", "1", "--rho", "1",
              "--lambda", "1", "--model", "scf", "--out", str(out)])
    assert rc == 0
    rep = json.loads(out.read_text())
    assert rep["model"] == "mean_field_scf"
    assert rep["mu"] < rep["eps0"]
    assert abs(rep["rho_tilde"] + rep["rho_cond_finite"] - 1.0) < 1e-9


def test_profile_command(tmp_path):
    out = tmp_path / "prof.csv"
    rc = run(["profile", "--sigma", "-1", "--L", "30", "--beta", "1", "--rho", "1",
              "--model", "free", "--grid-n", "301", "--fraction", "0.9",
              "--out", str(out)])
    assert rc == 0
    lines = out.read_text().splitlines()
    header_idx = next(i for i, l in enumerate(lines) if not l.startswith("#"))
    assert lines[header_idx] == "x,n_total,n_cond,n_thermal"
    assert len(lines) == header_idx + 1 + 301


def test_sweep_command_with_fits(tmp_path):
    out = tmp_path / "sweep.csv"
    fit_out = tmp_path / "sweep.fit.json"
    rc = run(["sweep", "--sigma", "-1", "--beta", "1", "--rho", "1", "--lambda", "1",
              "--model", "scf", "--L-grid", "50:400:geometric:6",
              "--out", str(out), "--fit-out", str(fit_out)])
    assert rc == 0
    lines = out.read_text().splitlines()
    header_idx = next(i for i, l in enumerate(lines) if not l.startswith("#"))
    rows = lines[header_idx + 1:]
    assert len(rows) == 6
    fits = json.loads(fit_out.read_text())
    assert fits["mu_asymptotics"]["pass"] is True
    assert abs(fits["critical_density"] - 0.14274846129686652) < 1e-12


def test_sweep_rows_ordered_and_deterministic(tmp_path, monkeypatch):
    args = ["sweep", "--sigma", "-1", "--beta", "1", "--rho", "1",
            "--L-grid", "20:80:geometric:4"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(args + ["--out", str(a), "--fit-out", str(tmp_path / "a.json")]) == 0
    monkeypatch.setenv("ROBINBEC_THREADS", "3")
    assert run(args + ["--out", str(b), "--fit-out", str(tmp_path / "b.json")]) == 0
    assert a.read_bytes() == b.read_bytes()
    Ls = [float(r.split(",")[0]) for r in a.read_text().splitlines()
          if r and not r.startswith("#") and not r.startswith("L,")]
    assert Ls == sorted(Ls)


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"sigma": -1.0, "L": 20.0, "k_max": 4}))
    out = tmp_path / "spec.csv"
    rc = run(["spectrum", "--config", str(cfg), "--k-max", "6", "--out", str(out)])
    assert rc == 0
    rows = [l for l in out.read_text().splitlines()
            if l and not l.startswith("#") and not l.startswith("k,")]
    assert len(rows) == 7  # flag overrides the file's k_max = 4


def test_validation_exit_code(tmp_path, capsys):
    rc = run(["spectrum", "--sigma", "1.0", "--L", "20",
              "--out", str(tmp_path / "x.csv")])
    assert rc == 2
    err = capsys.readouterr().err
    assert "sigma" in err
    # second bound state missing at L|sigma| <= 2 is also a validation error
    rc = run(["spectrum", "--sigma", "-1", "--L", "1.5", "--k-max", "3",
              "--out", str(tmp_path / "y.csv")])
    assert rc == 2


def test_missing_required_flag(tmp_path):
    rc = run(["spectrum", "--L", "20", "--out", str(tmp_path / "x.csv")])
    assert rc == 2


def test_mu_above_ground_state_is_validation_error(tmp_path):
    rc = run(["oracle", "--check", "occupation-bound", "--sigma", "-1", "--L", "10",
              "--beta", "1", "--mu", "0.5", "--lambda", "1", "--mode", "2",
              "--out", str(tmp_path / "o.json")])
    assert rc == 2


def test_numerical_failure_exit_code(tmp_path, monkeypatch, capsys):
    import robinbec.cli as cli
    from robinbec.spectrum import BracketFailure

    def boom(*args, **kwargs):
        raise BracketFailure("no sign change on [1.0, 2.0]")

    monkeypatch.setattr(cli, "build_spectrum", boom)
    rc = run(["spectrum", "--sigma", "-1", "--L", "20",
              "--out", str(tmp_path / "x.csv")])
    assert rc == 1
    assert "no sign change on [1.0, 2.0]" in capsys.readouterr().err


def test_config_lambda_alias(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "sigma": -1.0, "L": 10.0, "beta": 1.0, "mu": -1.5, "lambda": 1.0,
        "check": "occupation-bound", "mode": 2,
    }))
    out = tmp_path / "o.json"
    rc = run(["oracle", "--config", str(cfg), "--out", str(out)])
    assert rc == 0
    rep = json.loads(out.read_text())
    assert rep["params"]["lambda"] == 1.0
