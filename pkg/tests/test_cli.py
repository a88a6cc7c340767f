import json

import pytest

from cobex.cli import build_parser, main
from cobex.complex import build_cube, load

SUBCOMMANDS = ["gen", "info", "cohomology", "expansion", "filling-norm", "fill-cube", "dual",
               "cheeger", "spectral", "sample", "sweep", "inherit-mc", "concentration"]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_expansion_simplex(capsys):
    out = run_json(capsys, "expansion", "--family", "simplex", "--n", "6", "--k", "1")
    assert out["h"] == "2/1"
    assert out["status"] == "exact"
    assert out["predicted"] == "2/1"
    assert out["cells_per_dim"] == [6, 15, 20]


def test_gen_info_roundtrip(capsys, tmp_path):
    path = tmp_path / "q3.json"
    assert run(capsys, "gen", "--family", "cube", "--n", "3", "--out", str(path))[0] == 0
    assert load(path) == build_cube(3)
    info = run_json(capsys, "info", str(path))
    assert info["cells_per_dim"] == [8, 12, 6, 1]


def test_cohomology_and_filling_norm(capsys):
    out = run_json(capsys, "cohomology", "--family", "cross", "--n", "3")
    assert out["dims"] == {"0": 0, "1": 0, "2": 1}
    out = run_json(capsys, "filling-norm", "--family", "simplex", "--n", "4", "--k", "0")
    assert out["filling_norm"] == "3/4" and out["identity_holds"] is True


def test_fill_cube_and_dual(capsys):
    out = run_json(capsys, "fill-cube", "--n", "3", "--j", "0", "--cycle", '["000", "111"]',
                   "--oracle")
    assert out["vol_y"] == 3 and out["min_fill"] == 3 and out["within_bound"]
    out = run_json(capsys, "fill-cube", "--n", "4", "--j", "1", "--seed", "5")
    assert out["within_bound"]
    out = run_json(capsys, "dual", "--n", "3", "--k", "1")
    assert out["commuting_mismatches"] == 0 and len(out["map"]) == 12


def test_spectral_commands(capsys):
    out = run_json(capsys, "cheeger", "--family", "simplex", "--n", "5", "--dim", "1")
    assert out["lower_ok"] and out["upper_ok"] and out["h"] == "3/1"
    out = run_json(capsys, "spectral", "--family", "simplex", "--n", "4", "--dim", "1",
                   "--probes", "20")
    assert out["lambda1"] == pytest.approx(4)
    assert out["probe"]["ok"]


def test_sample_is_seeded(capsys):
    a = run(capsys, "sample", "--model", "lm", "--n", "6", "--k", "1", "--p", "0.5",
            "--seed", "3")[1]
    b = run(capsys, "sample", "--model", "lm", "--n", "6", "--k", "1", "--p", "0.5",
            "--seed", "3")[1]
    assert a == b


def test_sweep_csv(capsys, tmp_path):
    csv1, csv2 = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["sweep", "--model", "lm", "--k", "1", "--n", "12", "--p-grid", "0.05:0.30:0.01",
            "--trials", "8", "--seed", "7"]
    assert run(capsys, *args, "--csv", str(csv1), "--workers", "1")[0] == 0
    assert run(capsys, *args, "--csv", str(csv2), "--workers", "2")[0] == 0
    rows = csv1.read_text().splitlines()
    assert len(rows) == 27
    assert csv1.read_bytes() == csv2.read_bytes()


def test_sweep_config_file(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"model": "er", "n": 10, "k": 0, "p_grid": "0.1:0.5:0.2",
                               "trials": 5, "seed": 1, "measure": "connectivity"}))
    out = run_json(capsys, "sweep", "--config", str(cfg))
    assert [pt["p"] for pt in out["points"]] == [0.1, 0.3, 0.5]


def test_inherit_and_concentration(capsys):
    out = run_json(capsys, "inherit-mc", "--family", "simplex", "--n", "5", "--k", "1",
                   "--p-grid", "0.8,1.0", "--trials", "4")
    assert out["h_ambient"] == "5/3"
    assert out["points"][-1]["mean_value"] == 1.0
    out = run_json(capsys, "concentration", "--family", "simplex", "--n", "5", "--k", "1",
                   "--cells", "[[1, 2]]", "--p", "0.5,1.0", "--trials", "50")
    assert out["results"][1]["mean"] == out["results"][1]["full_norm"] == 3


def test_exit_codes(capsys, tmp_path):
    code, _, err = run(capsys, "expansion", "--n", "4")
    assert code == 2 and "family" in err
    code, _, _ = run(capsys, "info", str(tmp_path / "missing.json"))
    assert code == 2
    code, _, _ = run(capsys, "expansion", "--family", "simplex", "--n", "8", "--k", "1",
                     "--q-max", "4", "--strict")
    assert code == 3
    code, _, _ = run(capsys, "filling-norm", "--family", "simplex", "--n", "8", "--k", "1",
                     "--q-max", "4")
    assert code == 3
    assert main(["bogus"]) == 2


@pytest.mark.parametrize("cmd", SUBCOMMANDS)
def test_every_subcommand_has_help(cmd, capsys):
    assert main([cmd, "--help"]) == 0
    assert "--" in capsys.readouterr().out


def test_parser_lists_all_subcommands():
    text = build_parser().format_help()
    for cmd in SUBCOMMANDS:
        assert cmd in text


def test_workers_env(monkeypatch, capsys):
    monkeypatch.setenv("COBEX_WORKERS", "2")
    out = run_json(capsys, "expansion", "--family", "cross", "--n", "3", "--k", "0")
    assert out["h"] == "2/1"
