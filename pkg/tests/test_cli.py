import json
import subprocess
import sys

import pytest

from qshuffle.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_shuffle_text(capsys):
    assert run(capsys, "shuffle", "x1", "x1", "--q", "2")[:2] == (0, "x2\n")
    code, out, _ = run(capsys, "shuffle", "x1", "x1", "--q", "3")
    assert code == 0 and out.strip() == "x2 + 2*x1 x1"


def test_shuffle_json_mixed(capsys):
    code, rep = run_json(capsys, "shuffle", "y1", "y1", "--q", "2")
    assert code == 0
    assert rep == {"schema": 1, "kind": "shuffle", "q": 2, "ring": "E", "result": "y2"}


def test_characteristic_and_degree_flags(capsys):
    code, rep = run_json(capsys, "shuffle", "x1", "x1", "--p", "2", "--e", "2")
    assert code == 0 and rep["q"] == 4


def test_ehat(capsys):
    code, out, _ = run(capsys, "ehat", "x2 x5", "--q", "3")
    assert code == 0 and out.strip() == "x2 x5 + y2 x5 + y2 y5"
    assert run(capsys, "ehat", "y1")[0] == 3


def test_zeta_output(capsys):
    code, out, _ = run(capsys, "zeta", "(1)", "--q", "2", "--prec", "20")
    assert code == 0 and out.startswith("1 + θ^-2 + θ^-3 + θ^-4 + θ^-5 + θ^-9")
    code, rep = run_json(capsys, "zeta", "(1)", "--q", "2", "--prec", "20")
    assert rep["schema"] == 1 and rep["series"][0] == [0, 1, 1]


def test_precision_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("QSHUFFLE_PREC", "8")
    _, rep = run_json(capsys, "zeta", "(1)", "--q", "2")
    assert rep["prec"] == "8"
    # the flag wins over the environment
    _, rep = run_json(capsys, "zeta", "(1)", "--q", "2", "--prec", "12")
    assert rep["prec"] == "12"
    monkeypatch.setenv("QSHUFFLE_PREC", "many")
    assert run(capsys, "zeta", "(1)")[0] == 3


def test_bad_input_exits_3(capsys):
    code, _, err = run(capsys, "shuffle", "x1", "z1", "--q", "2")
    assert code == 3 and "'z1' at position 0" in err
    code, _, err = run(capsys, "shuffle", "x1", "x1 x2 q3", "--q", "2")
    assert code == 3 and "position 6" in err
    assert run(capsys, "shuffle", "x1", "x1", "--q", "6")[0] == 3
    assert run(capsys, "zeta", "()")[0] == 3
    assert run(capsys, "eisenstein", "(1)", "--point", "theta^(1/2),theta^(1/2)")[0] == 3
    assert run(capsys, "eisenstein", "(1)", "--point", "theta^(1/2)")[0] == 3
    with pytest.raises(SystemExit) as exc:
        main(["no-such-verb"])
    assert exc.value.code == 3


def test_insufficient_degree_exits_2(capsys):
    code, _, err = run(capsys, "eisenstein", "(1)", "--q", "2", "--prec", "20", "--D", "0")
    assert code == 2 and "precision error" in err


def test_eisenstein_methods_agree(capsys):
    args = ("eisenstein", "(2,1)", "--q", "2", "--prec", "10")
    _, a = run_json(capsys, *args)
    _, b = run_json(capsys, *args, "--method", "direct")
    assert a["series"] == b["series"] and a["prec"] == b["prec"] == "10"


def test_eisenstein_rank_one_is_zeta(capsys):
    _, e = run_json(capsys, "eisenstein", "(1)", "--rank", "1", "--q", "2", "--prec", "12",
                    "--method", "direct")
    _, z = run_json(capsys, "zeta", "(1)", "--q", "2", "--prec", "12")
    assert e["series"] == z["series"]


@pytest.mark.parametrize("verb,extra", [
    ("chen", ["--max-weight", "5", "--max-d", "2"]),
    ("shi", ["--max-weight", "4", "--max-d", "2"]),
    ("goss-identity", ["--prec", "12", "--rank", "1"]),
    ("depth1-product", ["--prec", "8", "--a", "1", "--b", "2"]),
    ("ghat", ["--prec", "8", "--samples", "3"]),
])
def test_verification_verbs_pass(capsys, verb, extra):
    code, rep = run_json(capsys, verb, "--q", "3", *extra)
    assert code == 0 and rep["schema"] == 1 and rep["failures"] == 0 and rep["checked"] > 0


def test_goss_identity_rank_two(capsys):
    # the sample point theta^(1/4) stays off the rank-2 lattice
    code, rep = run_json(capsys, "goss-identity", "--q", "2", "--prec", "8")
    assert code == 0 and rep["failures"] == 0


def test_goss_poly(capsys):
    code, rep = run_json(capsys, "goss-poly", "--k", "2", "--q", "2", "--rank", "1",
                         "--prec", "10")
    assert code == 0
    # G_k = t^k for k <= q
    assert [c["degree"] for c in rep["coefficients"]] == [2]


def test_ghat_single_combo(capsys):
    code, rep = run_json(capsys, "ghat", "x1", "--q", "2", "--prec", "8", "--d", "1")
    _, z = run_json(capsys, "zeta", "(1)", "--q", "2", "--prec", "8")
    assert code == 0 and rep["kind"] == "ghat"
    assert rep["text"].startswith(z["text"].split(" + O(")[0].split(" + θ^-8")[0][:12])


def test_ghat_sampling_is_seeded(capsys):
    args = ("ghat", "--q", "2", "--prec", "8", "--samples", "3")
    _, a = run_json(capsys, *args, "--seed", "5")
    _, b = run_json(capsys, *args, "--seed", "5")
    assert a == b and a["seed"] == 5


def test_verify_main(capsys):
    code, rep = run_json(capsys, "verify-main", "(1)", "(2)", "--q", "3", "--prec", "8")
    assert code == 0 and rep["checks"][0]["stable"]
    code, out, _ = run(capsys, "verify-main", "(1)", "(1)", "--q", "2", "--prec", "8")
    assert code == 0 and "0 failures" in out


def test_failures_exit_1(capsys, monkeypatch):
    import qshuffle.lattice as lat
    monkeypatch.setattr(lat, "delta_terms", lambda a, b, q: ())
    code, out, _ = run(capsys, "depth1-product", "--q", "2", "--prec", "8", "--d", "0")
    assert code == 1 and "FAIL" in out


def test_assoc_sweep_json_independent_of_workers(capsys, monkeypatch):
    _, one = run_json(capsys, "assoc-sweep", "--q", "3", "--max-weight", "5", "--workers", "1")
    monkeypatch.setenv("QSHUFFLE_WORKERS", "2")
    _, two = run_json(capsys, "assoc-sweep", "--q", "3", "--max-weight", "5")
    assert one == two and one["failures"] == []


def test_out_file(capsys, tmp_path):
    path = tmp_path / "rep.json"
    code, out, _ = run(capsys, "shuffle", "x1", "x2", "--q", "2", "--json", "--out", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["result"] == "x3 + x1 x2"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qshuffle", "shuffle", "x1", "x1", "--q", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "x2"
