import json

from torsion_twists.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_model_quartic(capsys):
    code, out, _ = run(capsys, "model", "--p", "2", "--a", "1", "--b", "1", "--d", "5")
    assert code == 0
    assert "5*y^2 = -3*x^4 - 10*x^2 + 25" in out


def test_model_quartic_json(capsys):
    code, out, _ = run(capsys, "model", "--p", "2", "--a", "1", "--b", "1", "--d", "5", "--json")
    assert code == 0
    data = json.loads(out)
    assert (data["p"], data["d"], data["A"], data["B"], data["C"]) == (2, 5, "-3", "-10", "25")
    assert data["equation"] == "5*y^2 = -3*x^4 - 10*x^2 + 25"


def test_model_cubic(capsys):
    code, out, err = run(capsys, "model", "--p", "3", "--a", "0", "--d", "2")
    assert code == 0
    assert "2*z^3 + 6*z*w + 4*w^3 + (-1) = 0" in out


def test_model_not_square_free(capsys):
    code, _, err = run(capsys, "model", "--p", "2", "--a", "1", "--b", "1", "--d", "4")
    assert code == 2
    assert err


def test_model_p5(capsys):
    code, _, err = run(capsys, "model", "--p", "5", "--a", "1", "--d", "2")
    assert code == 2
    assert "p=5 models are not available" in err


def test_bad_expression(capsys):
    code, _, _ = run(capsys, "model", "--p", "3", "--a", "2-)", "--d", "2")
    assert code == 2


def test_verify_relation(capsys):
    code, out, _ = run(capsys, "verify", "relation")
    assert code == 0


def test_verify_all_json(capsys):
    code, out, _ = run(capsys, "verify", "all", "--json")
    assert code == 0
    data = json.loads(out)
    assert data


def test_fit(capsys):
    code, out, _ = run(capsys, "fit", "--json")
    assert code == 0
    assert json.loads(out)


def test_local_quartic_empty(capsys):
    code, out, _ = run(capsys, "local", "--p", "2", "--a", "1", "--b", "1", "--d", "5", "--q", "5", "--json")
    assert code == 0
    assert "Empty" in out


def test_local_cubic_split(capsys):
    code, out, _ = run(capsys, "local", "--p", "3", "--a", "2", "--d", "7", "--q", "7", "--precision", "4")
    assert code == 0
    assert "Empty" in out


def test_local_strict_undetermined(capsys):
    code, _, _ = run(capsys, "local", "--p", "3", "--a", "2", "--d", "7", "--q", "3", "--strict")
    assert code == 3


def test_local_real(capsys):
    code, out, _ = run(capsys, "local", "--p", "2", "--a", "1", "--b", "1", "--d", "-1", "--q", "inf")
    assert code == 0


def test_scan_json_deterministic(capsys):
    _, first, _ = run(capsys, "scan", "--p", "2", "--a", "1", "--b", "1", "--json")
    _, second, _ = run(capsys, "scan", "--p", "2", "--a", "1", "--b", "1", "--json")
    assert first == second
    data = json.loads(first)
    assert sorted(r["d"] for r in data["candidates"]) == [-6, -3, -2, -1, 1, 2, 3, 6]


def test_scan_zero_bound(capsys):
    code, _, err = run(capsys, "scan", "--p", "2", "--a", "0", "--b", "-1")
    assert code == 2
    assert err


def test_bad_primes(capsys):
    code, out, _ = run(capsys, "bad-primes", "--a", "2")
    assert code == 0
    assert out.strip()


def test_missing_subcommand(capsys):
    assert main([]) == 2
