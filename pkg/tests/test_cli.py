import json
import subprocess
import sys

from formforge import (
    HomogeneousForm,
    Polynomial,
    QQ,
    RationalFunction,
    ScaledWitness,
    diagonal_form,
    tits_cubic,
)
from formforge.cli import main
from formforge.jsonio import (
    dumps,
    encode_constructed_form,
    encode_form,
    encode_scaled_witness,
)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_json(path, payload):
    path.write_text(dumps(payload) + "\n", encoding="utf-8")
    return str(path)


def diag_form_file(tmp_path, coeffs, degree, name="form.json"):
    cf = diagonal_form(coeffs, degree)
    return write_json(tmp_path / name, encode_form(cf.form))


def test_construct_tits_cubic(capsys):
    code, out, _ = run(capsys, "construct", "--kind", "tits-cubic", "--param", "a=2")
    assert code == 0
    payload = json.loads(out)
    assert payload["provenance"]["kind"] == "tits-cubic"
    assert payload["witness"] is not None
    assert payload["composition"] is not None


def test_construct_writes_output_file(capsys, tmp_path):
    out_path = tmp_path / "det3.json"
    code, out, _ = run(capsys, "construct", "--kind", "det", "--param", "d=3",
                       "-o", str(out_path))
    assert code == 0
    assert out == ""
    payload = json.loads(out_path.read_text(encoding="utf-8"))
    assert payload["form"]["degree"] == 3


def test_construct_rejects_unknown_param(capsys):
    code, _, err = run(capsys, "construct", "--kind", "det", "--param", "d=3",
                       "--param", "bogus=1")
    assert code == 3
    assert "bogus" in err


def test_verify_uses_stored_witness(capsys, tmp_path):
    cf = tits_cubic(2)
    path = write_json(tmp_path / "tits.json", encode_constructed_form(cf))
    code, out, _ = run(capsys, "verify", "strong-mult", "--form", path)
    assert code == 0
    assert json.loads(out)["verdict"] == "proved"


def test_verify_explicit_witness_refuted(capsys, tmp_path):
    phi = diagonal_form([1, 1], 3).form
    form_path = write_json(tmp_path / "cubic.json", encode_form(phi))
    rows = tuple(
        tuple(
            RationalFunction.const(QQ, 4, 1 if i == j else 0)
            for j in range(2)
        )
        for i in range(2)
    )
    bad = ScaledWitness(RationalFunction.from_poly(phi.body), rows)
    witness_path = write_json(tmp_path / "bad.json", encode_scaled_witness(bad))
    code, out, _ = run(capsys, "verify", "strong-mult", "--form", form_path,
                       "--witness", witness_path)
    assert code == 1
    payload = json.loads(out)
    assert payload["verdict"] == "refuted"
    assert payload["counterexample"] is not None


def test_verify_composition_from_constructed_form(capsys, tmp_path):
    code, out, _ = run(capsys, "construct", "--kind", "det", "--param", "d=2")
    assert code == 0
    path = write_json(tmp_path / "det2.json", json.loads(out))
    code, out, _ = run(capsys, "verify", "composition", "--form", path)
    assert code == 0
    assert json.loads(out)["verdict"] == "proved"


def test_verify_random_requires_seed(capsys, tmp_path):
    cf = tits_cubic(1)
    path = write_json(tmp_path / "tits.json", encode_constructed_form(cf))
    code, _, err = run(capsys, "verify", "strong-mult", "--form", path,
                       "--mode", "random")
    assert code == 3
    assert "seed" in err


def test_verify_random_evidence_exits_unknown(capsys, tmp_path):
    cf = tits_cubic(1)
    path = write_json(tmp_path / "tits.json", encode_constructed_form(cf))
    code, out, _ = run(capsys, "verify", "strong-mult", "--form", path,
                       "--mode", "random", "--seed", "7", "--samples", "20")
    assert code == 2
    payload = json.loads(out)
    assert payload["verdict"] == "evidence"
    assert payload["seed"] == 7
    assert payload["samples"] == 20


def test_budget_env_forces_random_fallback(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("FORMFORGE_TERM_BUDGET", "1")
    cf = tits_cubic(1)
    path = write_json(tmp_path / "tits.json", encode_constructed_form(cf))
    code, out, _ = run(capsys, "verify", "strong-mult", "--form", path)
    assert code == 2
    payload = json.loads(out)
    assert payload["mode"] == "random"
    assert "budget" in payload["notes"]


def test_budget_flag_overrides_env(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("FORMFORGE_TERM_BUDGET", "1")
    cf = tits_cubic(1)
    path = write_json(tmp_path / "tits.json", encode_constructed_form(cf))
    code, out, _ = run(capsys, "verify", "strong-mult", "--form", path,
                       "--budget", "1000000")
    assert code == 0
    assert json.loads(out)["mode"] == "symbolic"


def test_exponent_subcommand(capsys):
    code, out, _ = run(capsys, "exponent", "--degree", "6", "--exponent", "4")
    assert code == 0
    payload = json.loads(out)
    assert payload["e"] == 2
    assert payload["implies_strong"] is False
    assert payload["chain"] == [[2, 2]]


def test_exponent_strong_case(capsys):
    code, out, _ = run(capsys, "exponent", "--degree", "5", "--exponent", "4")
    assert code == 0
    payload = json.loads(out)
    assert payload["e"] == 1
    assert payload["implies_strong"] is True


def test_obstruct_exit_codes(capsys, tmp_path):
    obstructed = diag_form_file(tmp_path, [1, 1], 3, "pair.json")
    code, out, _ = run(capsys, "obstruct", "--form", obstructed)
    assert code == 0
    assert json.loads(out)["verdict"] == "obstructed"

    cf = tits_cubic(2)
    unknown = write_json(tmp_path / "tits.json", encode_constructed_form(cf))
    code, out, _ = run(capsys, "obstruct", "--form", unknown)
    assert code == 2
    assert json.loads(out)["verdict"] == "consistent_unknown"


def test_decompose_with_absolute_flag(capsys, tmp_path):
    body = Polynomial.from_pairs(QQ, 2, [((1, 2), 1)])
    phi = HomogeneousForm.from_body(3, body)
    path = write_json(tmp_path / "xy2.json", encode_form(phi))
    code, out, _ = run(capsys, "decompose", "--form", path, "--absolute")
    assert code == 0
    payload = json.loads(out)
    assert len(payload["components"]) == 1
    assert payload["absolutely_indecomposable"] is True


def test_polarize_and_radical(capsys, tmp_path):
    path = diag_form_file(tmp_path, [1, 2], 3)
    code, out, _ = run(capsys, "polarize", "--form", path)
    assert code == 0
    assert json.loads(out)["degree"] == 3

    code, out, _ = run(capsys, "radical", "--form", path)
    assert code == 0
    payload = json.loads(out)
    assert payload["dim"] == 0
    assert payload["nondegenerate"] is True

    body = Polynomial.from_pairs(QQ, 2, [((3, 0), 1)])
    degen = write_json(tmp_path / "degen.json",
                       encode_form(HomogeneousForm.from_body(3, body)))
    code, out, _ = run(capsys, "radical", "--form", degen)
    assert code == 0
    assert json.loads(out)["dim"] == 1


def test_catalog_lists_builtins(capsys):
    code, out, _ = run(capsys, "catalog")
    assert code == 0
    rows = json.loads(out)
    assert len(rows) == 17
    names = [row["name"] for row in rows]
    assert "det-3" in names and "albert" in names
    assert all("degree" in row and "vars" in row for row in rows)


def test_output_is_deterministic(capsys):
    _, first, _ = run(capsys, "construct", "--kind", "albert")
    _, second, _ = run(capsys, "construct", "--kind", "albert")
    assert first == second


def test_malformed_json_exits_4(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    code, _, err = run(capsys, "verify", "strong-mult", "--form", str(path))
    assert code == 4
    assert "line" in err


def test_wrong_shape_json_exits_4(capsys, tmp_path):
    path = write_json(tmp_path / "shape.json", {"degree": 3, "vars": 2})
    code, _, err = run(capsys, "radical", "--form", str(path))
    assert code == 4
    assert "malformed" in err


def test_missing_file_exits_3(capsys, tmp_path):
    code, _, err = run(capsys, "radical", "--form", str(tmp_path / "absent.json"))
    assert code == 3
    assert err


def test_no_subcommand_exits_3(capsys):
    code, _, _ = run(capsys)
    assert code == 3


def test_bad_flag_exits_3(capsys):
    code, _, _ = run(capsys, "exponent", "--degree", "six", "--exponent", "4")
    assert code == 3


def test_construct_product_pipeline(capsys, tmp_path):
    code, out, _ = run(capsys, "construct", "--kind", "pfister",
                       "--param", "gammas=1")
    assert code == 0
    hyp = write_json(tmp_path / "hyp.json", json.loads(out))
    code, out, _ = run(capsys, "construct", "--kind", "diagonal",
                       "--param", "coeffs=1", "--param", "degree=1")
    assert code == 0
    line = write_json(tmp_path / "line.json", json.loads(out))

    code, out, _ = run(capsys, "construct", "--kind", "product",
                       "--input", hyp, "--input", line)
    assert code == 0
    payload = json.loads(out)
    assert payload["form"]["degree"] == 3
    assert payload["witness"] is not None

    combined = write_json(tmp_path / "prod.json", payload)
    code, out, _ = run(capsys, "verify", "strong-mult", "--form", combined)
    assert code == 0
    assert json.loads(out)["verdict"] == "proved"


def test_console_script_round_trip(tmp_path):
    first = subprocess.run(
        ["formforge", "exponent", "--degree", "9", "--exponent", "6"],
        capture_output=True, text=True,
    )
    assert first.returncode == 0
    payload = json.loads(first.stdout)
    assert payload["e"] == 3

    module = subprocess.run(
        [sys.executable, "-c",
         "import sys; from formforge.cli import main; sys.exit(main(sys.argv[1:]))",
         "exponent", "--degree", "9", "--exponent", "6"],
        capture_output=True, text=True,
    )
    assert module.returncode == 0
    assert module.stdout == first.stdout
