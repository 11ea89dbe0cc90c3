import json

from imspec.cli import main


def run(args, tmp_path, name="out.json"):
    out = tmp_path / name
    code = main([*args, "--out", str(out)])
    return code, out.read_text() if out.exists() else ""


def test_catalog_list(tmp_path):
    code, text = run(["catalog-list"], tmp_path)
    assert code == 0
    data = json.loads(text)
    assert "koebe" in data["entries"]


def test_classify_koebe(tmp_path):
    code, text = run(["classify", "catalog:koebe"], tmp_path)
    assert code == 0
    data = json.loads(text)
    assert data["label"]["family"] == "L_III"
    assert data["label"]["s"] == 1
    assert data["factorization"]["on_circle_zeros"][0]["mult"] == 1
    assert data["spectrum_pieces"][0]["formula"] == "abs_tau_minus_1"


def test_classify_inline_identity(tmp_path):
    code, text = run(["classify", "--num", "0,1", "--den", "1"], tmp_path)
    assert code == 0
    data = json.loads(text)
    assert data["label"]["family"] == "L_I" and data["label"]["s"] == 0


def test_classify_r2(tmp_path):
    code, text = run(["classify", "catalog:R2"], tmp_path)
    assert code == 0
    data = json.loads(text)
    assert data["label"]["family"] == "L_II" and data["label"]["s"] == 1


def test_classify_not_classified_still_exits_zero(tmp_path):
    # leading-minus coefficient lists need the --den=... form
    code, text = run(["classify", "--num", "1", "--den=-1,3,-3,1"], tmp_path)
    assert code == 0
    assert json.loads(text)["label"]["family"] == "NotClassified"


def test_spectrum_both_modes(tmp_path):
    code, text = run(["spectrum", "catalog:koebe", "--tau", "-2", "--mode", "both",
                      "--threads", "2"], tmp_path)
    assert code == 0
    data = json.loads(text)
    assert data["closed_form"] == 1.0
    assert abs(data["numeric"] - 1.0) <= 0.05
    assert data["discrepancy"] <= 0.05


def test_spectrum_complex_tau_numeric_only(tmp_path):
    code, text = run(["spectrum", "catalog:identity", "--tau", "0+1i",
                      "--mode", "numeric"], tmp_path)
    assert code == 0
    data = json.loads(text)
    assert "closed_form" not in data
    assert abs(data["numeric"]) < 1e-8


def test_spectrum_coeff_mode(tmp_path):
    code, text = run(["spectrum", "catalog:koebe", "--tau", "1", "--mode", "coeff"],
                     tmp_path)
    assert code == 0
    data = json.loads(text)
    assert abs(data["coefficient_growth"]["value"] - 2.0) < 0.05


def test_spectrum_csv_ladder(tmp_path):
    out = tmp_path / "ladder.csv"
    code = main(["spectrum", "catalog:identity", "--tau", "2", "--mode", "numeric",
                 "--format", "csv", "--out", str(out)])
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "k,r,logI,abscissa"
    assert len(lines) >= 5


def test_norms_command(tmp_path):
    code, text = run(["norms", "catalog:koebe"], tmp_path)
    assert code == 0
    data = json.loads(text)
    assert abs(data["schwarzian_E2"]["value"] - 6.0) < 1e-4
    assert abs(data["preschwarzian_E1"]["value"] - 6.0) < 1e-4


def test_parse_error_exit_code(tmp_path):
    assert main(["classify", "catalog:nope"]) == 2
    assert main(["spectrum", "catalog:koebe", "--tau", "zzz"]) == 2
    assert main(["classify"]) == 2


def test_unsupported_exit_code(tmp_path):
    # closed form requested for a map whose derivative has a double critical
    # point on the circle
    assert main(["spectrum", "--num", "0,1,-1,0.33333333333333333", "--tau", "-2",
                 "--mode", "closed"]) == 3
    assert main(["spectrum", "catalog:E1", "--tau", "1", "--mode", "closed"]) == 3


def test_verify_suite_oracles(tmp_path):
    code, text = run(["verify", "--suite", "oracles"], tmp_path)
    assert code == 0
    data = json.loads(text)
    assert data["passed"] is True
    assert all(r["passed"] for r in data["results"])


def test_verify_byte_determinism_across_threads(tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    assert main(["verify", "--suite", "determinism", "--threads", "1",
                 "--out", str(a)]) == 0
    assert main(["verify", "--suite", "determinism", "--threads", "8",
                 "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_config_file_roundtrip(tmp_path):
    cfg = tmp_path / "cfg.toml"
    cfg.write_text("k_max = 10\nthreads = 1\n")
    out = tmp_path / "o.json"
    code = main(["--config", str(cfg), "spectrum", "catalog:identity", "--tau", "3",
                 "--mode", "numeric", "--out", str(out)])
    assert code == 0
    data = json.loads(out.read_text())
    assert abs(data["numeric"]) < 1e-9
