"""End-to-end checks of the fcodes command line."""

from __future__ import annotations

import json

import pytest

from fcodes.cli import main


def run(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# --- bounds -------------------------------------------------------------------


def test_bounds_plotkin_weight_matrix(capsys):
    code, out, _ = run(capsys, "bounds", "--matrix", "dwt", "--k", "6", "--t", "2", "--method", "plotkin")
    assert code == 0
    assert out.strip() == "25/6 (ceil 5)"


def test_bounds_plotkin_json(capsys):
    code, out, _ = run(
        capsys, "bounds", "--matrix", "dwt", "--k", "6", "--t", "2",
        "--method", "plotkin", "--json",
    )
    assert code == 0
    data = json.loads(out)
    assert data["value_num"] == 25 and data["value_den"] == 6
    assert data["integer_value"] == 5


def test_bounds_gv_function_matrix(capsys):
    code, out, _ = run(
        capsys, "bounds", "--matrix", "function", "--function", "parity:k=3",
        "--t", "1", "--method", "gv",
    )
    assert code == 0
    assert out.strip() == "2"


def test_bounds_hadamard_not_applicable(capsys):
    code, out, _ = run(capsys, "bounds", "--method", "hadamard", "--size", "9", "--dist", "2")
    assert code == 0
    assert out.strip() == "not-applicable"


def test_bounds_sandwich(capsys):
    code, out, _ = run(capsys, "bounds", "--matrix", "dwt", "--k", "4", "--t", "1", "--method", "sandwich")
    assert code == 0
    assert out.startswith("lower ") and " upper " in out


def test_bounds_wt_lower(capsys):
    code, out, _ = run(capsys, "bounds", "--method", "wt-lower", "--t", "2")
    assert code == 0
    assert out.strip() == "21/4 (ceil 6)"


def test_bounds_ecc_values(capsys):
    code, out, _ = run(capsys, "bounds", "--method", "ecc-values", "--image-size", "1048576", "--t", "1")
    assert code == 0
    assert out.strip() == "25"


def test_bounds_missing_parameter_is_usage_error(capsys):
    code, _, err = run(capsys, "bounds", "--method", "plotkin", "--matrix", "dwt", "--t", "1")
    assert code == 2
    assert "--k" in err


def test_bounds_config_file_supplies_defaults(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("k = 6\nt = 2\n# comment\n")
    code, out, _ = run(capsys, "bounds", "--method", "plotkin", "--matrix", "dwt", "--config", str(cfg))
    assert code == 0
    assert out.strip() == "25/6 (ceil 5)"


def test_bounds_json_config(capsys, tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text('{"k": 6, "t": 2}')
    code, out, _ = run(capsys, "bounds", "--method", "plotkin", "--matrix", "dwt", "--config", str(cfg))
    assert code == 0
    assert out.strip() == "25/6 (ceil 5)"


def test_bounds_flag_overrides_config(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("t=2\nk=9\n")
    code, out, _ = run(
        capsys, "bounds", "--method", "plotkin", "--matrix", "dwt", "--k", "6",
        "--config", str(cfg),
    )
    assert code == 0
    assert out.strip() == "25/6 (ceil 5)"


# --- build-code ---------------------------------------------------------------


def test_build_code_exact_restricted_matrix(capsys, tmp_path):
    mat = tmp_path / "d.json"
    mat.write_text('{"dim": 3, "entries": [[0,2,1],[2,0,2],[1,2,0]]}')
    code, out, _ = run(capsys, "build-code", "--kind", "exact", "--matrix", "file", "--file", str(mat))
    assert code == 0
    assert "N = 3 (proven" in out


def test_build_code_exact_budget_exhaustion_exit(capsys, tmp_path):
    mat = tmp_path / "d.json"
    mat.write_text('{"dim": 4, "entries": [[0,3,3,3],[3,0,3,3],[3,3,0,3],[3,3,3,0]]}')
    code, out, _ = run(
        capsys, "build-code", "--kind", "exact", "--matrix", "file", "--file", str(mat),
        "--max-nodes", "2",
    )
    assert code == 2
    assert "budget exhausted" in out


def test_build_code_greedy_to_file(capsys, tmp_path):
    out_path = tmp_path / "code.txt"
    code, _, _ = run(
        capsys, "build-code", "--kind", "greedy", "--matrix", "dwt", "--k", "4",
        "--t", "1", "--length", "4", "--out", str(out_path),
    )
    assert code == 0
    lines = [l for l in out_path.read_text().splitlines() if not l.startswith("#")]
    assert len(lines) == 5 and all(len(l) == 4 for l in lines)


def test_build_code_hadamard_impossible(capsys):
    code, _, err = run(capsys, "build-code", "--kind", "hadamard", "--dist", "3")
    assert code == 1
    assert "no Sylvester order" in err


def test_build_code_replicate(capsys, tmp_path):
    src = tmp_path / "in.txt"
    src.write_text("01\n10\n")
    code, out, _ = run(capsys, "build-code", "--kind", "replicate", "--in", str(src), "--factor", "2")
    assert code == 0
    assert "0011" in out and "1100" in out  # bits repeat in place


# --- encoder pipeline -----------------------------------------------------------


def test_fcc_build_verify_encode_decode_roundtrip(capsys, tmp_path):
    enc_path = tmp_path / "enc.txt"
    code, _, err = run(
        capsys, "fcc-build", "--function", "wt", "--k", "6", "--t", "1",
        "--construction", "1", "--out", str(enc_path),
    )
    assert code == 0
    assert "r=3" in err

    code, out, _ = run(capsys, "fcc-verify", "--encoder", str(enc_path))
    assert code == 0 and out.strip() == "OK"

    code, out, _ = run(capsys, "fcc-encode", "--encoder", str(enc_path), "--u", "110100")
    assert code == 0
    codeword = out.strip()
    assert codeword.startswith("110100") and len(codeword) == 9

    flipped = "0" + codeword[1:] if codeword[0] == "1" else "1" + codeword[1:]
    code, out, _ = run(capsys, "fcc-decode", "--encoder", str(enc_path), "--y", flipped)
    assert code == 0
    assert out.strip() == "3"  # wt(110100)


def test_fcc_verify_numeric_alias_and_inline_build(capsys):
    code, out, _ = run(
        capsys, "fcc-verify", "--function", "wt", "--k", "8", "--t", "1",
        "--construction", "1",
    )
    assert code == 0 and out.strip() == "OK"


@pytest.mark.parametrize(
    "function,construction",
    [
        ("delta_T:k=8,T=3", "2"),
        ("minmax:w=3,l=3", "3"),
        ("minmax:w=3,l=3", "4"),
        ("delta_T:k=9,T=5", "locally-binary"),
    ],
)
def test_fcc_verify_all_constructions(capsys, function, construction):
    code, out, _ = run(
        capsys, "fcc-verify", "--function", function, "--t", "1",
        "--construction", construction,
    )
    assert code == 0 and out.strip() == "OK"


def test_bounds_gv_heuristic_order(capsys):
    code, out, _ = run(
        capsys, "bounds", "--matrix", "function", "--function", "wt:k=5",
        "--t", "1", "--method", "gv", "--order", "heuristic",
    )
    assert code == 0
    assert out.strip().isdigit()


def test_fcc_verify_detects_violation(capsys, tmp_path):
    enc_path = tmp_path / "enc.txt"
    run(
        capsys, "fcc-build", "--function", "wt", "--k", "5", "--t", "1",
        "--construction", "1", "--out", str(enc_path),
    )
    text = enc_path.read_text().splitlines()
    # sabotage: make the weight-1 parity equal the weight-0 parity
    parities = [l for l in text if not l.startswith("#")]
    headers = [l for l in text if l.startswith("#")]
    parities[1] = parities[0]
    enc_path.write_text("\n".join(headers + parities) + "\n")

    code, out, _ = run(capsys, "fcc-verify", "--encoder", str(enc_path))
    assert code == 1
    assert out.startswith("VIOLATION")


def test_fcc_verify_explicit_t_overrides_stored_t(capsys, tmp_path):
    enc_path = tmp_path / "enc.txt"
    run(
        capsys, "fcc-build", "--function", "wt", "--k", "8", "--t", "1",
        "--construction", "1", "--out", str(enc_path),
    )
    # the file was built for one substitution; its parities cannot survive two
    code, out, _ = run(capsys, "fcc-verify", "--encoder", str(enc_path), "--t", "2")
    assert code == 1
    assert out.startswith("VIOLATION")
    # without the flag the stored t=1 applies and the check passes
    code, out, _ = run(capsys, "fcc-verify", "--encoder", str(enc_path))
    assert code == 0
    assert out.strip() == "OK"


def test_fcc_verify_json_witness(capsys, tmp_path):
    enc_path = tmp_path / "enc.txt"
    run(
        capsys, "fcc-build", "--function", "parity", "--k", "3", "--t", "1",
        "--out", str(enc_path),
    )
    code, out, _ = run(capsys, "fcc-verify", "--encoder", str(enc_path), "--json")
    assert code == 0
    data = json.loads(out)
    assert data["ok"] is True and data["mode"] == "exhaustive"


def test_fcc_build_wrong_family_is_usage_error(capsys):
    code, _, err = run(
        capsys, "fcc-build", "--function", "parity", "--k", "4", "--t", "1",
        "--construction", "delta-ramp",
    )
    assert code == 2
    assert "delta" in err


def test_fcc_decode_out_of_model_flag(capsys, tmp_path):
    enc_path = tmp_path / "enc.txt"
    run(
        capsys, "fcc-build", "--function", "wt", "--k", "6", "--t", "1",
        "--construction", "1", "--out", str(enc_path),
    )
    code, out, _ = run(
        capsys, "fcc-decode", "--encoder", str(enc_path), "--y", "110100111", "--json"
    )
    assert code == 0
    data = json.loads(out)
    assert data["out_of_model"] is True


def test_fcc_build_locally_binary(capsys):
    code, out, _ = run(
        capsys, "fcc-build", "--function", "delta_T:k=9,T=5", "--t", "1",
        "--construction", "locally-binary",
    )
    assert code == 0
    assert "# mode: per-message" in out


# --- simulate -------------------------------------------------------------------


def test_simulate_exhaustive_clean(capsys):
    code, out, _ = run(
        capsys, "simulate", "--function", "wt", "--k", "6", "--t", "1",
        "--construction", "1",
    )
    assert code == 0
    assert "failures=0" in out


def test_simulate_random_json(capsys):
    code, out, _ = run(
        capsys, "simulate", "--function", "delta_T:k=8,T=3", "--t", "1",
        "--construction", "2", "--channel", "random", "--seed", "9",
        "--trials", "300", "--json",
    )
    assert code == 0
    data = json.loads(out)
    assert data == {"trials": 300, "failures": 0, "mode": "random", "seed": 9}


def test_simulate_overdriven_channel_fails(capsys):
    code, out, _ = run(
        capsys, "simulate", "--function", "wt", "--k", "5", "--t", "1",
        "--construction", "1", "--channel-t", "3",
    )
    assert code == 1
    assert "first failure" in out


def test_simulate_message_sample(capsys):
    code, out, _ = run(
        capsys, "simulate", "--function", "wt", "--k", "12", "--t", "1",
        "--construction", "1", "--messages", "sample:20",
    )
    assert code == 0
    assert "failures=0" in out


# --- table and oracle -------------------------------------------------------------


def test_table_binary_row(capsys):
    code, out, _ = run(capsys, "table", "--function", "binary", "--t", "3")
    assert code == 0
    assert "lower=6" in out
    assert "ecc-values=7" in out
    assert "fcc=6" in out


def test_table_wt_row(capsys):
    code, out, _ = run(capsys, "table", "--function", "wt", "--t", "2", "--k", "16")
    assert code == 0
    assert "lower=6" in out and "fcc=6" in out


def test_table_json(capsys):
    code, out, _ = run(capsys, "table", "--function", "binary", "--t", "1", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["fcc_redundancy"] == {"text": "2", "value": 2, "exact": True}
    assert data["ecc_on_function_values"] == {"text": "3", "value": 3, "exact": True}


def test_oracle_minmax(capsys):
    code, out, _ = run(capsys, "oracle", "--kind", "minmax", "--w", "3", "--l", "3")
    assert code == 0
    assert "claims hold" in out


def test_oracle_ml_match(capsys):
    code, out, _ = run(
        capsys, "oracle", "--kind", "ml", "--ml-kind", "sigmoid", "--k", "5",
        "--eps", "1", "--t", "1",
    )
    assert code == 0
    assert out.strip() == "MATCH dim=22"


def test_unknown_function_is_usage_error(capsys):
    code, _, err = run(capsys, "fcc-verify", "--function", "nosuch", "--k", "3", "--t", "1")
    assert code == 2
    assert "error" in err


def test_usage_error_exit_code_from_argparse():
    with pytest.raises(SystemExit) as exc:
        main(["bounds"])  # missing required --method
    assert exc.value.code == 2
