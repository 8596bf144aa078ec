import csv
import io
import json
import random
import subprocess
import sys

import pytest

from qconvmul.cli import DEMO_SEED, main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_multiply_conv_exact():
    code, out, _ = run("multiply", "--a", "8616", "--b", "4532", "--algo", "conv", "--mode", "exact")
    assert code == 0
    d = json.loads(out)
    assert d["product"] == "39047712"
    assert d["success_probability"] == pytest.approx(0.06875, abs=1e-12)
    assert d["schema"] == "qconvmul.multiply/1"


def test_multiply_zero_short_circuit():
    code, out, err = run("multiply", "--a", "0", "--b", "7", "--algo", "conv")
    assert code == 0 and json.loads(out)["product"] == "0"
    assert "notice" in err


@pytest.mark.parametrize("algo", ["karatsuba", "grade", "classical", "conv-amplified"])
def test_multiply_other_algorithms(algo):
    code, out, _ = run("multiply", "--a", "13", "--b", "11", "--algo", algo)
    assert code == 0 and json.loads(out)["product"] == "143"


def test_multiply_sampled_and_analytic():
    code, out, _ = run("multiply", "--a", "8616", "--b", "4532", "--mode", "sampled",
                       "--shots", "200000", "--seed", "5")
    assert code == 0 and json.loads(out)["product"] == "39047712"
    code, out, _ = run("multiply", "--a", hex(2**200 + 7), "--b", "99", "--mode", "analytic")
    assert code == 0 and json.loads(out)["product"] == str((2**200 + 7) * 99)


def test_multiply_csv():
    code, out, _ = run("multiply", "--a", "3", "--b", "3", "--format", "csv")
    rows = dict(csv.reader(io.StringIO(out)))
    assert code == 0 and rows["product"] == "9"


def test_hex_operands():
    code, out, _ = run("multiply", "--a", "0x21A8", "--b", "0x11B4", "--algo", "classical")
    assert json.loads(out)["product"] == "39047712"


def _error_line(err):
    lines = err.strip().splitlines()
    assert len(lines) == 1 and lines[0].startswith("qconvmul: error[")
    return lines[0]


@pytest.mark.parametrize("argv,code", [
    (["multiply", "--a", "abc", "--b", "1"], 2),
    (["multiply", "--a", "-3", "--b", "1"], 2),
    (["multiply", "--a", "3"], 2),
    (["multiply", "--a", "3", "--b", "1", "--algo", "bogus"], 2),
    (["multiply", "--a", "300", "--b", "1", "--algo", "grade", "--width", "4"], 2),
    (["multiply", "--a", "3", "--b", "1", "--mode", "sampled", "--shots", "0"], 2),
    (["multiply", "--a", str(2**300), "--b", "1", "--algo", "karatsuba"], 4),
    (["--memory-cap", "256", "multiply", "--a", "8616", "--b", "4532"], 4),
    (["multiply", "--a", "8616", "--b", "4532", "--mode", "sampled", "--shots", "1", "--seed", "0"], 3),
    (["resources", "--n", "4,x"], 2),
    (["amplify", "--a", "0", "--b", "3"], 2),
    (["demo", "--shots", "10", "--output-dir", "{tmp}"], 3),
    ([], 2),
])
def test_error_paths(argv, code, tmp_path):
    argv = [a.replace("{tmp}", str(tmp_path)) for a in argv]
    got, _, err = run(*argv)
    assert got == code
    line = _error_line(err)
    tag = {2: "usage", 3: "numeric", 4: "resource"}[code]
    assert f"error[{tag}]" in line


def test_memory_cap_message_mentions_analytic():
    _, _, err = run("--memory-cap", "256", "multiply", "--a", "8616", "--b", "4532")
    assert "--mode analytic" in err


def test_resources():
    code, out, _ = run("resources", "--n", "4,8,16")
    assert code == 0 and len(out.strip().splitlines()) >= 10
    code, out, _ = run("resources", "--n", "4", "--json")
    row = json.loads(out)["rows"][0]
    assert (row["algorithm"], row["depth"], row["cost"], row["ancillas"]) == ("grade-school", 70, 140, 26)
    code, out, _ = run("resources")
    assert code == 0 and len(out.strip().splitlines()) == 1


def test_amplify():
    code, out, _ = run("amplify", "--a", "8616", "--b", "4532", "--max-iterations", "4", "--format", "json")
    d = json.loads(out)
    assert d["plan"]["n_opt"] == 3
    assert d["rows"][3]["measured"] == pytest.approx(0.920, abs=1e-3)
    assert d["rows"][0]["measured"] == pytest.approx(0.06875, abs=1e-12)
    code, out, _ = run("amplify", "--a", "1", "--b", "1", "--max-iterations", "2")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [float(r["measured"]) for r in rows] == pytest.approx([0.5] * 3, abs=1e-12)


def test_determinism(tmp_path):
    args = ["multiply", "--a", "123456789", "--b", "987654321", "--mode", "sampled", "--shots", "50000", "--seed", "11"]
    assert run(*args)[1] == run(*args)[1]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run("amplify", "--a", "77", "--b", "5", "--output", str(a))
    run("amplify", "--a", "77", "--b", "5", "--output", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_differential_fuzz():
    rng = random.Random(2718)
    for _ in range(1000):
        a = rng.getrandbits(rng.randint(1, 64)) or 1
        b = rng.getrandbits(rng.randint(1, 64)) or 1
        conv = json.loads(run("multiply", "--a", str(a), "--b", str(b), "--algo", "conv", "--mode", "exact")[1])
        ref = json.loads(run("multiply", "--a", str(a), "--b", str(b), "--algo", "classical")[1])
        assert conv["product"] == ref["product"] == str(a * b)


def test_demo(tmp_path):
    code, out, _ = run("demo", "--output-dir", str(tmp_path))
    assert code == 0
    summary = json.loads(out)
    assert summary["seed"] == DEMO_SEED
    assert 0.06799 <= summary["kept_fraction"] <= 0.06951
    assert summary["product"] == "39047712"
    support = {int(b, 2) for b in json.loads((tmp_path / "register_a_histogram.json").read_text())}
    assert support <= {5, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20, 21, 25}


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qconvmul", "multiply", "--a", "6", "--b", "7",
                           "--algo", "classical"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["product"] == "42"
