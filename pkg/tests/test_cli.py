import json
import subprocess
import sys

import pytest

from qmc_american import Method, OptionKind
from qmc_american.cli import main, parse_args
from qmc_american.report import read_results


def test_parse_defaults():
    cfg = parse_args(["price"])
    assert cfg.command == "price" and cfg.method is Method.AMERICAN_UB
    assert cfg.spec.kind is OptionKind.CALL and cfg.m == 10 and cfg.seed == 42


def test_price_closed_form_smoke(capsys):
    argv = "price --spot 100 --strike 100 --rate 0.05 --vol 0.2 --maturity 1 --method closed-form".split()
    assert main(argv) == 0
    out = capsys.readouterr().out
    assert "closed-form" in out and "10.450584" in out


@pytest.mark.parametrize(
    "argv,flag,fragment",
    [
        (["price", "--vol", "-0.1"], "--vol", "v >= 0"),
        (["price", "--spot", "0"], "--spot", "S0 > 0"),
        (["price", "--paths", "1"], "--paths", "range 2"),
        (["price", "--threads", "0"], "--threads", "range 1"),
        (["price", "--seed", str(2**64)], "--seed", "range 0.."),
        (["converge", "--m-list", "1,0"], "--m-list", "range 1"),
        (["price", "--rate", "nan"], "--rate", "finite"),
    ],
)
def test_invalid_flags_named(capsys, argv, flag, fragment):
    assert main(argv) != 0
    err = capsys.readouterr().err
    assert flag in err and fragment in err


def test_unknown_flag_rejected(capsys):
    assert main(["price", "--bogus"]) != 0
    assert "--bogus" in capsys.readouterr().err


def test_help_lists_defaults(capsys):
    assert main(["price", "--help"]) == 0
    out = capsys.readouterr().out
    assert "default 262144" in out and "--method" in out


def test_converge_six_rows(tmp_path):
    out = tmp_path / "curve.csv"
    argv = f"converge --m-list 1,2,5,10,20,50 --paths 262144 --seed 42 --format csv --out {out}".split()
    assert main(argv) == 0
    rows = read_results(out)
    assert [r.m for r in rows] == [1, 2, 5, 10, 20, 50]
    assert len(out.read_text().splitlines()) == 7


def test_bench_json(tmp_path):
    out = tmp_path / "bench.json"
    argv = f"bench --path-list 2000,4000 --thread-list 2 --format json --out {out}".split()
    assert main(argv) == 0
    data = json.loads(out.read_text())
    assert len(data) == 4 and {d["lanes"] for d in data} == {1, 2}


def test_american_put_exits_nonzero(capsys):
    assert main(["price", "--kind", "put", "--paths", "100"]) == 1
    assert "calls only" in capsys.readouterr().err


def test_verify_passes(capsys):
    assert main(["verify", "--paths", "16384"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and "checks passed" in out


def test_bench_and_price_agree(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(f"price --method european-mc --paths 5000 --seed 9 --format csv --out {a}".split()) == 0
    assert main(f"bench --method european-mc --path-list 5000 --thread-list 1 --seed 9 --format csv --out {b}".split()) == 0
    assert read_results(a)[0].price == read_results(b)[0].price


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qmc_american", "price", "--method", "closed-form", "--format", "csv"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0].startswith("method,n_paths")
