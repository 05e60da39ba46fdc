import csv
import io
import json

import pytest

from wishart_tw.cli import main, warn_theory_gap
from wishart_tw.ensemble import McReport
from wishart_tw.scaling import second_order_constants


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_quantile(capsys):
    code, out, _ = run(capsys, "quantile", "--beta", "1", "--q", "0.99")
    assert code == 0
    assert float(rows(out)[0]["s"]) == pytest.approx(2.0234, abs=5e-3)


def test_pvalue(capsys):
    pair = second_order_constants(100, 100)
    lam = pair.center + pair.scale * 2.0234
    code, out, err = run(capsys, "pvalue", "--n", "100", "--p", "100", "--lambda", repr(lam))
    assert code == 0
    assert float(rows(out)[0]["pvalue"]) == pytest.approx(0.01, abs=3e-3)
    assert "n equals p" in err


def test_table1_row(capsys):
    code, out, _ = run(capsys, "table1", "--rows", "2x2", "--reps", "1000", "--seed", "7")
    assert code == 0
    row = rows(out)[0]
    probs = [float(v) for k, v in row.items() if k != "row"]
    assert len(probs) == 9
    assert all(a <= b for a, b in zip(probs, probs[1:]))


def test_table2_json(capsys):
    code, out, _ = run(capsys, "table2", "--rows", "40x10", "--reps", "500", "--format", "json")
    assert code == 0
    reps = [McReport.from_json(json.dumps(d)) for d in json.loads(out)]
    assert reps[0].variant.value == "small-log"


def test_simulate_round_trip(capsys):
    code, out, _ = run(capsys, "simulate", "--n", "12", "--p", "4", "--reps", "300", "--s", "-1", "0", "1")
    assert code == 0
    rep = McReport.from_csv(out)
    assert rep.to_csv() == out


def test_simulate_deterministic(capsys):
    args = ("simulate", "--n", "12", "--p", "4", "--reps", "300", "--s", "0", "--seed", "99")
    assert run(capsys, *args)[1] == run(capsys, *args)[1]


def test_scale_json(capsys):
    code, out, _ = run(capsys, "scale", "--n", "4", "--p", "2", "--format", "json")
    assert code == 0
    assert json.loads(out)["center"] == pytest.approx(second_order_constants(4, 2).center)


def test_cdf_reflected(capsys):
    code, out, _ = run(capsys, "cdf", "--reflected", "--s", "3.8954")
    assert float(rows(out)[0]["cdf"]) == pytest.approx(0.99, abs=2e-3)


def test_asym_check_columns(capsys):
    code, out, _ = run(capsys, "asym-check", "--ladder", "10", "20", "--points", "41", "--scaled")
    assert code == 0
    header = out.splitlines()[0]
    assert header == "N,n,sup_psi,sup_dpsi,sup_phi,sup_dphi,scaled_by_N23"
    assert all(r["scaled_by_N23"] == "1" for r in rows(out))


def test_kernel_check(capsys):
    code, out, _ = run(capsys, "kernel-check", "--n", "13", "--N", "6")
    assert code == 0
    assert max(float(r["abs_diff"]) for r in rows(out)) < 1e-5


def test_relerr(capsys):
    code, out, _ = run(capsys, "relerr", "--n", "10", "--p", "2", "--reps", "5000", "--alpha", "0.95")
    assert code == 0
    assert abs(float(rows(out)[0]["rel_err"])) < 0.15


def test_out_file(capsys, tmp_path):
    target = tmp_path / "q.csv"
    code, out, _ = run(capsys, "quantile", "--q", "0.5", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text().startswith("q,s")


@pytest.mark.parametrize(
    "argv",
    [
        ("quantile", "--q", "1.5"),
        ("scale", "--n", "0", "--p", "3"),
        ("pvalue", "--n", "5", "--p", "5", "--lambda", "1", "--variant", "small-log"),
        ("simulate", "--n", "5", "--p", "3", "--reps", "10", "--s", "0", "--variant", "small-log", "--which", "largest"),
    ],
)
def test_domain_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "error" in err


@pytest.mark.parametrize("argv", [("bogus",), ("quantile", "--q", "0.5", "--unknown"), ("quantile",)])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "usage" in err


def test_numeric_failure_exit_3(capsys, monkeypatch):
    from wishart_tw import twlimit
    from wishart_tw.errors import NumericError

    def boom(*a, **k):
        raise NumericError("forced")

    monkeypatch.setattr(twlimit, "tw_quantile", boom)
    code, _, err = run(capsys, "quantile", "--q", "0.5")
    assert code == 3 and "forced" in err


@pytest.mark.parametrize("n,p,warned", [(5, 5, True), (8, 2, False), (20, 5, True)])
def test_warn_theory_gap(n, p, warned):
    assert (warn_theory_gap(n, p) is not None) == warned
