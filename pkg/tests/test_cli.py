import io
import json
import subprocess
import sys

import mpmath
import pytest

from rzeta.cli import REPORT_KEYS, bound_str, fixed, main
from rzeta.numerics import BOUND


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def run_json(*argv):
    code, text = run(*argv, "--json")
    assert code == 0
    return json.loads(text)


def test_zeta_two():
    rep = run_json("zeta", "--s", "2", "--digits-out", "30")
    assert rep["value_re"].startswith("1.644934066848226436472415166646")
    assert set(rep) == set(REPORT_KEYS)
    assert rep["method"] == "moment-series"
    assert float(rep["error_bound"]) < 1e-30
    assert rep["params"]["bracket"]["lower"] <= rep["value_re"] <= rep["params"]["bracket"]["upper"]


def test_zeta_base_three_same_digits():
    a = run_json("zeta", "--s", "2", "--digits-out", "30")
    b = run_json("zeta", "--s", "2", "--base", "3", "--level", "2", "--digits-out", "30")
    assert abs(mpmath.mpf(a["value_re"]) - mpmath.mpf(b["value_re"])) <= 2e-30


def test_complex_s_keys_and_values():
    rep = run_json("zeta", "--s", "2+10i", "--digits-out", "20")
    assert set(rep) == set(REPORT_KEYS)
    assert rep["params"]["bracket"] is None
    want = mpmath.zeta(mpmath.mpc(2, 10))
    assert abs(float(rep["value_re"]) - float(want.real)) < 1e-15
    assert abs(float(rep["value_im"]) - float(want.imag)) < 1e-15
    conj = run_json("zeta", "--s", "2-10i", "--digits-out", "20")
    assert conj["value_re"] == rep["value_re"]
    assert conj["value_im"].lstrip("-") == rep["value_im"].lstrip("-")
    assert conj["value_im"].startswith("-") != rep["value_im"].startswith("-")


@pytest.mark.parametrize("s", ["1", "0.5", "0.99+5i"])
def test_zeta_domain_exit(s, capsys):
    code, _ = run("zeta", "--s", s)
    assert code == 3
    assert "abscissa" in capsys.readouterr().err


def test_kempner_no_nine():
    rep = run_json("kempner", "--base", "10", "--digits", "0-8", "--s", "1", "--digits-out", "30")
    assert rep["value_re"].startswith("22.92067661926415034816365709")
    assert rep["params"]["bracket"] is not None


def test_kempner_full_set_equals_zeta():
    a = run_json("kempner", "--base", "2", "--digits", "all", "--s", "2")
    b = run_json("zeta", "--s", "2")
    assert a["value_re"] == b["value_re"]


@pytest.mark.parametrize("argv,code", [
    (("kempner", "--base", "10", "--digits", "0", "--s", "1"), 2),
    (("kempner", "--base", "10", "--digits", "0-10", "--s", "2"), 2),
    (("kempner", "--base", "10", "--digits", "1,3", "--s", "0.3"), 3),
    (("kempner", "--base", "4", "--digits", "0,1", "--s", "0.5"), 3),
    (("kempner", "--base", "10", "--digits", "all", "--s", "2", "--level", "1"), 4),
    (("zeta", "--s", "2", "--digits-out", "400", "--max-terms", "10"), 4),
    (("zeta", "--s", "2e3"), 2),
    (("zeta", "--s", "2", "--level", "0"), 2),
])
def test_exit_codes(argv, code):
    assert run(*argv)[0] == code


def test_argparse_usage_exit():
    with pytest.raises(SystemExit) as exc:
        main(["zeta"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 2


def test_deterministic_output():
    a = run_json("kempner", "--base", "10", "--digits", "1,3,7", "--s", "1.2+3i", "--digits-out", "30")
    b = run_json("kempner", "--base", "10", "--digits", "1,3,7", "--s", "1.2+3i", "--digits-out", "30",
                 "--threads", "3")
    assert (a["value_re"], a["value_im"]) == (b["value_re"], b["value_im"])


def test_env_threads(monkeypatch):
    monkeypatch.setenv("RZETA_THREADS", "4")
    a = run_json("zeta", "--s", "3")
    monkeypatch.delenv("RZETA_THREADS")
    assert a["value_re"] == run_json("zeta", "--s", "3")["value_re"]


def test_text_output_aligned():
    code, text = run("zeta", "--s", "2", "--digits-out", "10")
    assert code == 0
    lines = text.splitlines()
    assert [ln.split()[0] for ln in lines] == list(REPORT_KEYS)
    assert len({ln.index(ln.split()[1]) for ln in lines}) == 1


def test_moments_dump():
    rows = run_json("moments", "--s", "2", "--m", "3")
    assert [r["m"] for r in rows] == [0, 1, 2, 3]
    assert float(rows[0]["u_star_re"]) == 2.0
    assert float(rows[1]["c_re"]) == 0.5


def test_check_families():
    code, text = run("check", "--family", "log2", "--family", "moments", "--family", "bernoulli")
    assert code == 0 and "3/3 passed" in text
    res = run_json("check", "--family", "digitset")
    assert all(r["ok"] for r in res)


def test_check_bounds_single_point():
    code, text = run("check", "--family", "bounds", "--sigma", "2", "--t", "10")
    assert code == 0
    assert "domination" in text and "sandwich" in text


def test_check_failure_exit(monkeypatch):
    from rzeta import checks

    def broken(**_):
        yield checks.CheckResult("fake", "always fails", False, "(b=2, A=0-1, s=2, m=7)")

    monkeypatch.setitem(checks.FAMILIES, "log2", broken)
    code, text = run("check", "--family", "log2")
    assert code == 1 and "m=7" in text


def test_mgf_check():
    code, text = run("mgf-check")
    assert code == 0 and "4/4 passed" in text


def test_bench():
    rep = run_json("bench", "--t-grid", "0,20,50", "--m-grid", "40,80")
    terms = [r["terms_needed"] for r in rep["t_rows"]]
    assert terms == sorted(set(terms))
    assert abs(rep["t_rows"][0]["terms_needed"] - rep["t_rows"][0]["planned"]) <= 2
    assert [r["M"] for r in rep["m_rows"]] == [40, 80]


def test_bad_bench_grid():
    assert run("bench", "--t-grid", "a,b")[0] == 2


def test_fixed_and_bound_formatting():
    mp = mpmath.MPContext()
    mp.dps = 40
    assert fixed(mp.mpf("1.25"), 1, mp) in ("1.2", "1.3")
    assert fixed(mp.mpf("-0.000123"), 5, mp) == "-0.00012"
    assert fixed(mp.mpf(3), 0, mp) == "3"
    for x in ("1.234e-50", "9.999e-3", "1e-20", "4.5"):
        s = bound_str(BOUND.mpf(x))
        assert float(s) >= float(x)
        assert float(s) <= float(x) * 1.011
        assert len(s.split("e")[0]) == 4


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "rzeta", "zeta", "--s", "4", "--digits-out", "15"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "1.082323233711138" in proc.stdout
