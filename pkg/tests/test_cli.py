import csv
import io
import subprocess
import sys

import pytest

from rxval import cli, suites
from rxval.incoherence import tamper_variants
from rxval.suites import SuiteResult
from rxval.value_group import SQRT2, parse_scalar


def run(args, capsys=None):
    code = cli.main(args)
    out = capsys.readouterr() if capsys else None
    return code, out


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_incoherence_default_and_verify(tmp_path, capsys):
    cert = tmp_path / "cert.txt"
    code, _ = run(["incoherence", "--out", str(cert)], capsys)
    assert code == 0 and cert.read_text().startswith("# rxval witness report v1")
    code, out = run(["verify", str(cert)], capsys)
    assert code == 0 and out.out.startswith("OK")


def test_tampered_certificate_fails(tmp_path, capsys):
    cert = tmp_path / "cert.txt"
    run(["incoherence", "--out", str(cert)], capsys)
    for key, text in tamper_variants(cert.read_text())[:12]:
        bad = write(tmp_path, "bad.txt", text)
        code, out = run(["verify", bad], capsys)
        assert code == 1, key
        assert "FAIL" in out.out


def test_incoherence_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    run(["incoherence", "--seed", "7", "--out", str(a)], capsys)
    run(["incoherence", "--seed", "7", "--out", str(b)], capsys)
    assert a.read_bytes() == b.read_bytes()
    c = tmp_path / "c.txt"
    run(["incoherence", "--seed", "8", "--out", str(c)], capsys)
    assert c.read_bytes() != a.read_bytes()


def test_config_rejected_before_output(tmp_path, capsys):
    cfg = write(tmp_path, "bad.ini", "[incoherence]\ngroup = RATIONALS\nalpha = 1/2\n")
    out = tmp_path / "never.txt"
    code, res = run(["incoherence", "--config", cfg, "--out", str(out)], capsys)
    assert code == 2 and not out.exists()
    assert "config error" in res.err


@pytest.mark.parametrize(
    "body",
    [
        "[incoherence]\ngroup = REALS\n",
        "[incoherence]\nalpha = banana\n",
        "[incoherence]\nm = 0\n",
        "[chi]\ncoeffs = t^(-1)\n",
        "[selftest]\nsuites = nope\n",
    ],
)
def test_more_config_errors(tmp_path, capsys, body):
    section = body.split("]")[0][1:]
    cfg = write(tmp_path, "c.ini", body)
    code, _ = run([section, "--config", cfg], capsys)
    assert code == 2


def test_bad_order_and_missing_certificate(capsys):
    assert run(["chi", "--order", "0"], capsys)[0] == 2
    assert run(["verify"], capsys)[0] == 2
    assert run(["verify", "/nonexistent/cert"], capsys)[0] == 2


def test_explicit_candidates(tmp_path, capsys):
    cfg = write(
        tmp_path,
        "c.ini",
        "[incoherence]\nalpha = sqrt2 - 1\nr = t^1\n"
        "candidate.1.coeffs = t^(3/5)\n"
        "candidate.2.coeffs = 0; t^(1)\ncandidate.2.tail = constant\ncandidate.2.tail.level = 2\n",
    )
    code, out = run(["incoherence", "--config", cfg], capsys)
    assert code == 0
    assert "m: 2" in out.out and "beta: 3/5 + 0*sqrt2" in out.out


def test_candidate_outside_ideal_is_config_error(tmp_path, capsys):
    cfg = write(tmp_path, "c.ini", "[incoherence]\ncandidate.1.coeffs = t^(1/2)\n")
    assert run(["incoherence", "--config", cfg], capsys)[0] == 2


def parse_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_chi_witness_csv(capsys):
    code, out = run(["chi"], capsys)
    assert code == 0
    rows = parse_csv(out.out)
    vals = [parse_scalar(r["chi_value"]) for r in rows]
    assert all(a >= b for a, b in zip(vals, vals[1:]))
    assert all(v > SQRT2 - 1 for v in vals)
    assert all(r["exact_flag"] == "true" for r in rows)


def test_chi_constant_and_monomial(tmp_path, capsys):
    cfg = write(tmp_path, "one.ini", "[chi]\ncoeffs = 1\ntail = zero\nsteps = 5\n")
    code, out = run(["chi", "--config", cfg], capsys)
    assert code == 0 and {r["chi_value"] for r in parse_csv(out.out)} == {"0 + 0*sqrt2"}
    cfg = write(tmp_path, "x.ini", "[chi]\ncoeffs = 0; 1\ntail = zero\n")
    code, out = run(["chi", "--config", cfg], capsys)
    rows = parse_csv(out.out)
    assert code == 0 and all(r["lambda"] == r["chi_value"] for r in rows)


def test_chi_inexact_rows_are_flagged(tmp_path, capsys):
    cfg = write(tmp_path, "c.ini", "[chi]\ncoeffs = t^(5)\ntail_floor = 0\nsteps = 4\n")
    code, out = run(["chi", "--config", cfg], capsys)
    rows = parse_csv(out.out)
    assert code == 0 and len(rows) == 4 and any(r["exact_flag"] == "false" for r in rows)


def test_chi_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(["chi", "--out", str(a)], capsys)
    run(["chi", "--out", str(b)], capsys)
    assert a.read_bytes() == b.read_bytes()


def test_vlambda(tmp_path, capsys):
    cfg = write(tmp_path, "v.ini", "[vlambda]\ncoeffs = t^(1); t^(1/2); 1\ntail = zero\nlambda = 1/4\n")
    code, out = run(["vlambda", "--config", cfg], capsys)
    assert code == 0
    assert "value=1/2 + 0*sqrt2 argmin=2 exact=True" in out.out


def test_purity_seeded_and_explicit(tmp_path, capsys):
    code, out = run(["purity", "--order", "6"], capsys)
    assert code == 0 and out.out.count("result: PASS") == 3
    cfg = write(tmp_path, "p.ini", "[purity]\na = t^(1/2)\nf = t^(1/2); t^(1)\ng = 1; t^(1/2)\n")
    code, out = run(["purity", "--config", cfg], capsys)
    assert code == 0 and "h: " in out.out
    cfg = write(tmp_path, "q.ini", "[purity]\na = t^(1)\nf = t^(1/2); t^(1)\ng = 1; t^(1/2)\n")
    code, out = run(["purity", "--config", cfg], capsys)
    assert code == 1 and "REJECTED" in out.out


def test_selftest_subset(tmp_path, capsys):
    cfg = write(tmp_path, "s.ini", "[selftest]\nsuites = value_group, purity\nscale = 0.1\n")
    code, out = run(["selftest", "--config", cfg], capsys)
    assert code == 0
    assert "PASS value_group" in out.out and "PASS purity" in out.out


def test_selftest_injected_fault(tmp_path, capsys, monkeypatch):
    def broken(rng, size, seed=0):
        res = SuiteResult("purity")
        res.checked = size
        res.fail(seed, 3, "injected")
        return res

    monkeypatch.setitem(suites.SUITES, "purity", (broken, 10))
    cfg = write(tmp_path, "s.ini", "[selftest]\nsuites = value_group, purity\nscale = 0.1\n")
    code, out = run(["selftest", "--config", cfg, "--seed", "9"], capsys)
    assert code == 1
    assert "FAIL purity" in out.out and "replay: suite=purity seed=9 case=3" in out.out
    assert "PASS value_group" in out.out


def test_selftest_crash_is_named(tmp_path, capsys, monkeypatch):
    def crash(rng, size, seed=0):
        raise ZeroDivisionError("boom")

    monkeypatch.setitem(suites.SUITES, "intersection", (crash, 10))
    cfg = write(tmp_path, "s.ini", "[selftest]\nsuites = intersection\n")
    code, out = run(["selftest", "--config", cfg], capsys)
    assert code == 1 and "FAIL intersection" in out.out and "boom" in out.out


def test_selftest_seed_sweep(tmp_path, capsys):
    cfg = write(tmp_path, "s.ini", "[selftest]\nscale = 0.1\n")
    verdicts = []
    for seed in range(1, 21):
        code, out = run(["selftest", "--config", cfg, "--seed", str(seed)], capsys)
        verdicts.append((code, out.out.splitlines()[-1].split(": ")[1]))
    assert set(verdicts) == {(0, "PASS")}


def test_config_round_trip(tmp_path, capsys):
    # every scalar the certificate prints parses back to the value it came from
    cert = tmp_path / "cert.txt"
    run(["incoherence", "--out", str(cert)], capsys)
    from rxval.incoherence import parse_report_fields, report_from_text

    fields = parse_report_fields(cert.read_text())
    rep = report_from_text(cert.read_text())
    assert parse_scalar(fields["alpha"]) == rep.alpha == SQRT2 - 1
    assert parse_scalar(fields["threshold"]) == rep.threshold
    assert parse_scalar(fields["gamma"]) == rep.gamma
    cfg = write(
        tmp_path,
        "rt.ini",
        f"[incoherence]\ngroup = {fields['group']}\nalpha = {fields['alpha']}\nr = {fields['r']}\n",
    )
    assert run(["verify", str(cert), "--config", cfg], capsys)[0] == 0


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "rxval.cli", "vlambda"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("lambda=1/2")
