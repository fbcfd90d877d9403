import os
import subprocess

import numpy as np
import pytest

import sdtest

CLI = os.environ.get("SDTEST_CLI")


def _pair(seed, n=120, shift=0.2):
    g = np.random.default_rng(seed)
    return g.normal(0.0, 1.0, n), g.normal(shift, 1.3, n)


def _cli_record(tmp_path, a, b, args):
    data = tmp_path / "data.csv"
    with open(data, "w") as f:
        f.write("sample1,sample2\n")
        for x, y in zip(a, b):
            f.write(f"{float(x)!r},{float(y)!r}\n")
    out = tmp_path / "record.txt"
    cmd = [CLI, "--input", str(data), "--quiet", "--machine-out", str(out), *args]
    subprocess.run(cmd, check=True)
    record = {}
    for line in out.read_text().splitlines():
        key, _, value = line.partition("=")
        record[key] = value
    return record


def test_result_keys():
    a, b = _pair(1)
    res = sdtest.test_sd(a, b, nboot=50)
    assert set(res) >= {"test_stat", "critical_value", "p_value", "resampled_stats", "grid"}
    assert len(res["resampled_stats"]) == 50
    assert len(res["grid"]) == 100
    assert 0.0 <= res["p_value"] <= 1.0


WRAPPED = [
    ("lfc", sdtest.test_sd, {}),
    ("contact", sdtest.test_sd_contact, {}),
    ("sr", sdtest.test_sd_SR, {}),
    ("ndm", sdtest.test_sd_NDM, {"functional": "ks"}),
]


@pytest.mark.skipif(CLI is None, reason="CLI path not provided")
@pytest.mark.parametrize("case", range(20))
def test_bit_identical_to_cli(tmp_path, case):
    approach, fn, extra = WRAPPED[case % 4]
    a, b = _pair(100 + case, n=60 + 7 * case)
    s = 1 + case % 3
    seed = 1000 + case
    res = fn(a, b, s=s, nboot=40, ngrid=50, seed=seed, **extra)
    args = ["--approach", approach, "--s", str(s), "--nboot", "40", "--ngrid", "50",
            "--seed", str(seed)]
    if "functional" in extra:
        args += ["--functional", extra["functional"]]
    rec = _cli_record(tmp_path, a, b, args)
    assert float(rec["test_stat"]) == res["test_stat"]
    assert float(rec["critical_value"]) == res["critical_value"]
    assert float(rec["p_value"]) == res["p_value"]
    assert [float(v) for v in rec["resampled_stats"].split(",")] == res["resampled_stats"]


def test_quiet_suppresses_output(capfd):
    a, b = _pair(2)
    sdtest.test_sd(a, b, nboot=20, quiet=True)
    sdtest.test_sd_contact(a, b, nboot=20)
    out, err = capfd.readouterr()
    assert out == "" and err == ""
    sdtest.test_sd(a, b, nboot=20, quiet=False)
    out, _ = capfd.readouterr()
    assert "* H0 : sample1 first order SD sample2" in out
    assert "*** Test Result ***" in out


def test_errors_are_translated():
    a, b = _pair(3)
    with pytest.raises(sdtest.ConfigError, match="jackknife"):
        sdtest.test_sd(a, b, resampling="jackknife")
    with pytest.raises(sdtest.SdtestError, match="MissingSubsampleSize"):
        sdtest.test_sd(a, b, resampling="subsampling")
    with pytest.raises(TypeError):
        sdtest.test_sd(a, b, not_an_option=1)


def test_helpers():
    assert sdtest.set_grid([[0, 1], [2, 3]], 5) == [0.0, 0.75, 1.5, 2.25, 3.0]
    assert sdtest.CDF([1, 2, 3], [0, 3], 3)[1] == pytest.approx(5 / 6)
    idx = sdtest.bootstrap(10, 3, seed=4)
    assert len(idx) == 3 and all(0 <= i < 10 for row in idx for i in row)
    assert idx == sdtest.bootstrap(10, 3, seed=4)
    assert sdtest.paired_bootstrap(10, 10, 3, seed=4) == idx
    assert sdtest.subsampling(5, 3) == [(0, 3), (1, 4), (2, 5)]


def test_subsampling_and_maximality():
    a, b = _pair(5, n=150)
    res = sdtest.test_sd(a, b, resampling="subsampling", b1=40, b2=40)
    assert len(res["resampled_stats"]) == 111
    g = np.random.default_rng(6)
    three = [g.normal(m, s, 200) for m, s in [(0, 1), (0.5, 1.5), (1, 2)]]
    out = sdtest.test_maximality(three, nboot=30)
    assert len(out["resampled_stats"]) == 30
