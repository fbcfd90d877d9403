"""Stochastic dominance tests backed by the compiled sdtest core.

Each test returns a dict with test_stat, critical_value, p_value,
resampled_stats and grid. Pass quiet=False to print the report.
"""

from . import _sdtest
from ._sdtest import (
    CDF,
    DEFAULT_SEED,
    ConfigError,
    ParseError,
    SdtestError,
    bootstrap,
    paired_bootstrap,
    set_grid,
    subsampling,
)

__all__ = [
    "CDF",
    "ConfigError",
    "DEFAULT_SEED",
    "ParseError",
    "SdtestError",
    "bootstrap",
    "paired_bootstrap",
    "set_grid",
    "subsampling",
    "test_maximality",
    "test_sd",
    "test_sd_contact",
    "test_sd_NDM",
    "test_sd_SR",
]

_COMMON = dict(ngrid=100, s=1, resampling="bootstrap", nboot=200, b1=None, b2=None,
               alpha=0.05, seed=DEFAULT_SEED, threads=0)


def _run(approach, samples, quiet, options):
    result = _sdtest.run(approach, [list(map(float, x)) for x in samples], **options)
    report = result.pop("report")
    result.pop("machine_record")
    if not quiet:
        print(report, end="")
    return result


def _options(extra, kwargs):
    unknown = set(kwargs) - set(_COMMON) - set(extra)
    if unknown:
        raise TypeError(f"unexpected keyword arguments: {sorted(unknown)}")
    options = dict(_COMMON)
    options.update(extra)
    options.update(kwargs)
    return options


def test_sd(sample1, sample2, quiet=True, **kwargs):
    """Kolmogorov-Smirnov test with least-favorable or subsampling critical values."""
    return _run("lfc", [sample1, sample2], quiet, _options({}, kwargs))


def test_sd_contact(sample1, sample2, quiet=True, **kwargs):
    return _run("contact", [sample1, sample2], quiet, _options({"c": 0.75}, kwargs))


def test_sd_SR(sample1, sample2, quiet=True, **kwargs):
    return _run("sr", [sample1, sample2], quiet, _options({"a": 0.1, "eta": 1e-6}, kwargs))


def test_sd_NDM(sample1, sample2, quiet=True, **kwargs):
    extra = {"functional": "l1", "epsilon": None}
    return _run("ndm", [sample1, sample2], quiet, _options(extra, kwargs))


def test_maximality(samples, quiet=True, **kwargs):
    return _run("maximality", list(samples), quiet, _options({}, kwargs))
