import math
import random

import pytest

import wntest


def gaussian(n, seed):
    rng = random.Random(seed)
    return [rng.gauss(0.0, 1.0) for _ in range(n)]


def test_run_test_returns_outcome():
    out = wntest.run_test(gaussian(500, 1), method="ggl-bp", alpha=0.05)
    for key in ("reject", "statistic", "critical_value", "selected_order", "alpha", "method"):
        assert key in out
    assert out["selected_order"] >= 1
    assert out["critical_value"] > 0


@pytest.mark.parametrize("method", wntest.METHODS)
def test_every_method_runs(method):
    out = wntest.run_test(gaussian(200, 2), method=method, alpha=0.05)
    assert isinstance(out["reject"], bool)
    assert math.isfinite(out["statistic"])


def test_decide_is_scale_invariant():
    u = wntest.generate("lacunary-ma", 200, seed=3, P=4, coef=0.8165)
    for method in wntest.METHODS:
        assert wntest.decide(u, method) == wntest.decide([-7.5 * x for x in u], method)


def test_strong_alternative_is_rejected():
    u = wntest.generate("lacunary-ma", 1000, seed=4, P=4, coef=0.8165)
    assert wntest.decide(u, "ggl-bp")


def test_autocov_lag_zero_and_one():
    u = [1.0, -2.0, 3.0, 0.5]
    rhat, tausq = wntest.autocov(u, 2)
    n = len(u)
    assert rhat[0] == pytest.approx(sum(x * x for x in u) / n)
    assert rhat[1] == pytest.approx(sum(u[t] * u[t + 1] for t in range(n - 1)) / n)
    assert len(tausq) == 3


def test_calibration_matches_reference():
    assert wntest.calibrate_lacunary("ma", 4, 200) == pytest.approx(0.8165, abs=1e-3)
    assert wntest.calibrate_lacunary("ar", 6, 200) == pytest.approx(0.6849, abs=1e-3)


def test_generate_is_reproducible():
    a = wntest.generate("garch11", 300, seed=9, index=5)
    b = wntest.generate("garch11", 300, seed=9, index=5)
    c = wntest.generate("garch11", 300, seed=9, index=6)
    assert a == b
    assert a != c


def test_data_errors_are_value_errors():
    with pytest.raises(wntest.DataError):
        wntest.run_test([1.0, 2.0, float("nan"), 3.0] * 10)
    with pytest.raises(ValueError):
        wntest.run_test([0.0] * 50)


def test_unknown_method_rejected():
    with pytest.raises(ValueError):
        wntest.run_test(gaussian(100, 5), method="portmanteau")


def test_tabulate_and_simulate():
    table = wntest.tabulate_cv("cvm", alphas=[0.05], reps=2000, seed=1, truncation=200)
    assert table["distribution"] == "cvm"
    assert [q["alpha"] for q in table["quantiles"]] == [0.05]
    reports, csv = wntest.simulate(
        'seed = 3\n[[experiment]]\nname = "tiny"\ndgp = "iid-normal"\nn = 100\nreplications = 20\nmethods = ["ggl-bp"]\n'
    )
    assert reports[0]["experiment"] == "tiny"
    assert csv.splitlines()[0].startswith("experiment,dgp,n")
