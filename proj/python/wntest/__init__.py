"""Adaptive weak white noise tests."""

from ._wntest import (
    DataError,
    DegenerateError,
    autocov,
    calibrate_lacunary,
    gamma1,
    generate,
    generator_id,
    run_test,
    simulate,
    tabulate_cv,
)

METHODS = ("ggl-bp", "ggl-par", "el", "imse", "cvm", "max")


def decide(data, method="ggl-bp", alpha=0.05, **options):
    """Shorthand for run_test with the outcome's decision only."""
    return run_test(list(data), method=method, alpha=alpha, **options)["reject"]


__all__ = [
    "DataError",
    "DegenerateError",
    "METHODS",
    "autocov",
    "calibrate_lacunary",
    "decide",
    "gamma1",
    "generate",
    "generator_id",
    "run_test",
    "simulate",
    "tabulate_cv",
]
