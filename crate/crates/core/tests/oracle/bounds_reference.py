"""Regenerates the frozen reference values in tests/bounds_reference.rs.

Evaluates every bound formula with 50-digit arithmetic (mpmath), independently
of the Rust implementation. Run: python3 bounds_reference.py
"""
from mpmath import mp, mpf, log

mp.dps = 50


def log2(x):
    return log(x, 2)


def upper(d, delta):
    return d * log2(mpf(d) / delta)


def cheng(d, delta):
    return 4 * upper(d, delta)


def lower(d, delta):
    return d * log2(1 / (2 * d * delta)) - 1


def lower_small_delta(n, d):
    return d * log2(mpf(n) / d)


def lower_large_n(n, d, delta):
    inv = log2(1 / delta)
    return (1 - (log2(d) + inv + 1) / (log2(n) + inv)) * d * log2(1 / (2 * delta))


def lower_expected(d, delta):
    L = log2(1 / (d * delta))
    tau = 1 / (d * L)
    eta = 1 / L
    return (1 - mpf(1) / d) * (1 - eta) * (d * log2(tau / (d * delta)) - log2(1 / (1 - eta)))


cases = [
    ("upper_leading_term(10, 0.001)", upper(10, mpf("0.001"))),
    ("upper_leading_term(50, 0.01)", upper(50, mpf("0.01"))),
    ("cheng_upper(10, 0.001)", cheng(10, mpf("0.001"))),
    ("cheng_upper(50, 0.01)", cheng(50, mpf("0.01"))),
    ("lower_bound(10, 0.001)", lower(10, mpf("0.001"))),
    ("lower_bound_small_delta(1_000_000, 10)", lower_small_delta(10**6, 10)),
    ("lower_bound_large_n(1_000_000, 10, 0.01)", lower_large_n(10**6, 10, mpf("0.01"))),
    ("lower_bound_expected(10, 1e-6)", lower_expected(10, mpf("1e-6"))),
    ("lower_bound_expected(10, 1e-12)", lower_expected(10, mpf("1e-12"))),
    ("lower_bound_expected(10, 1e-15)", lower_expected(10, mpf("1e-15"))),
    ("lower_bound_expected(10, 1e-300)", lower_expected(10, mpf("1e-300"))),
]
for name, value in cases:
    print(f"{name} = {mp.nstr(value, 20)}")
for e in [12, 15, 300]:
    delta = mpf(10) ** -e
    print(f"ratio 1e-{e} = {mp.nstr(lower_expected(10, delta) / (10 * log2(1 / delta)), 20)}")
