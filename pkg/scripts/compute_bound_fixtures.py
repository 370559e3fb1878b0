#!/usr/bin/env python3
"""Regenerate the high-precision fixtures frozen into tests/test_bounds.py.

Evaluates every closed-form schedule/bound at 50 decimal digits with mpmath,
independently of the float implementation in ordersearch.bounds. Run it and
paste the output into the FIXTURES block of the test when a formula changes.
"""

import mpmath as mp

mp.mp.dps = 50

PHI = (1 + mp.sqrt(5)) / 2
E = mp.e


def schedule_constant(R, M):
    return E * R * M * mp.log(PHI) / (2 * PHI)


def grm_iterations(R, M, delta):
    c = schedule_constant(R, M)
    return mp.log(c / (E * delta)) / mp.log(PHI)


def grm_value_error(R, M, delta):
    c = schedule_constant(R, M)
    return PHI * delta * mp.log(c / delta) / mp.log(PHI)


def grm_error_bound(R, M, delta, n):
    return R * M / (2 * PHI**n) + n * PHI * delta


def arg_accuracy(epsilon, mu):
    return mp.sqrt(2 * epsilon / mu)


def inner_accuracy(epsilon, L, R):
    return epsilon / (2 * (2 + mp.sqrt(10)) * L * R)


def outer_iterations(M, R, epsilon):
    return mp.log(M * R * mp.sqrt(2) / epsilon, 2)


def feasibility_threshold(R, M, L, mu, delta):
    """Smallest epsilon the full pipeline can honour for this noise level."""
    return arg_accuracy(grm_value_error(R, M, delta), mu) * 2 * (2 + mp.sqrt(10)) * L * R


def show(label, value, digits=22):
    print(f"{label} = {mp.nstr(value, digits)}")


if __name__ == "__main__":
    show("phi", PHI)
    show("ln(phi)", mp.log(PHI))
    show("schedule_constant(1, 1)", schedule_constant(1, 1))
    show("schedule_constant(2, 1)", schedule_constant(2, 1))
    show("grm_iterations(1, 1, 1e-6) [raw]", grm_iterations(1, 1, mp.mpf("1e-6")))
    show("grm_value_error(1, 1, 1e-6)", grm_value_error(1, 1, mp.mpf("1e-6")))
    show("grm_value_error(1, 1, 1e-3)", grm_value_error(1, 1, mp.mpf("1e-3")))
    show("grm_error_bound(1, 1, 0, 10)", grm_error_bound(1, 1, 0, 10))
    show("grm_error_bound(1, 1, 1e-3, 10)", grm_error_bound(1, 1, mp.mpf("1e-3"), 10))
    show("arg_accuracy(0.02, 1)", arg_accuracy(mp.mpf("0.02"), 1))
    show("arg_accuracy(0.02, 4)", arg_accuracy(mp.mpf("0.02"), 4))
    show("inner_accuracy(0.01, 1, 1)", inner_accuracy(mp.mpf("0.01"), 1, 1))
    show("inner_accuracy(0.01, 2, 1)", inner_accuracy(mp.mpf("0.01"), 2, 1))
    show("outer_iterations(1, 1, 0.01) [raw]", outer_iterations(1, 1, mp.mpf("0.01")))
    show("outer_iterations(2, 1, 0.01) [raw]", outer_iterations(2, 1, mp.mpf("0.01")))
    show(
        "arg_accuracy(grm_value_error(1,1,1e-6), 1)",
        arg_accuracy(grm_value_error(1, 1, mp.mpf("1e-6")), 1),
    )
    show(
        "feasibility_threshold(1, 1, 1, 1, 1e-6)",
        feasibility_threshold(1, 1, 1, 1, mp.mpf("1e-6")),
    )
    show("1/(2*phi**10)", 1 / (2 * PHI**10))
    show("1/(2*phi**30)", 1 / (2 * PHI**30))
    show("phi**-5", PHI**-5)
    show("1 - 1/phi", 1 - 1 / PHI)
    show("1/phi", 1 / PHI)
    show("2*(1 - 1/phi)", 2 * (1 - 1 / PHI))
    show("2/phi", 2 / PHI)
