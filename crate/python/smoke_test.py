"""Smoke test for the alpha_dyn Python extension.

Build and install first, e.g.

    pip install maturin
    maturin build --release -m crates/python/Cargo.toml
    pip install target/wheels/alpha_dyn-*.whl

then run `python python/smoke_test.py`.
"""

import math
from fractions import Fraction

import alpha_dyn


def main():
    h = alpha_dyn.PartitionSpec.builtin("harmonic")
    assert h.is_exact
    assert h.atom(1) == 0.5 and h.tail(2) == 0.5
    assert h.locate(0.75) == 1

    w = alpha_dyn.renewal_rational(h, 4)
    assert [Fraction(x) for x in w[1:]] == [Fraction(1, 2), Fraction(5, 12), Fraction(3, 8), Fraction(251, 720)]
    wf = alpha_dyn.renewal(h, 1000)
    assert abs(wf[4] - 251 / 720) < 1e-15

    assert alpha_dyn.expand_digits(h, "1/2") == [2]
    value, bound = alpha_dyn.theta(h, "1/2")
    assert value == 0.5 and bound == 0.0

    assert alpha_dyn.pressure(h, 1.0) == 0.0
    assert math.isinf(alpha_dyn.pressure(h, 0.5))
    d = alpha_dyn.PartitionSpec.builtin("dyadic")
    assert abs(alpha_dyn.free_energy(d, 0.25) - 0.75 * math.log(2)) < 1e-12

    b = alpha_dyn.spectrum_bounds(h)
    assert abs(b["t_minus"] - math.log(2)) < 1e-12
    assert abs(b["s_plus"] - math.log(6) / 2) < 1e-12
    assert abs(alpha_dyn.kappa_plus(h) - 2 * math.log(2) / math.log(6)) < 1e-12

    value, u = alpha_dyn.tau(h, 2.046277452856)
    assert abs(value - 1.0) < 1e-6 and abs(u - 1.0) < 1e-4

    fig2 = alpha_dyn.PartitionSpec.builtin("fig2")
    assert alpha_dyn.phase_report(fig2, "farey")["verdict"] == "transition"
    assert alpha_dyn.phase_report(fig2, "luroth")["verdict"] == "no_transition"
    assert alpha_dyn.figure_names() == ["fig1", "fig2", "fig3", "fig4", "fig5", "fig6"]

    geo = alpha_dyn.PartitionSpec.from_json('{"family": "geometric", "c": "2", "r": "1/3"}')
    assert geo.is_exact
    assert alpha_dyn.density_residual(geo, 50) == 0.0
    try:
        alpha_dyn.PartitionSpec.from_json('{"family": "nope"}')
    except ValueError as e:
        assert "family" in str(e)
    else:
        raise AssertionError("bad spec accepted")

    sim = alpha_dyn.simulate(h, 100_000, 42)
    assert sum(sim["digit_histogram"].values()) == 100_000
    assert abs(sim["digit_histogram"][1] / 100_000 - 0.5) < 3 * math.sqrt(0.25 / 100_000)
    assert sim == alpha_dyn.simulate(h, 100_000, 42)

    p, se = alpha_dyn.sum_level(h, 4, 100_000, 7)
    assert abs(p - 251 / 720) < 4 * se

    print("alpha_dyn smoke test passed")


if __name__ == "__main__":
    main()
