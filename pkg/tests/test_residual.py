import math
from fractions import Fraction

import pytest

from corrqec import (
    DecoherencePair,
    ResidualQuery,
    ScalingScenario,
    asymptotic_residual,
    beta,
    code_avg_residual,
    gamma_budget,
    geometric_grid,
    independent_residual,
    scalability_verdict,
)
from corrqec.errors import DomainError

# Output of scripts/asymptote_region_oracle.py (piecewise Gauss-Legendre mass
# of the failure region), q = 0.05, gamma0 = 0.01.
REGION_ORACLE = {
    0.01: 0.00142646816069975,
    0.005: 1.0547176885527378e-05,
    0.0025: 7.507505879470959e-10,
    0.00125: 5.125926335277108e-18,
}

FIG_PAIR = DecoherencePair(0.01, 0.01)


def test_query_validation():
    pair = DecoherencePair(0.01, 0.0)
    with pytest.raises(DomainError):
        ResidualQuery(10, 10, pair)
    with pytest.raises(DomainError):
        ResidualQuery(10, -1, pair)
    assert ResidualQuery(20, 0, pair).q == pytest.approx(0.05)


def test_independent_zero_gamma_is_zero():
    assert independent_residual(100, 3, 0.0) == 0.0


def test_independent_matches_exact_binomial_sum():
    # explicit tail sum in rational arithmetic on the binary-rational p_o
    n, t, g0 = 20, 1, 0.01
    p = Fraction(1) - Fraction(math.exp(-g0))
    p = p / 2
    tail = sum(
        Fraction(math.comb(n, w)) * p**w * (1 - p) ** (n - w)
        for w in range(t + 1, n + 1)
    )
    assert independent_residual(n, t, g0) == pytest.approx(float(tail), rel=1e-14)


def test_independent_log_linear_decay():
    # Chernoff regime p_o < q: halving points fall on a line in log space
    g0 = 0.01
    ns = [200, 400, 800, 1600]
    logs = [math.log(independent_residual(n, round(0.05 * n) - 1, g0)) for n in ns]
    slopes = [(b - a) / (m - k) for a, b, k, m in zip(logs, logs[1:], ns, ns[1:])]
    mean = sum(slopes) / len(slopes)
    assert max(abs(s / mean - 1.0) for s in slopes) < 0.02


def test_code_avg_zero_pair():
    pair = DecoherencePair(0.0, 0.0)
    for t in (0, 3, 9):
        assert code_avg_residual(ResidualQuery(10, t, pair)) == 0.0


def test_code_avg_single_term_edge():
    pair = DecoherencePair(0.05, 0.01)
    val = code_avg_residual(ResidualQuery(10, 9, pair))
    p_max = (1.0 + math.exp(-(pair.gamma0 - pair.gammaR))) / 2.0
    assert 0.0 <= val <= p_max**10


def test_code_avg_equals_beta_sum():
    n, t = 10, 2
    pair = DecoherencePair(0.01, 0.005)
    direct = sum(math.comb(n, w) * beta(n, w, pair) for w in range(t + 1, n + 1))
    assert abs(code_avg_residual(ResidualQuery(n, t, pair)) - direct) < 1e-12


def test_code_avg_gamma_r_zero_same_code_path():
    pair = DecoherencePair(0.01, 0.0)
    for n, t in [(200, 9), (1600, 79)]:
        assert code_avg_residual(ResidualQuery(n, t, pair)) == independent_residual(
            n, t, 0.01
        )


@pytest.mark.parametrize("n,t", [(100, 4), (1000, 49)])
def test_code_avg_tiny_gamma_r_continuity(n, t):
    narrow = code_avg_residual(ResidualQuery(n, t, DecoherencePair(0.01, 1e-12)))
    indep = independent_residual(n, t, 0.01)
    assert narrow == pytest.approx(indep, rel=1e-6)


def test_code_avg_ordering_in_gamma_r():
    n, t = 1000, 49
    vals = [
        code_avg_residual(ResidualQuery(n, t, DecoherencePair(0.01, gr)))
        for gr in (0.0, 0.00125, 0.0025, 0.005, 0.01)
    ]
    for a, b in zip(vals, vals[1:]):
        assert b >= a * (1.0 - 1e-9)


def test_code_avg_monotone_tail_in_t():
    pair = DecoherencePair(0.01, 0.005)
    vals = [code_avg_residual(ResidualQuery(200, t, pair)) for t in (5, 7, 9, 11)]
    for a, b in zip(vals, vals[1:]):
        assert b <= a


def test_code_avg_deviation_from_asymptote_shrinks():
    asym = asymptotic_residual(0.05, FIG_PAIR).exact
    devs = []
    for n in (250, 500, 1000, 2000, 4000):
        t = round(0.05 * n) - 1
        devs.append(abs(code_avg_residual(ResidualQuery(n, t, FIG_PAIR)) - asym))
    for a, b in zip(devs, devs[1:]):
        assert b < a


def test_asymptote_matches_region_oracle():
    for gr, expect in REGION_ORACLE.items():
        got = asymptotic_residual(0.05, DecoherencePair(0.01, gr)).exact
        assert got == pytest.approx(expect, rel=1e-12)


def test_asymptote_empty_region():
    # max p_x = (1 + exp(-(g0 - gr))) / 2 = 0.99875 here, so q = 0.999
    # puts the threshold above every achievable flip probability
    res = asymptotic_residual(0.999, DecoherencePair(0.01, 0.005))
    assert res.exact == 0.0


def test_asymptote_full_region():
    # min p_x = (1 - exp(-0.01)) / 2 ~ 0.004975; any smaller q fails everywhere
    res = asymptotic_residual(0.004, DecoherencePair(0.06, 0.05))
    assert res.exact == 1.0


def test_asymptote_gamma_r_zero_indicator():
    pair = DecoherencePair(0.01, 0.0)
    above = asymptotic_residual(0.001, pair)
    below = asymptotic_residual(0.05, pair)
    assert above.exact == above.erfc_approx == 1.0
    assert below.exact == below.erfc_approx == 0.0


def test_asymptote_narrow_band_point():
    res = asymptotic_residual(0.05, DecoherencePair(0.01, 0.00125))
    assert res.erfc_approx == pytest.approx(math.erfc(math.sqrt(40.0)), rel=1e-13)
    assert res.exact == pytest.approx(REGION_ORACLE[0.00125], rel=1e-12)
    # the erfc form ignores gamma0, which costs an order of magnitude here
    ratio = res.exact / res.erfc_approx
    assert 13.0 < ratio < 14.5


def test_budget_closed_form_consistency():
    bud = gamma_budget(1000, 0.05, 1.0, 1.0)
    assert not bud.unconstrained
    assert bud.gamma_max == pytest.approx(
        0.05 / (bud.c0 + math.log(1000)), rel=1e-12
    )


def test_budget_unconstrained_sentinel():
    bud = gamma_budget(100, 0.05, 0.0, 1.0)
    assert bud.unconstrained
    assert math.isinf(bud.gamma_max)


def test_budget_decreasing_in_n():
    prev = math.inf
    for n in (10, 100, 1000, 10**6):
        cur = gamma_budget(n, 0.05, 1.0, 1.0).gamma_max
        assert cur < prev
        prev = cur


def test_budget_inverse_log_scaling():
    small = gamma_budget(10**3, 0.05, 1.0, 1.0)
    large = gamma_budget(10**6, 0.05, 1.0, 1.0)
    predicted = (small.c0 + math.log(10**6)) / (small.c0 + math.log(10**3))
    assert small.gamma_max / large.gamma_max == pytest.approx(predicted, rel=0.05)


def test_budget_validation():
    with pytest.raises(DomainError):
        gamma_budget(1, 0.05, 1.0, 1.0)
    with pytest.raises(DomainError):
        gamma_budget(10, 1.5, 1.0, 1.0)
    with pytest.raises(DomainError):
        gamma_budget(10, 0.05, -0.5, 1.0)
    with pytest.raises(DomainError):
        gamma_budget(10, 0.05, 1.0, 0.0)


def scenario(s: float, coupling: float = 0.002) -> ScalingScenario:
    return ScalingScenario(
        s=s,
        y=1.0 / 3.0,
        r0=0.5,
        tau0=1.0,
        n0=100.0,
        T=1.0,
        Omega=10.0,
        q=0.05,
        mu=1.0,
        b=1.0,
        coupling=coupling,
    )


def test_scenario_validation():
    with pytest.raises(DomainError):
        scenario(1.0).__class__(**{**scenario(1.0).__dict__, "y": 0.2})
    with pytest.raises(DomainError):
        scenario(1.0).__class__(**{**scenario(1.0).__dict__, "mu": 0.0})
    with pytest.raises(DomainError):
        scenario(1.0).__class__(**{**scenario(1.0).__dict__, "q": 1.5})


def test_scalability_no_noise():
    grid = geometric_grid(100.0, 1e9, 15)
    report = scalability_verdict(scenario(1.0, coupling=0.0), grid)
    assert report.verdict == "scalable (no noise)"
    assert report.crossover_n is None
    assert all(row.satisfied for row in report.rows)


def test_scalability_ohmic_crossover():
    grid = geometric_grid(100.0, 1e9, 29)
    report = scalability_verdict(scenario(1.0), grid)
    assert report.verdict == "not scalable"
    assert report.crossover_n == pytest.approx(1000.0, rel=1e-9)
    flags = [row.satisfied for row in report.rows]
    assert flags[0] and not flags[-1]


def test_scalability_super_ohmic_scalable():
    grid = geometric_grid(100.0, 1e9, 29)
    report = scalability_verdict(scenario(2.5), grid)
    assert report.verdict == "scalable"
    assert report.crossover_n is None
    assert all(row.satisfied for row in report.rows)


def test_geometric_grid_shape():
    grid = geometric_grid(10.0, 1000.0, 5)
    assert len(grid) == 5
    assert grid[0] == pytest.approx(10.0)
    assert grid[-1] == pytest.approx(1000.0)
    assert all(b > a for a, b in zip(grid, grid[1:]))
