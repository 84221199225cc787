import math
import os

import pytest

import mgaoi

SCENARIOS = os.environ.get(
    "MGAOI_SCENARIO_DIR", os.path.join(os.path.dirname(__file__), "..", "..", "scenarios")
)
GAMMA = (-0.5 + math.sqrt(1.25)) / 2
MEAN_AOI = 5 + 2 * GAMMA


def two_class():
    e = mgaoi.ServiceDistribution.exponential(1.0)
    return mgaoi.validate([(0.25, e), (0.25, e)])


def test_distribution_values():
    d = mgaoi.ServiceDistribution.exponential(1.0)
    assert d.lst(0.5) == pytest.approx(2 / 3, rel=1e-15)
    assert abs(d.lst(complex(0.3, 2.0)) - 1 / (1.3 + 2j)) < 1e-15
    assert mgaoi.ServiceDistribution.deterministic(3.0).moment(2) == 9.0
    assert d.family == "exponential"
    with pytest.raises(mgaoi.DomainError):
        d.lst(-1.0)
    with pytest.raises(mgaoi.ValidationError):
        mgaoi.ServiceDistribution.exponential(0.0)


def test_model_and_means():
    m = two_class()
    assert len(m) == 2
    assert m.total_load == pytest.approx(0.5)
    v = mgaoi.tagged(m, 0)
    r = v.mean_metrics()
    assert abs(r["gamma"] - GAMMA) < 1e-12
    assert abs(r["mean_aoi"] - MEAN_AOI) < 1e-12
    assert r["mean_peak_aoi"] == pytest.approx(6.0, rel=1e-15)
    e = mgaoi.ServiceDistribution.exponential(1.0)
    with pytest.raises(mgaoi.ValidationError, match="rho_all"):
        mgaoi.validate([(0.6, e), (0.5, e)])


def test_transforms_and_inversion():
    v = mgaoi.tagged(two_class(), 0)
    s = complex(0.4, 1.5)
    assert abs(v.aoi_lst(s) - v.aoi_lst_from_peak(s)) < 1e-10
    assert abs(v.psi(v.phi(s)) - s) < 1e-12
    cdf = mgaoi.aoi_cdf(v, [0.0, MEAN_AOI, 50 * MEAN_AOI])
    assert cdf[0] < 1e-12 and cdf[2] > 1 - 1e-4
    assert mgaoi.invert_cdf(lambda s: 1 / (1 + s), [1.0])[0] == pytest.approx(1 - math.exp(-1), abs=1e-8)
    assert mgaoi.numerical_moment(v.aoi_lst, 1, MEAN_AOI) == pytest.approx(MEAN_AOI, rel=1e-6)


def test_simulate_is_reproducible():
    m = two_class()
    a = mgaoi.simulate(m, horizon=2e5, replications=3, seed=4, cdf_grid=[1.0, 5.0])
    b = mgaoi.simulate(m, horizon=2e5, replications=3, seed=4, cdf_grid=[1.0, 5.0])
    assert a == b
    c = a["classes"][0]
    assert abs(c["mean_aoi"]["mean"] - MEAN_AOI) < 3 * c["mean_aoi"]["ci_halfwidth"] + 0.05
    with pytest.raises(mgaoi.ConfigError):
        mgaoi.simulate(m, horizon=0.0)


def test_scenario_workflow():
    sc = mgaoi.parse_scenario(os.path.join(SCENARIOS, "single_mm1.yaml"))
    rows = mgaoi.analyze(sc)
    assert abs(rows[0]["mean_aoi"] - 3.5) < 1e-12
    with pytest.raises(mgaoi.ConfigError, match="pareto"):
        mgaoi.parse_scenario_text(
            "classes:\n  - {arrival_rate: 0.2, service: {family: pareto, rate: 1.0}}\n"
        )
