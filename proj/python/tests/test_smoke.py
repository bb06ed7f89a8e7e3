"""Smoke tests for the Python bindings: one pass over each exposed surface."""

import math

import pytest

import irsa_eh as eh


def small_config(**overrides):
    kwargs = dict(
        num_devices=60,
        frame_length=20,
        update_prob=0.02,
        battery_capacity=2,
        harvest_prob=0.1,
        max_degree=2,
    )
    kwargs.update(overrides)
    return eh.SystemConfig(**kwargs)


def test_config_and_load():
    config = small_config()
    sigma = eh.activation_prob(config)
    assert sigma == pytest.approx(1.0 - 0.98**20)
    assert eh.channel_load(config) == pytest.approx(60 * sigma / 20)
    assert not config.unlimited
    eh.validate_config(config)
    with pytest.raises(eh.ConfigError):
        eh.validate_config(small_config(num_devices=0))
    assert issubclass(eh.ConfigError, ValueError)


def test_degree_tables():
    flat = eh.DegreeDistribution.monomial(2, 2)
    assert flat.table == [[0.0, 0.0, 1.0]]
    assert flat.max_degree == 2

    spend_all = eh.DegreeDistribution.battery_monomial(2, 2)
    assert spend_all.adaptive
    assert spend_all.rows == 3
    assert spend_all.row(1) == [0.0, 1.0, 0.0]
    assert eh.validate_avoid_mask(spend_all, 2)

    lopsided = eh.DegreeDistribution([[0.5, 0.5, 0.0]], adaptive=False)
    eh.validate_distribution(lopsided, small_config())
    with pytest.raises(eh.ConfigError):
        eh.validate_distribution(eh.DegreeDistribution([[0.5, 0.4, 0.0]]), small_config())


def test_worked_frame_decoders():
    records = [
        eh.DeviceRecord(0, [0, 3], [True, False]),
        eh.DeviceRecord(1, [1, 4]),
        eh.DeviceRecord(2, [1, 3, 4], [True, True, False]),
        eh.DeviceRecord(3, [0, 2, 4], [True, False, True]),
    ]
    trace = eh.FrameTrace.build(5, records)
    assert trace.has_drops

    ident = eh.sic_identify(trace)
    assert ident.decoded_order == [2, 1, 3, 0]
    assert ident.decoded_count == 4
    assert ident.subset_attempts > 0

    genie = eh.sic_genie(trace)
    assert genie.decoded_count == 4

    clean = eh.FrameTrace.build(5, [eh.DeviceRecord(r.device, r.intended) for r in records])
    conv = eh.sic_conventional(clean)
    assert conv.decoded_order == [3, 0, 2, 1]
    assert all(conv.decoded)
    with pytest.raises(eh.ConfigError):
        eh.sic_conventional(trace)  # has drops


def test_simulation_deterministic_and_consistent():
    config = small_config()
    dist = eh.DegreeDistribution.battery_monomial(2, 2)
    a = eh.run_simulation(config, dist, eh.Scheme.AVOID, 400, 40, 11)
    b = eh.run_simulation(config, dist, eh.Scheme.AVOID, 400, 40, 11)
    assert a.to_json() == b.to_json()
    assert a.frames == 400
    assert 0.0 <= eh.estimate_plr(a) <= 1.0
    assert eh.empirical_throughput(a) >= 0.0

    hist = eh.empirical_battery_distribution(a)
    assert len(hist) == 3
    assert sum(hist) == pytest.approx(1.0)

    d = eh.report_to_dict(a)
    assert d["frames"] == 400
    assert d["plr"] == pytest.approx(eh.estimate_plr(a))


def test_battery_chain_matches_simulation():
    config = small_config()
    dist = eh.DegreeDistribution.battery_monomial(2, 2)
    chain = eh.battery_chain(config, dist)
    assert len(chain.steady) == 3
    assert sum(chain.steady) == pytest.approx(1.0)
    for row in chain.transitions:
        assert sum(row) == pytest.approx(1.0)
    assert chain.steady == pytest.approx(eh.steady_state(chain.transitions))

    report = eh.run_simulation(config, dist, eh.Scheme.AVOID, 4000, 100, 3)
    hist = eh.empirical_battery_distribution(report)
    l1 = sum(abs(h - s) for h, s in zip(hist, chain.steady))
    assert l1 < 0.02

    avg = eh.average_degree_distribution(chain.steady, dist)
    assert sum(avg) == pytest.approx(1.0)


def test_age_formulas_match_unlimited_run():
    config = small_config(battery_capacity=eh.UNLIMITED_CAPACITY, update_prob=0.005)
    dist = eh.DegreeDistribution.monomial(2, 2)
    report = eh.run_simulation(config, dist, eh.Scheme.UNLIMITED, 6000, 100, 5, theta=400.0)

    inputs = eh.AoiInputs(
        alpha=config.update_prob,
        frame_length=config.frame_length,
        sigma=eh.activation_prob(config),
        plr=eh.estimate_plr(report),
    )
    assert inputs.xi == pytest.approx(inputs.sigma * (1 - inputs.plr))
    formula = eh.average_aoi(inputs)
    measured = eh.empirical_aoi_mean(report)
    assert measured == pytest.approx(formula, rel=0.05)
    assert eh.empirical_avp(report) == pytest.approx(
        eh.aoi_violation_prob(400.0, inputs), abs=4 * eh.avp_standard_error(report) + 1e-3
    )

    bound = eh.plr_lower_bound(small_config(), [0.0, 0.0, 1.0], 0.02)
    assert 0.0 < bound < 0.02
    assert eh.throughput(0.5, 0.2) == pytest.approx(0.4)
    assert eh.last_replica_cdf(2, 20, 20) == pytest.approx(1.0)
    assert eh.first_energy_pmf(0.1, 20, 1) > 0.0


def test_optimizer_smoke():
    config = small_config(max_degree=3)
    problem = eh.OptimizationProblem()
    problem.scheme = eh.Scheme.IDENTIFY
    problem.adaptive = False
    problem.objective = eh.objective_from_name("throughput")
    problem.eval_frames = 60
    problem.eval_warmup = 10
    problem.final_frames = 120
    problem.restarts = 1
    problem.seed = 13
    problem.jobs = 1
    problem.nelder_mead.max_iterations = 25

    result = eh.optimize_degree_distribution(config, problem)
    again = eh.optimize_degree_distribution(config, problem)
    assert result.final_value == again.final_value
    assert result.best.table == again.best.table
    assert len(result.restart_values) == 2  # one random restart + the baseline
    assert 0 <= result.best_restart < 2
    for row in result.best.table:
        assert sum(row) == pytest.approx(1.0)
    assert math.isfinite(result.search_value)
    assert result.final_report.frames == 120
    assert eh.objective_name(problem.objective) == "throughput"
