import math

import numpy as np
import pytest

from ordsec.errors import CapabilityError, FeasibilityError, ParameterError
from ordsec.harness import (
    CSV_COLUMNS,
    PROBLEMS,
    ExperimentConfig,
    TrialReport,
    aggregate_ratio,
    load_config,
    run_experiment,
    save_config,
)


def test_aggregate_examples():
    est = aggregate_ratio([3.0, 3.0, 3.0], 3.0)
    assert est.ratio == 1.0 and est.se == 0.0
    assert aggregate_ratio([0.0, 2.0], 2.0).ratio == 2.0
    unb = aggregate_ratio([0.0, 0.0], 1.0)
    assert unb.unbounded and unb.ratio == math.inf
    assert aggregate_ratio([0.0], 0.0).ratio == 1.0
    reps = [TrialReport(0, t, t, v, 4.0, True) for t, v in enumerate([1.0, 3.0])]
    assert aggregate_ratio(reps, 4.0).ratio == 2.0


def test_ratio_is_opt_over_mean_not_mean_of_ratios():
    vals = [1.0, 4.0]
    est = aggregate_ratio(vals, 4.0)
    assert est.ratio == 4.0 / 2.5
    assert est.ratio != np.mean([4.0 / v for v in vals])


def test_delta_method_standard_error():
    vals = np.array([1.0, 2.0, 3.0, 6.0])
    est = aggregate_ratio(vals, 6.0)
    se_mean = vals.std(ddof=1) / 2
    assert math.isclose(est.se, 6.0 * se_mean / vals.mean() ** 2)


def test_config_validation():
    with pytest.raises(ParameterError):
        ExperimentConfig("nope", 5)
    with pytest.raises(ParameterError):
        ExperimentConfig("bipartite", 5, trials=0)
    with pytest.raises(ParameterError):
        ExperimentConfig("bipartite", 5, algorithm="simulate")
    with pytest.raises(ParameterError):
        ExperimentConfig("indepset", 5, p=1.5)


def test_replay_is_byte_identical(tmp_path):
    texts = []
    for k in range(2):
        cfg = ExperimentConfig("general", 8, trials=30, instances=2, seed=99, out=str(tmp_path / f"r{k}.csv"))
        res = run_experiment(cfg)
        texts.append((open(res.csv_path).read(), open(res.summary_path).read()))
    assert texts[0] == texts[1]
    header = texts[0][0].splitlines()[0].split(",")
    assert tuple(header) == CSV_COLUMNS


def test_adding_instances_keeps_existing_trials():
    a = run_experiment(ExperimentConfig("bipartite", 6, trials=10, instances=1, seed=5), write=False)
    b = run_experiment(ExperimentConfig("bipartite", 6, trials=10, instances=3, seed=5), write=False)
    assert a.csv_text().splitlines() == b.csv_text().splitlines()[: 11]


def test_config_file_round_trip(tmp_path):
    cfg = ExperimentConfig("indepset", 12, trials=7, instances=2, seed=3, algorithm="simulate", p=0.5,
                           params={"avg_degree": 3.5})
    save_config(cfg, tmp_path / "c.txt")
    back = load_config(tmp_path / "c.txt")
    assert back == cfg


def test_bad_config_file(tmp_path):
    path = tmp_path / "c.txt"
    path.write_text("ordsec v1 config\nproblem: general\n")
    with pytest.raises(ParameterError):
        load_config(path)


def test_capability_error_names_instance():
    with pytest.raises(CapabilityError, match="instance 0"):
        run_experiment(ExperimentConfig("general", 20, trials=1), write=False)


def test_infeasible_output_aborts(monkeypatch):
    prob = PROBLEMS["general"]
    monkeypatch.setattr(type(prob), "feasible", lambda self, inst, sel: False)
    with pytest.raises(FeasibilityError):
        run_experiment(ExperimentConfig("general", 6, trials=2), write=False)


@pytest.mark.parametrize("problem", sorted(PROBLEMS))
def test_every_problem_reports_feasible_bounded_values(problem):
    n = {"submodular": 7}.get(problem, 10)
    for alg in PROBLEMS[problem].algorithms:
        res = run_experiment(ExperimentConfig(problem, n, trials=20, instances=2, algorithm=alg), write=False)
        for r in res.reports:
            assert r.feasible
            assert r.alg_value <= r.opt_value + 1e-9


def test_summary_lists_max_and_mean():
    res = run_experiment(ExperimentConfig("matroid", 10, trials=20, instances=3, seed=2), write=False)
    text = res.summary_text()
    assert "max_ratio:" in text and "mean_ratio:" in text
    assert res.max_ratio >= res.mean_ratio
