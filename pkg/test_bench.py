import csv
import json

import numpy as np
import pytest

import bench
from bench import CSV_COLUMNS, ExperimentSpec, ResultRow, check_properties, run_experiment, summarize
from generators import GenSpec
from graph_core import path_graph, write_graph


def _small_spec(tmp_path, **overrides):
    params = dict(
        corpus=[GenSpec(model="ba", n=8, seed=1), GenSpec(model="er", n=7, seed=2, er_p=0.4)],
        solvers=["semo", "gsemo", "greedy", "exact"],
        budgets=["T1", "T2"],
        replicates=3,
        base_seed=10,
        output=tmp_path / "out.csv",
    )
    params.update(overrides)
    return ExperimentSpec(**params)


def _strip_time(rows):
    return [{k: v for k, v in r.to_csv_dict().items() if k != "wall_time_s"} for r in rows]


def test_experiment_rows_and_csv(tmp_path):
    spec = _small_spec(tmp_path, json_output=tmp_path / "out.json")
    rows = run_experiment(spec)

    # 2 инстанса × (2 EA × 2 бюджета × 3 повтора + greedy + exact)
    assert len(rows) == 2 * (2 * 2 * 3 + 2)

    with open(spec.output, newline="") as f:
        reader = csv.DictReader(f)
        assert reader.fieldnames == CSV_COLUMNS
        written = list(reader)
    assert len(written) == len(rows)
    assert written[0]["instance"] == "ba-n8-s1"
    assert written[0]["solver"] == "semo"
    assert written[0]["budget"] == "T1"
    assert [w["seed"] for w in written[:3]] == ["10", "11", "12"]

    greedy = [w for w in written if w["solver"] == "greedy"]
    assert all(w["budget"] == "-" and w["seed"] == "-" for w in greedy)

    for r in rows:
        assert r.m is not None
        if r.feasible:
            assert r.ratio == pytest.approx(r.size / r.m)
        if r.feasible and r.budget in ("T1", "-"):
            assert r.ratio <= 2 + np.log(r.delta) + 1e-9
    assert all(r.feasible for r in rows if r.solver in ("greedy", "exact"))
    assert all(r.ratio == 1.0 for r in rows if r.solver == "exact")

    payload = json.loads(spec.json_output.read_text())
    assert len(payload) == len(rows)


def test_experiment_deterministic_modulo_time(tmp_path):
    a = run_experiment(_small_spec(tmp_path, output=None))
    b = run_experiment(_small_spec(tmp_path, output=None))
    assert _strip_time(a) == _strip_time(b)


def test_parallel_matches_sequential(tmp_path):
    sequential = run_experiment(_small_spec(tmp_path, output=None, workers=1))
    parallel = run_experiment(_small_spec(tmp_path, output=None, workers=2))
    assert _strip_time(parallel) == _strip_time(sequential)


def test_failed_job_becomes_infeasible_row(tmp_path, monkeypatch):
    def boom(*args, **kwargs):
        raise RuntimeError("worker crashed")

    monkeypatch.setattr(bench, "run", boom)
    rows = run_experiment(_small_spec(tmp_path, solvers=["semo", "greedy"], budgets=["T1"], replicates=2))
    semo = [r for r in rows if r.solver == "semo"]
    assert len(semo) == 4
    assert all(not r.feasible and r.size is None and r.iterations is None for r in semo)
    assert all(r.feasible for r in rows if r.solver == "greedy")


def test_exact_skipped_above_oracle_cap(tmp_path, monkeypatch):
    monkeypatch.setattr(bench, "ORACLE_MAX_N", 7)
    rows = run_experiment(_small_spec(tmp_path, solvers=["greedy", "exact"], output=None))
    exact = [r.instance for r in rows if r.solver == "exact"]
    assert exact == ["er-n7-s2"]
    ba_greedy = next(r for r in rows if r.instance == "ba-n8-s1")
    assert ba_greedy.m is None and ba_greedy.ratio is None


def test_graph_files_in_corpus(tmp_path):
    path = tmp_path / "p6.txt"
    write_graph(path_graph(6), path)
    rows = run_experiment(ExperimentSpec(corpus=[path], solvers=["greedy", "exact"], output=None))
    assert [(r.instance, r.model, r.size, r.m) for r in rows] == [("p6", "file", 4, 4), ("p6", "file", 4, 4)]


@pytest.fixture
def mixed_corpus(tmp_path):
    good, split = tmp_path / "p6.txt", tmp_path / "split.txt"
    write_graph(path_graph(6), good)
    split.write_text("4 2\n1 2\n3 4\n")
    return [good, split]


@pytest.mark.parametrize("use_oracle", [True, False])
def test_disconnected_file_does_not_abort_run(mixed_corpus, use_oracle):
    rows = run_experiment(ExperimentSpec(corpus=mixed_corpus, solvers=["semo", "greedy"], budgets=[5000],
                                         replicates=2, output=None, use_oracle=use_oracle))
    assert [(r.instance, r.solver) for r in rows] == [
        ("p6", "semo"), ("p6", "semo"), ("p6", "greedy"),
        ("split", "semo"), ("split", "semo"), ("split", "greedy"),
    ]
    assert all(r.feasible for r in rows if r.instance == "p6")
    split = [r for r in rows if r.instance == "split"]
    assert all(not r.feasible and r.size is None and r.m is None for r in split)
    assert all(r.n == 4 and r.delta == 1 for r in split)


def test_exhausted_er_retries_become_failed_rows(tmp_path):
    out = tmp_path / "out.csv"
    corpus = [GenSpec(model="ba", n=8, seed=1), GenSpec(model="er", n=50, seed=0, er_p=0.001, max_retries=3)]
    rows = run_experiment(ExperimentSpec(corpus=corpus, solvers=["gsemo", "greedy", "exact"], budgets=["T2"],
                                         replicates=2, output=out))
    er = [r for r in rows if r.instance == "er-n50-s0"]
    # exact для n=50 отсекается по порогу оракула ещё при построении задач
    assert [r.solver for r in er] == ["gsemo", "gsemo", "greedy"]
    assert all(not r.feasible and r.n == 50 and r.delta is None for r in er)
    assert all(r.feasible for r in rows if r.instance == "ba-n8-s1" and r.solver != "gsemo")

    with open(out, newline="") as f:
        written = [w for w in csv.DictReader(f) if w["instance"] == "er-n50-s0"]
    assert all(w["delta"] == "" and w["size"] == "" and w["feasible"] == "false" for w in written)


def test_unreadable_file_logged_once(tmp_path, monkeypatch):
    events = []
    monkeypatch.setattr(bench.slog, "log_bench_event", lambda action, *args, **kwargs: events.append(action))
    rows = run_experiment(ExperimentSpec(corpus=[tmp_path / "nope.txt"], solvers=["greedy"], output=None))
    assert len(rows) == 1 and not rows[0].feasible and rows[0].n is None
    assert events == ["load", "job"]


def test_duplicate_instance_ids_rejected(tmp_path):
    spec = _small_spec(tmp_path, corpus=[GenSpec(model="ba", n=8, seed=1)] * 2)
    with pytest.raises(ValueError):
        run_experiment(spec)


@pytest.mark.parametrize("kwargs", [
    {"replicates": 0},
    {"solvers": ["tabu"]},
    {"corpus": []},
    {"workers": 0},
])
def test_spec_validation(tmp_path, kwargs):
    with pytest.raises(ValueError):
        _small_spec(tmp_path, **kwargs)


def test_csv_formatting():
    row = ResultRow(instance="x", model="ba", n=5, delta=2, solver="greedy", budget="-", seed=None,
                    size=None, feasible=False, first_feasible_iter=None, iterations=None,
                    wall_time_s=0.5, m=3, ratio=None)
    out = row.to_csv_dict()
    assert out["seed"] == "-"
    assert out["feasible"] == "false"
    assert out["wall_time_s"] == "0.500000"
    assert out["ratio"] == ""


def test_check_properties_flags_violation():
    row = ResultRow(instance="x", model="ba", n=10, delta=2, solver="semo", budget="T1", seed=0,
                    size=9, feasible=True, first_feasible_iter=5, iterations=720,
                    wall_time_s=0.1, m=3, ratio=3.0)
    greedy = ResultRow(instance="x", model="ba", n=10, delta=2, solver="greedy", budget="-", seed=None,
                       size=4, feasible=True, first_feasible_iter=3, iterations=3,
                       wall_time_s=0.0, m=3, ratio=4 / 3)
    report = check_properties([row, greedy])
    assert len(report["ratio_violations"]) == 1
    assert report["ea_vs_greedy"][0]["delta"] == 5.0


def test_summary(tmp_path):
    spec = _small_spec(tmp_path)
    run_experiment(spec)
    summary, ea_vs_greedy, gap = summarize(spec.output)
    assert {"instance", "solver", "budget", "size_mean", "feasible_rate", "ratio_max"} <= set(summary.columns)
    assert len(summary) == 2 * (2 * 2 + 2)
    assert set(ea_vs_greedy["solver"]) == {"semo", "gsemo"}
    assert (summary[summary["solver"] == "exact"]["ratio_max"] == 1.0).all()
    assert {"instance", "solver", "T1", "T2", "gap"} <= set(gap.columns)
    assert (gap["gap"] == gap["T2"] - gap["T1"]).all()


@pytest.mark.parametrize("model", ["ba", "er"])
def test_semo_close_to_greedy(model):
    corpus = [GenSpec(model=model, n=n, seed=s) for n in range(10, 21) for s in range(2)]
    rows = run_experiment(ExperimentSpec(corpus=corpus, solvers=["semo", "greedy"], budgets=["T1"],
                                         replicates=5, output=None, use_oracle=False))
    greedy = {r.instance: r.size for r in rows if r.solver == "greedy"}
    for inst, size in greedy.items():
        sizes = [r.size for r in rows if r.instance == inst and r.solver == "semo"]
        assert None not in sizes
        assert np.mean(sizes) <= size + 1
