"""
Bench Harness v1.0

Прогон эксперимента: инстансы × солверы × бюджеты × повторы → CSV (+ JSON).

- Инстансы: сгенерированные (GenSpec) и/или файлы графов
- Солверы: semo, gsemo (по всем бюджетам и повторам), greedy, exact (один раз на инстанс)
- seed повтора = base_seed + индекс повтора
- m из точного оракула, если n <= CDS_ORACLE_MAX_N → колонки m и ratio
- Каждое допустимое решение перепроверяется is_cds перед записью
- Параллельно: CDS_WORKERS процессов, задачи через asyncio.gather,
  упавшая задача → строка с feasible=false, прогон продолжается
- Порядок строк канонический (инстанс, солвер, бюджет, повтор), не порядок завершения

После прогона проверяются и логируются наблюдения:
- ratio <= 2 + lnΔ (ERROR при нарушении)
- среднее SEMO <= greedy + 1 (WARNING при нарушении)
- разрыв T1 vs T2 по инстансам (INFO)
"""

import asyncio
import csv
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
from tqdm import tqdm

from baselines import OracleLimitError, exact_min_cds, greedy_cds
from config import ORACLE_MAX_N, WORKERS
from evo_engine import Algorithm, RunConfig, budget_label, run
from generators import GeneratorError, GenSpec, generate
from graph_core import Graph, GraphError, is_cds, read_graph
from objectives import ratio_bound
from service_logger import slog

SOLVERS = ("semo", "gsemo", "greedy", "exact")
EA_SOLVERS = ("semo", "gsemo")

CSV_COLUMNS = [
    "instance", "model", "n", "delta", "solver", "budget", "seed", "size", "feasible",
    "first_feasible_iter", "iterations", "wall_time_s", "m", "ratio",
]


# ==========================================
# ТИПЫ
# ==========================================

@dataclass
class Instance:
    instance_id: str
    model: str
    graph: Optional[Graph]
    # Ошибка загрузки или проверки графа: все задачи инстанса станут feasible=false
    error: Optional[str] = None
    n_hint: Optional[int] = None

    @property
    def n(self) -> Optional[int]:
        return self.graph.n if self.graph is not None else self.n_hint


class InstanceError(RuntimeError):
    """Инстанс не загрузился или не годится для солверов"""


@dataclass
class ExperimentSpec:
    corpus: List[Union[GenSpec, str, Path]]
    solvers: List[str] = field(default_factory=lambda: ["semo", "greedy"])
    budgets: List[Union[int, str]] = field(default_factory=lambda: ["T1"])
    replicates: int = 1
    base_seed: int = 0
    output: Optional[Path] = None
    json_output: Optional[Path] = None
    use_oracle: bool = True
    workers: int = WORKERS

    def __post_init__(self):
        if self.replicates < 1:
            raise ValueError(f"replicates должно быть >= 1, получено {self.replicates}")
        unknown = [s for s in self.solvers if s not in SOLVERS]
        if unknown:
            raise ValueError(f"Неизвестные солверы {unknown}, доступны {list(SOLVERS)}")
        if not self.corpus:
            raise ValueError("Пустой корпус инстансов")
        if self.workers < 1:
            raise ValueError(f"workers должно быть >= 1, получено {self.workers}")
        self.budgets = [budget_label(b) for b in self.budgets]


@dataclass
class ResultRow:
    instance: str
    model: str
    n: Optional[int]
    delta: Optional[int]
    solver: str
    budget: str
    seed: Optional[int]
    size: Optional[int]
    feasible: bool
    first_feasible_iter: Optional[int]
    iterations: Optional[int]
    wall_time_s: float
    m: Optional[int] = None
    ratio: Optional[float] = None

    def to_csv_dict(self) -> Dict[str, str]:
        out = {}
        for key, value in asdict(self).items():
            if key == "seed" and value is None:
                # greedy и exact не зависят от seed
                out[key] = "-"
            elif value is None:
                out[key] = ""
            elif key == "feasible":
                out[key] = "true" if value else "false"
            elif key == "wall_time_s":
                out[key] = f"{value:.6f}"
            elif key == "ratio":
                out[key] = f"{value:.6f}"
            else:
                out[key] = str(value)
        return out


@dataclass
class Job:
    order: tuple
    instance: Instance
    solver: str
    budget: str
    seed: Optional[int]
    m: Optional[int]


# ==========================================
# КОРПУС И ОРАКУЛ
# ==========================================

def _instance_error(instance_id: str, error: BaseException) -> str:
    message = f"{type(error).__name__}: {error}"
    slog.log_bench_event("load", instance_id, "-", success=False, error_msg=message)
    return message


def load_corpus(corpus: Sequence[Union[GenSpec, str, Path]]) -> List[Instance]:
    """Битый инстанс не прерывает прогон: он остаётся в корпусе с error"""
    instances = []
    for item in corpus:
        if isinstance(item, GenSpec):
            try:
                instances.append(Instance(item.instance_id, item.model.value, generate(item)))
            except GeneratorError as e:
                instances.append(Instance(item.instance_id, item.model.value, None,
                                          error=_instance_error(item.instance_id, e), n_hint=item.n))
        else:
            path = Path(item)
            try:
                instances.append(Instance(path.stem, "file", read_graph(path)))
            except (GraphError, OSError) as e:
                instances.append(Instance(path.stem, "file", None, error=_instance_error(path.stem, e)))
    return instances


def oracle_m(instance: Instance) -> Optional[int]:
    if instance.graph is None or instance.graph.n > ORACLE_MAX_N:
        return None
    return exact_min_cds(instance.graph).m


# ==========================================
# ВЫПОЛНЕНИЕ ЗАДАЧИ
# ==========================================

def _make_row(job: Job, size: Optional[int], first_feasible: Optional[int],
              iterations: Optional[int], wall_time: float) -> ResultRow:
    g = job.instance.graph
    ratio = size / job.m if (size is not None and job.m) else None
    return ResultRow(
        instance=job.instance.instance_id,
        model=job.instance.model,
        n=job.instance.n,
        delta=g.max_degree if g is not None else None,
        solver=job.solver,
        budget=job.budget,
        seed=job.seed,
        size=size,
        feasible=size is not None,
        first_feasible_iter=first_feasible,
        iterations=iterations,
        wall_time_s=wall_time,
        m=job.m,
        ratio=ratio,
    )


def execute_job(job: Job) -> ResultRow:
    """Запускает один солвер; решение перепроверяется is_cds независимо от солвера"""
    if job.instance.error is not None:
        raise InstanceError(job.instance.error)
    g = job.instance.graph
    start = time.perf_counter()

    if job.solver in EA_SOLVERS:
        report = run(g, RunConfig(algorithm=Algorithm(job.solver), budget=job.budget, seed=job.seed))
        solution, first_feasible, iterations = report.solution, report.first_feasible_iteration, report.iterations_used
    elif job.solver == "greedy":
        solution, steps = greedy_cds(g)
        first_feasible, iterations = len(steps), len(steps)
    else:
        result = exact_min_cds(g)
        solution, first_feasible, iterations = result.optimum, None, result.subsets_examined

    wall_time = time.perf_counter() - start

    size = None
    if solution is not None:
        if is_cds(g, solution):
            size = int(np.count_nonzero(solution))
        else:
            slog.error("BENCH", "NOT_CDS", f"{job.solver} вернул не-CDS",
                       extra={"instance": job.instance.instance_id, "seed": job.seed})

    return _make_row(job, size, first_feasible, iterations, wall_time)


def _failed_row(job: Job, error: BaseException) -> ResultRow:
    slog.log_bench_event("job", job.instance.instance_id, job.solver, success=False,
                         error_msg=f"{type(error).__name__}: {error}",
                         extra={"budget": job.budget, "seed": job.seed})
    return _make_row(job, None, None, None, 0.0)


def _run_sequential(jobs: List[Job]) -> List[ResultRow]:
    rows = []
    for job in tqdm(jobs, desc="bench", unit="run", leave=False):
        try:
            rows.append(execute_job(job))
        except Exception as e:
            rows.append(_failed_row(job, e))
    return rows


async def _run_parallel(jobs: List[Job], workers: int) -> List[ResultRow]:
    loop = asyncio.get_running_loop()
    progress = tqdm(total=len(jobs), desc="bench", unit="run", leave=False)

    with ProcessPoolExecutor(max_workers=workers) as pool:
        async def one(job: Job) -> ResultRow:
            try:
                return await loop.run_in_executor(pool, execute_job, job)
            finally:
                progress.update(1)

        # return_exceptions=True чтобы одна ошибка не отменяла остальные
        raw_results = await asyncio.gather(*(one(job) for job in jobs), return_exceptions=True)

    progress.close()
    return [
        _failed_row(job, result) if isinstance(result, BaseException) else result
        for job, result in zip(jobs, raw_results)
    ]


# ==========================================
# ЭКСПЕРИМЕНТ
# ==========================================

def build_jobs(spec: ExperimentSpec, instances: List[Instance], ms: Dict[str, Optional[int]]) -> List[Job]:
    jobs = []
    for i, inst in enumerate(instances):
        for s_idx, solver in enumerate(spec.solvers):
            m = ms.get(inst.instance_id)
            if solver in EA_SOLVERS:
                for b_idx, budget in enumerate(spec.budgets):
                    for r in range(spec.replicates):
                        jobs.append(Job((i, s_idx, b_idx, r), inst, solver, budget, spec.base_seed + r, m))
            elif solver == "exact" and inst.n is not None and inst.n > ORACLE_MAX_N:
                slog.warning("BENCH", "EXACT_SKIPPED",
                             f"exact пропущен: n={inst.n} > {ORACLE_MAX_N}",
                             extra={"instance": inst.instance_id})
            else:
                jobs.append(Job((i, s_idx, 0, 0), inst, solver, "-", None, m))
    return jobs


def run_experiment(spec: ExperimentSpec) -> List[ResultRow]:
    started = time.perf_counter()
    instances = load_corpus(spec.corpus)

    ids = [inst.instance_id for inst in instances]
    if len(set(ids)) != len(ids):
        raise ValueError(f"Повторяющиеся id инстансов: {ids}")

    ms: Dict[str, Optional[int]] = {}
    for inst in instances:
        if inst.error is not None:
            continue
        try:
            inst.graph.validate_for_solver()
            if spec.use_oracle:
                ms[inst.instance_id] = oracle_m(inst)
        except (GraphError, OracleLimitError) as e:
            inst.error = _instance_error(inst.instance_id, e)

    jobs = build_jobs(spec, instances, ms)
    slog.info("BENCH", "START", f"{len(instances)} инстансов, {len(jobs)} прогонов",
              extra={"solvers": ",".join(spec.solvers), "budgets": ",".join(spec.budgets),
                     "replicates": spec.replicates, "workers": spec.workers})

    # Задачи битых инстансов сразу становятся строками с feasible=false
    ready = [job for job in jobs if job.instance.error is None]
    by_order = {
        job.order: _failed_row(job, InstanceError(job.instance.error))
        for job in jobs if job.instance.error is not None
    }

    if spec.workers > 1 and len(ready) > 1:
        done = asyncio.run(_run_parallel(ready, spec.workers))
    else:
        done = _run_sequential(ready)
    by_order.update(zip((job.order for job in ready), done))

    # Канонический порядок
    rows = [by_order[order] for order in sorted(by_order)]

    if spec.output:
        write_csv(rows, spec.output)
    if spec.json_output:
        write_json(rows, spec.json_output)

    check_properties(rows)
    slog.info("BENCH", "DONE", f"{len(rows)} строк, недопустимых: {sum(not r.feasible for r in rows)}",
              duration_ms=int((time.perf_counter() - started) * 1000))
    return rows


# ==========================================
# ВЫВОД
# ==========================================

def write_csv(rows: List[ResultRow], path: Union[str, Path]):
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.DictWriter(f, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(row.to_csv_dict())


def write_json(rows: List[ResultRow], path: Union[str, Path]):
    Path(path).write_text(json.dumps([asdict(r) for r in rows], indent=2), encoding="utf-8")


# ==========================================
# НАБЛЮДЕНИЯ
# ==========================================

def _mean_sizes(rows: List[ResultRow], solver: str, budget: str) -> Dict[str, float]:
    sizes: Dict[str, List[int]] = {}
    for r in rows:
        if r.solver == solver and r.budget == budget and r.size is not None:
            sizes.setdefault(r.instance, []).append(r.size)
    return {inst: float(np.mean(v)) for inst, v in sizes.items()}


def check_properties(rows: List[ResultRow]) -> Dict[str, Any]:
    """
    Наблюдения после прогона. Жёстко только ratio <= 2 + lnΔ,
    остальное - данные для отчёта.
    """
    violations = [
        {"instance": r.instance, "solver": r.solver, "budget": r.budget, "seed": r.seed, "ratio": r.ratio}
        for r in rows
        if r.ratio is not None and r.ratio > ratio_bound(r.delta)
    ]
    for v in violations:
        slog.error("BENCH", "RATIO_VIOLATION", "Размер решения больше (2 + lnΔ)·m", extra=v)

    greedy = {r.instance: r.size for r in rows if r.solver == "greedy" and r.size is not None}
    budgets = sorted({r.budget for r in rows if r.solver in EA_SOLVERS})

    ea_vs_greedy = []
    for solver in EA_SOLVERS:
        for budget in budgets:
            for inst, mean in _mean_sizes(rows, solver, budget).items():
                if inst not in greedy:
                    continue
                delta = mean - greedy[inst]
                ea_vs_greedy.append({"instance": inst, "solver": solver, "budget": budget,
                                     "ea_mean": mean, "greedy": greedy[inst], "delta": delta})
                if delta > 1:
                    slog.warning("BENCH", "EA_WORSE", f"{solver} хуже greedy больше чем на 1",
                                 extra={"instance": inst, "budget": budget, "delta": round(delta, 3)})

    t1_t2_gap = []
    for solver in EA_SOLVERS:
        t1, t2 = _mean_sizes(rows, solver, "T1"), _mean_sizes(rows, solver, "T2")
        for inst in sorted(set(t1) & set(t2)):
            gap = t2[inst] - t1[inst]
            t1_t2_gap.append({"instance": inst, "solver": solver, "t1_mean": t1[inst],
                              "t2_mean": t2[inst], "gap": gap})
            slog.info("BENCH", "T1_T2_GAP", f"{solver} T2 - T1 = {gap:+.3f}", extra={"instance": inst})

    return {"ratio_violations": violations, "ea_vs_greedy": ea_vs_greedy, "t1_t2_gap": t1_t2_gap}


def summarize(csv_path: Union[str, Path]):
    """
    Сводка по CSV прогона (pandas):
    по (instance, solver, budget) - средний/мин/макс размер, доля допустимых, макс ratio;
    плюс разница EA - greedy и разрыв T2 - T1 по инстансам.
    """
    import pandas as pd

    df = pd.read_csv(csv_path, dtype={"budget": str, "instance": str})
    df["feasible"] = df["feasible"].astype(str).str.lower() == "true"

    summary = (
        df.groupby(["instance", "solver", "budget"], sort=False)
        .agg(runs=("feasible", "size"), feasible_rate=("feasible", "mean"),
             size_mean=("size", "mean"), size_min=("size", "min"), size_max=("size", "max"),
             ratio_max=("ratio", "max"), delta=("delta", "first"))
        .reset_index()
    )

    greedy = df[df["solver"] == "greedy"].set_index("instance")["size"]
    ea = summary[summary["solver"].isin(EA_SOLVERS)].copy()
    ea["greedy"] = ea["instance"].map(greedy)
    ea["delta_vs_greedy"] = ea["size_mean"] - ea["greedy"]
    ea_vs_greedy = ea[["instance", "solver", "budget", "size_mean", "greedy", "delta_vs_greedy"]]

    means = ea.pivot_table(index=["instance", "solver"], columns="budget", values="size_mean")
    if {"T1", "T2"} <= set(means.columns):
        gap = means[["T1", "T2"]].dropna().reset_index()
        gap["gap"] = gap["T2"] - gap["T1"]
        gap.columns.name = None
    else:
        gap = pd.DataFrame(columns=["instance", "solver", "T1", "T2", "gap"])
    return summary, ea_vs_greedy, gap
