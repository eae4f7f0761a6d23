"""
Evo Engine v1.0

Эволюционный цикл с Парето-архивом (SEMO / GSEMO):

    P ← {x⁰ = 0...0}
    T раз:
        x  ← равномерно из P
        x' ← мутация x (SEMO: ровно один бит; GSEMO: каждый бит с вероятностью 1/n)
        если в P нет z ≻ x':  P ← P ∪ {x'} \\ {z : x' ⪰ z}
    ответ: член P с f1 = 2 (он единственный - f1 в архиве уникальны)

Ровно T итераций (не T+1). Два независимых потока PCG64 из одного seed:
выбор родителя и мутация.

Бюджеты: T1 = n(n-1)(n-2), T2 = n², T3 = ⌈n² ln n⌉, NLOGN = ⌈n ln n⌉, ET1 = ⌈e·T1⌉.
"""

import math
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from graph_core import Graph, VertexSet, members_of
from objectives import DiagnosticsSnapshot, DominanceRelation, Evaluation, compare, evaluate, snapshot
from service_logger import slog


class Algorithm(str, Enum):
    SEMO = "semo"
    GSEMO = "gsemo"


# ==========================================
# БЮДЖЕТЫ
# ==========================================

BUDGET_PRESETS: Dict[str, Callable[[int], int]] = {
    "T1": lambda n: n * (n - 1) * (n - 2),
    "T2": lambda n: n * n,
    "T3": lambda n: math.ceil(n * n * math.log(n)),
    "NLOGN": lambda n: math.ceil(n * math.log(n)),
    "ET1": lambda n: math.ceil(math.e * n * (n - 1) * (n - 2)),
}


def resolve_budget(budget: Union[int, str], n: int) -> int:
    """Пресет (регистр не важен) или неотрицательное целое → число итераций"""
    if isinstance(budget, str):
        label = budget.strip().upper()
        if label in BUDGET_PRESETS:
            return BUDGET_PRESETS[label](n)
        try:
            budget = int(label)
        except ValueError:
            raise ValueError(f"Неизвестный бюджет {budget!r}, ожидается {sorted(BUDGET_PRESETS)} или целое") from None
    if isinstance(budget, bool) or not isinstance(budget, (int, np.integer)):
        raise ValueError(f"Бюджет должен быть целым или пресетом, получено {budget!r}")
    if budget < 0:
        raise ValueError(f"Бюджет должен быть >= 0, получено {budget}")
    return int(budget)


def budget_label(budget: Union[int, str]) -> str:
    return budget.strip().upper() if isinstance(budget, str) else str(budget)


# ==========================================
# ТИПЫ
# ==========================================

@dataclass(frozen=True)
class RunConfig:
    algorithm: Algorithm = Algorithm.SEMO
    budget: Union[int, str] = "T1"
    seed: int = 0
    trace_every: int = 0
    diagnostics_m: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "algorithm", Algorithm(self.algorithm))
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError(f"seed должен быть в [0, 2^64), получено {self.seed}")
        if self.trace_every < 0:
            raise ValueError(f"trace_every должен быть >= 0, получено {self.trace_every}")
        if self.diagnostics_m is not None and self.diagnostics_m < 1:
            raise ValueError(f"diagnostics_m должен быть >= 1, получено {self.diagnostics_m}")
        # Ранняя проверка имени пресета / знака
        resolve_budget(self.budget, 3)


@dataclass
class Individual:
    bits: VertexSet
    eval: Evaluation

    @classmethod
    def from_bits(cls, g: Graph, bits: VertexSet) -> "Individual":
        return cls(bits=bits, eval=evaluate(g, bits))


class OfferResult(str, Enum):
    ACCEPTED = "accepted"
    REJECTED = "rejected"


class Population:
    """
    Парето-архив: попарно несравнимые члены, не больше одного на значение f1.
    Порядок членов детерминирован (порядок вставки) - от него зависит выбор родителя.
    """

    def __init__(self):
        self._members: List[Individual] = []
        self._index: Dict[int, Individual] = {}

    @property
    def members(self) -> List[Individual]:
        return list(self._members)

    def __len__(self) -> int:
        return len(self._members)

    def by_f1(self, f1: int) -> Optional[Individual]:
        return self._index.get(f1)

    def evaluations(self) -> List[Evaluation]:
        return [x.eval for x in self._members]

    def offer(self, x: Individual) -> OfferResult:
        for z in self._members:
            if compare(z.eval, x.eval) is DominanceRelation.BETTER:
                return OfferResult.REJECTED

        # Удаляем всех, кого x' слабо лучше (включая равных по обоим критериям)
        survivors = [z for z in self._members if not compare(x.eval, z.eval).weakly_better]
        survivors.append(x)
        self._members = survivors
        self._index = {z.eval.f1: z for z in survivors}
        return OfferResult.ACCEPTED

    def choose(self, rng: np.random.Generator) -> Individual:
        return self._members[int(rng.integers(len(self._members)))]

    def best_feasible(self) -> Optional[Individual]:
        x = self._index.get(2)
        return x if x is not None and x.eval.feasible else None

    def min_f1(self) -> Optional[int]:
        return min(self._index) if self._index else None

    def invariants_hold(self) -> bool:
        evals = self.evaluations()
        if len({ev.f1 for ev in evals}) != len(evals):
            return False
        for i, a in enumerate(evals):
            for b in evals[i + 1:]:
                if compare(a, b) is not DominanceRelation.INCOMPARABLE:
                    return False
        return True


def archive_offer(p: Population, x: Individual) -> OfferResult:
    return p.offer(x)


@dataclass
class TracePoint:
    iteration: int
    best_size: Optional[int]
    archive_size: int
    potential_k: Optional[int] = None

    def to_dict(self) -> dict:
        return {
            "iteration": self.iteration,
            "best_size": self.best_size,
            "archive_size": self.archive_size,
            "potential_k": self.potential_k,
        }


@dataclass
class RunReport:
    algorithm: Algorithm
    seed: int
    budget: int
    solution: Optional[VertexSet]
    solution_size: Optional[int]
    iterations_used: int
    first_feasible_iteration: Optional[int]
    wall_time: float
    trace: List[TracePoint] = field(default_factory=list)
    final_archive: List[Tuple[int, int]] = field(default_factory=list)
    diagnostics: List[DiagnosticsSnapshot] = field(default_factory=list)

    @property
    def feasible(self) -> bool:
        return self.solution is not None

    @property
    def solution_members(self) -> Optional[List[int]]:
        return members_of(self.solution) if self.solution is not None else None

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm.value,
            "seed": self.seed,
            "budget": self.budget,
            "solution": self.solution_members,
            "solution_size": self.solution_size,
            "feasible": self.feasible,
            "iterations_used": self.iterations_used,
            "first_feasible_iteration": self.first_feasible_iteration,
            "wall_time_s": self.wall_time,
            "final_archive": [list(pair) for pair in self.final_archive],
            "trace": [tp.to_dict() for tp in self.trace],
            "diagnostics": [d.to_dict() for d in self.diagnostics],
        }


# ==========================================
# МУТАЦИИ И RNG
# ==========================================

def make_streams(seed: int) -> Tuple[np.random.Generator, np.random.Generator]:
    """Два независимых потока: (выбор родителя, мутация)"""
    select_seq, mutate_seq = np.random.SeedSequence(seed).spawn(2)
    return np.random.Generator(np.random.PCG64(select_seq)), np.random.Generator(np.random.PCG64(mutate_seq))


def mutate_one_bit(x: VertexSet, rng: np.random.Generator) -> VertexSet:
    y = x.copy()
    i = int(rng.integers(len(x)))
    y[i] = not y[i]
    return y


def mutate_per_bit(x: VertexSet, rng: np.random.Generator) -> VertexSet:
    # Ноль флипов допустим: потомок равен родителю и просто тратит итерацию
    flips = rng.random(len(x)) < 1.0 / len(x)
    return x ^ flips


MUTATIONS = {
    Algorithm.SEMO: mutate_one_bit,
    Algorithm.GSEMO: mutate_per_bit,
}


# ==========================================
# ОСНОВНОЙ ЦИКЛ
# ==========================================

def run(g: Graph, cfg: RunConfig) -> RunReport:
    g.validate_for_solver()
    budget = resolve_budget(cfg.budget, g.n)
    select_rng, mutate_rng = make_streams(cfg.seed)
    mutate = MUTATIONS[cfg.algorithm]

    slog.debug("ENGINE", "RUN_START", f"{cfg.algorithm.value} n={g.n} T={budget} seed={cfg.seed}")
    if g.n == 2:
        slog.warning("ENGINE", "DEGENERATE", "n=2: пустое множество имеет f1 = 2 и доминирует любую CDS, допустимого решения не будет")

    population = Population()
    population.offer(Individual.from_bits(g, np.zeros(g.n, dtype=bool)))

    trace: List[TracePoint] = []
    diagnostics: List[DiagnosticsSnapshot] = []
    first_feasible: Optional[int] = None

    def record(t: int):
        best = population.best_feasible()
        k = None
        if cfg.diagnostics_m is not None:
            evals = population.evaluations()
            diagnostics.append(snapshot(t, evals, g.n, cfg.diagnostics_m, g.max_degree))
            k = diagnostics[-1].potential_k
        trace.append(TracePoint(t, best.eval.f2 if best else None, len(population), k))

    if cfg.trace_every:
        record(0)

    start = time.perf_counter()
    for t in range(1, budget + 1):
        parent = population.choose(select_rng)
        child_bits = mutate(parent.bits, mutate_rng)
        if np.array_equal(child_bits, parent.bits):
            child = Individual(child_bits, parent.eval)
        else:
            child = Individual.from_bits(g, child_bits)

        accepted = population.offer(child) is OfferResult.ACCEPTED
        newly_feasible = accepted and first_feasible is None and child.eval.feasible
        if newly_feasible:
            first_feasible = t
        if cfg.trace_every and (newly_feasible or t % cfg.trace_every == 0):
            record(t)
    wall_time = time.perf_counter() - start

    best = population.best_feasible()
    report = RunReport(
        algorithm=cfg.algorithm,
        seed=cfg.seed,
        budget=budget,
        solution=best.bits.copy() if best else None,
        solution_size=best.eval.f2 if best else None,
        iterations_used=budget,
        first_feasible_iteration=first_feasible,
        wall_time=wall_time,
        trace=trace,
        final_archive=sorted(ev.as_pair() for ev in population.evaluations()),
        diagnostics=diagnostics,
    )
    slog.log_run_event(cfg.algorithm.value, g.n, report)
    return report
