"""
Baselines v1.0

1. greedy_cds - одноэтапный жадный алгоритм: пока f1(C) > 2, добавляем
   v_C = argmax_{v ∉ C} (f1(C) - f1(C ∪ {v})), при равенстве - меньший id.
2. exact_min_cds - точный оракул перебором по возрастанию размера,
   сначала отсекаем по доминированию (битовые маски N[v]), потом связность.
3. verify_greedy_step_bound - для всех C с f1(C) > 2 проверяет шаг v_C:
      (i)  f1(C ∪ {v_C}) <= f1(C) - 1
      (ii) f1(C ∪ {v_C}) <= (1 - 1/m) f1(C) + 2/m + 1
4. check_q_submodularity - эмпирическая проверка, что убывание q от добавления v
   не растёт при расширении множества.
"""

from dataclasses import dataclass
from itertools import combinations
from typing import List, Optional, Tuple

import numpy as np

from config import ORACLE_MAX_N
from graph_core import (
    Graph,
    VertexSet,
    closed_neighborhood_masks,
    component_count_closed,
    members_of,
)
from objectives import evaluate
from service_logger import slog

# Полный перебор 2^n подмножеств для проверок - только маленькие графы
SWEEP_MAX_N = 12
SUBMODULARITY_MAX_N = 8


class OracleLimitError(RuntimeError):
    """Граф слишком большой для перебора"""


@dataclass(frozen=True)
class GreedyStep:
    chosen_vertex: int
    f1_before: int
    f1_after: int


@dataclass
class ExactResult:
    optimum: VertexSet
    m: int
    subsets_examined: int

    @property
    def optimum_members(self) -> List[int]:
        return members_of(self.optimum)


# ==========================================
# GREEDY
# ==========================================

def _greedy_step(g: Graph, bits: VertexSet) -> Tuple[int, int]:
    """(v_C как 0-индекс, f1 после добавления); v_C - наибольшее убывание f1, меньший id при равенстве"""
    best_v, best_f1 = -1, None
    for v in range(g.n):
        if bits[v]:
            continue
        bits[v] = True
        f1 = evaluate(g, bits).f1
        bits[v] = False
        if best_f1 is None or f1 < best_f1:
            best_v, best_f1 = v, f1
    return best_v, best_f1


def greedy_cds(g: Graph) -> Tuple[VertexSet, List[GreedyStep]]:
    g.validate_for_solver()
    bits = np.zeros(g.n, dtype=bool)
    f1 = evaluate(g, bits).f1
    steps: List[GreedyStep] = []

    # При n = 2 старт уже имеет f1 = 2, но пустое множество не CDS
    while f1 > 2 or not bits.any():
        v, f1_after = _greedy_step(g, bits)
        bits[v] = True
        steps.append(GreedyStep(chosen_vertex=v + 1, f1_before=f1, f1_after=f1_after))
        f1 = f1_after

    slog.debug("BASELINE", "GREEDY_DONE", f"greedy n={g.n}: |C|={len(steps)}",
               extra={"order": [s.chosen_vertex for s in steps]})
    return bits, steps


# ==========================================
# ТОЧНЫЙ ОРАКУЛ
# ==========================================

def _connected_mask(subset: int, open_masks: List[int]) -> bool:
    """Связен ли G[S] (S - битовая маска)"""
    reached = subset & -subset
    while True:
        grown = reached
        rest = reached
        while rest:
            low = rest & -rest
            grown |= open_masks[low.bit_length() - 1] & subset
            rest ^= low
        if grown == reached:
            return reached == subset
        reached = grown


def exact_min_cds(g: Graph, max_n: Optional[int] = None) -> ExactResult:
    max_n = ORACLE_MAX_N if max_n is None else max_n
    if g.n > max_n:
        raise OracleLimitError(f"Оракул ограничен n <= {max_n}, получено n={g.n}")
    g.validate_for_solver()

    closed = closed_neighborhood_masks(g)
    open_masks = [mask & ~(1 << v) for v, mask in enumerate(closed)]
    full = (1 << g.n) - 1
    examined = 0

    for k in range(1, g.n + 1):
        for combo in combinations(range(g.n), k):
            examined += 1
            covered = 0
            for v in combo:
                covered |= closed[v]
            if covered != full:
                continue
            subset = 0
            for v in combo:
                subset |= 1 << v
            if _connected_mask(subset, open_masks):
                optimum = np.zeros(g.n, dtype=bool)
                optimum[list(combo)] = True
                slog.debug("BASELINE", "EXACT_DONE", f"exact n={g.n}: m={k}",
                           extra={"subsets_examined": examined})
                return ExactResult(optimum=optimum, m=k, subsets_examined=examined)

    # Недостижимо для связного графа: V - всегда CDS
    raise RuntimeError("CDS не найден")


# ==========================================
# ПРОВЕРКИ ПО ВСЕМ ПОДМНОЖЕСТВАМ
# ==========================================

def _all_subsets(n: int):
    for mask in range(1 << n):
        yield np.array([(mask >> i) & 1 for i in range(n)], dtype=bool)


def verify_greedy_step_bound(g: Graph, m: int) -> bool:
    if g.n > SWEEP_MAX_N:
        raise OracleLimitError(f"Перебор ограничен n <= {SWEEP_MAX_N}, получено n={g.n}")
    if m < 1:
        raise ValueError(f"m должно быть >= 1, получено {m}")

    for bits in _all_subsets(g.n):
        f1 = evaluate(g, bits).f1
        if f1 <= 2:
            continue
        v, f1_after = _greedy_step(g, bits)
        # (ii) умножено на m, чтобы сравнивать целые
        if f1_after > f1 - 1 or m * f1_after > (m - 1) * f1 + 2 + m:
            slog.warning("BASELINE", "GREEDY_STEP_BOUND_FAIL", "Шаг v_C нарушает оценку",
                         extra={"C": members_of(bits), "v": v + 1, "f1": f1, "f1_after": f1_after, "m": m})
            return False
    return True


def check_q_submodularity(g: Graph) -> bool:
    """q(A) - q(A∪{v}) >= q(B) - q(B∪{v}) для всех A ⊆ B, v ∉ B"""
    if g.n > SUBMODULARITY_MAX_N:
        raise OracleLimitError(f"Перебор ограничен n <= {SUBMODULARITY_MAX_N}, получено n={g.n}")

    q = [component_count_closed(g, bits) for bits in _all_subsets(g.n)]
    for b in range(1 << g.n):
        # Все подмаски b
        a = b
        while True:
            for v in range(g.n):
                bit = 1 << v
                if b & bit:
                    continue
                if q[a] - q[a | bit] < q[b] - q[b | bit]:
                    return False
            if a == 0:
                break
            a = (a - 1) & b
    return True
