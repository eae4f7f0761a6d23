"""
Objectives v1.0

Двухкритериальная фитнес-функция (обе минимизируются):
    f1(C) = p(C) + q(C)   - мера допустимости, f1 = 2 ровно для CDS
    f2(C) = |C|           - размер решения

Плюс отношения "лучше / слабо лучше" и диагностика из анализа времени работы:
- is_good_individual - граница f1 <= (n-2-m)(1-1/m)^|x| + m + 2
- potential_k - min f1 по членам архива с |x| + f1 <= m·lnΔ + 2m + 2

Диагностике нужен m (размер минимального CDS), поэтому она подключается
только там, где есть точный оракул (тесты, solve --diagnostics).
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, List, Optional

from graph_core import Graph, VertexSet, component_count_closed, component_count_induced, set_size


@dataclass(frozen=True)
class Evaluation:
    f1: int
    f2: int
    p: int = 0
    q: int = 0

    @classmethod
    def of(cls, f1: int, f2: int) -> "Evaluation":
        """Оценка только по (f1, f2) - для архивов и тестов без графа"""
        return cls(f1=f1, f2=f2)

    @property
    def feasible(self) -> bool:
        # При n = 2 у пустого множества тоже f1 = 2
        return self.f1 == 2 and self.f2 > 0

    def as_pair(self):
        return self.f1, self.f2


class DominanceRelation(str, Enum):
    BETTER = "better"
    WEAKLY_BETTER = "weakly_better"
    INCOMPARABLE = "incomparable"
    EQUAL = "equal"
    WORSE = "worse"
    WEAKLY_WORSE = "weakly_worse"

    @property
    def weakly_better(self) -> bool:
        """a ⪰ b: не хуже ни по одному критерию"""
        return self in (DominanceRelation.BETTER, DominanceRelation.WEAKLY_BETTER, DominanceRelation.EQUAL)

    @property
    def weakly_worse(self) -> bool:
        return self in (DominanceRelation.WORSE, DominanceRelation.WEAKLY_WORSE, DominanceRelation.EQUAL)


def evaluate(g: Graph, c: VertexSet) -> Evaluation:
    p = component_count_induced(g, c)
    q = component_count_closed(g, c)
    return Evaluation(f1=p + q, f2=set_size(c), p=p, q=q)


def compare(a: Evaluation, b: Evaluation) -> DominanceRelation:
    """
    Точная классификация пары при минимизации обоих критериев.

    Для двух критериев "слабо лучше, но не лучше" совпадает с равенством,
    поэтому возвращается одно из BETTER / WORSE / EQUAL / INCOMPARABLE;
    WEAKLY_* остаются для проверок через .weakly_better / .weakly_worse.
    """
    le = a.f1 <= b.f1 and a.f2 <= b.f2
    ge = a.f1 >= b.f1 and a.f2 >= b.f2
    if le and ge:
        return DominanceRelation.EQUAL
    if le:
        return DominanceRelation.BETTER
    if ge:
        return DominanceRelation.WORSE
    return DominanceRelation.INCOMPARABLE


def dominates(a: Evaluation, b: Evaluation) -> bool:
    """a ≻ b"""
    return compare(a, b) is DominanceRelation.BETTER


def weakly_dominates(a: Evaluation, b: Evaluation) -> bool:
    """a ⪰ b"""
    return compare(a, b).weakly_better


# ==========================================
# Диагностика (нужен m)
# ==========================================

def _check_m(m: int):
    if m < 1:
        raise ValueError(f"m должно быть >= 1, получено {m}")


def ratio_bound(max_degree: int) -> float:
    """Гарантированный коэффициент 2 + lnΔ"""
    return 2.0 + math.log(max_degree)


def good_bound(n: int, m: int, size: int) -> float:
    """Правая часть (n-2-m)(1-1/m)^size + m + 2"""
    _check_m(m)
    return (n - 2 - m) * (1.0 - 1.0 / m) ** size + m + 2


def is_good_individual(ev: Evaluation, n: int, m: int) -> bool:
    # Сравнение без допуска: слева целое, погрешность справа много меньше 1
    return ev.f1 <= good_bound(n, m, ev.f2)


def potential_bound(m: int, max_degree: int) -> float:
    """Правая часть m·lnΔ + 2m + 2"""
    _check_m(m)
    if max_degree < 1:
        raise ValueError(f"Δ должно быть >= 1, получено {max_degree}")
    return m * math.log(max_degree) + 2 * m + 2


def potential_k(archive: Iterable[Evaluation], m: int, max_degree: int) -> Optional[int]:
    """min f1 по членам с f2 + f1 <= m·lnΔ + 2m + 2; None, если таких нет"""
    bound = potential_bound(m, max_degree)
    qualifying = [ev.f1 for ev in archive if ev.f2 + ev.f1 <= bound]
    return min(qualifying) if qualifying else None


@dataclass
class DiagnosticsSnapshot:
    iteration: int
    m: int
    potential_k: Optional[int] = None
    good_flags: List[bool] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "iteration": self.iteration,
            "m": self.m,
            "potential_k": self.potential_k,
            "good_flags": list(self.good_flags),
        }


def snapshot(iteration: int, archive: List[Evaluation], n: int, m: int, max_degree: int) -> DiagnosticsSnapshot:
    return DiagnosticsSnapshot(
        iteration=iteration,
        m=m,
        potential_k=potential_k(archive, m, max_degree),
        good_flags=[is_good_individual(ev, n, m) for ev in archive],
    )
