"""
Generators v1.0

Случайные графы для экспериментов:
- BA: старт с кольца v1v2v3v4, каждая новая вершина добавляет 2 ребра к
  существующим, вероятность ∝ степени. Степени фиксируются на начало шага,
  две цели выбираются без возвращения → 2n-4 рёбер, без кратных.
- ER: G(n, p), по умолчанию p = ln(n)/n; пересэмплируем, пока граф не станет
  связным (не больше max_retries попыток).

Детерминированы по seed.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from graph_core import Graph, is_connected
from service_logger import slog

BA_RING_SIZE = 4
BA_EDGES_PER_VERTEX = 2
DEFAULT_MAX_RETRIES = 1000


class GeneratorError(ValueError):
    """Невалидные параметры генератора или исчерпаны попытки"""


class Model(str, Enum):
    BA = "ba"
    ER = "er"


@dataclass(frozen=True)
class GenSpec:
    model: Model
    n: int
    seed: int = 0
    er_p: Optional[float] = None
    ba_m: int = BA_EDGES_PER_VERTEX
    max_retries: int = DEFAULT_MAX_RETRIES

    def __post_init__(self):
        try:
            object.__setattr__(self, "model", Model(self.model))
        except ValueError:
            raise GeneratorError(f"Неизвестная модель {self.model!r}, ожидается ba или er") from None
        if self.model is Model.BA and self.n < BA_RING_SIZE:
            raise GeneratorError(f"BA требует n >= {BA_RING_SIZE}, получено {self.n}")
        if self.model is Model.ER and self.n < 2:
            raise GeneratorError(f"ER требует n >= 2, получено {self.n}")
        if self.ba_m != BA_EDGES_PER_VERTEX:
            raise GeneratorError(f"BA поддерживает только {BA_EDGES_PER_VERTEX} ребра на вершину")
        if self.er_p is not None and not 0 < self.er_p <= 1:
            raise GeneratorError(f"er_p должно быть в (0, 1], получено {self.er_p}")
        if self.max_retries < 1:
            raise GeneratorError(f"max_retries должно быть >= 1, получено {self.max_retries}")
        if self.seed < 0:
            raise GeneratorError(f"seed должен быть >= 0, получено {self.seed}")

    @staticmethod
    def default_er_p(n: int) -> float:
        return min(1.0, math.log(n) / n)

    @property
    def p(self) -> float:
        return self.er_p if self.er_p is not None else self.default_er_p(self.n)

    @property
    def instance_id(self) -> str:
        return f"{self.model.value}-n{self.n}-s{self.seed}"


def gen_ba(spec: GenSpec) -> Graph:
    if spec.model is not Model.BA:
        raise GeneratorError(f"gen_ba получил модель {spec.model.value}")
    rng = np.random.default_rng(spec.seed)

    edges = [(1, 2), (2, 3), (3, 4), (1, 4)]
    degree = np.zeros(spec.n, dtype=np.int64)
    degree[:BA_RING_SIZE] = 2

    for new_vertex in range(BA_RING_SIZE, spec.n):
        weights = degree[:new_vertex] / degree[:new_vertex].sum()
        targets = rng.choice(new_vertex, size=spec.ba_m, replace=False, p=weights)
        for t in targets:
            edges.append((int(t) + 1, new_vertex + 1))
        # Степени обновляем только после обоих выборов
        degree[targets] += 1
        degree[new_vertex] = spec.ba_m

    return Graph(spec.n, edges)


def gen_er_connected(spec: GenSpec) -> Graph:
    if spec.model is not Model.ER:
        raise GeneratorError(f"gen_er_connected получил модель {spec.model.value}")
    rng = np.random.default_rng(spec.seed)
    rows, cols = np.triu_indices(spec.n, k=1)
    p = spec.p

    for attempt in range(1, spec.max_retries + 1):
        keep = rng.random(len(rows)) < p
        g = Graph(spec.n, zip((rows[keep] + 1).tolist(), (cols[keep] + 1).tolist()))
        if is_connected(g):
            if attempt > 1:
                slog.debug("GEN", "ER_RESAMPLED", f"ER n={spec.n}: связный граф с попытки {attempt}",
                           extra={"p": round(p, 6), "seed": spec.seed})
            return g

    raise GeneratorError(
        f"ER n={spec.n}, p={p:.4f}: нет связного графа за {spec.max_retries} попыток (p слишком мало)"
    )


def generate(spec: GenSpec) -> Graph:
    if spec.model is Model.BA:
        return gen_ba(spec)
    return gen_er_connected(spec)
