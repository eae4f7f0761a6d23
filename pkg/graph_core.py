"""
Graph Core v1.0

Представление графа и функции подсчёта компонент, из которых строятся все целевые функции:
- p(C) - число компонент связности индуцированного подграфа G[C]
- q(C) - число компонент остовного подграфа G<C> (все вершины V, только рёбра, задевающие C)
- is_cds - прямая проверка определения CDS (независима от f1)

Вершины снаружи нумеруются 1..n (как v1..vn), внутри 0..n-1.
Множество вершин - булев numpy-вектор длины n.

Формат файла графа:
    # комментарий
    n m
    u v        (m строк, 1 <= u < v <= n)
"""

from collections import deque
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

VertexSet = np.ndarray


class GraphError(ValueError):
    """Невалидный граф, файл графа или граф, непригодный для солвера"""


class Graph:
    """
    Неизменяемый простой неориентированный граф.

    Связность не требуется для создания (нужна для тестов is_connected),
    солверы вызывают validate_for_solver().
    """

    __slots__ = ("_n", "_edges", "_eu", "_ev", "_adj", "_max_degree")

    def __init__(self, n: int, edges: Iterable[Tuple[int, int]]):
        if n < 1:
            raise GraphError(f"n должно быть >= 1, получено {n}")

        normalized = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise GraphError(f"Петля в вершине {u}")
            if not (1 <= u <= n and 1 <= v <= n):
                raise GraphError(f"Ребро ({u}, {v}) вне диапазона 1..{n}")
            key = (min(u, v), max(u, v))
            if key in normalized:
                raise GraphError(f"Кратное ребро ({key[0]}, {key[1]})")
            normalized.add(key)

        self._n = n
        self._edges = tuple(sorted(normalized))
        self._eu = np.fromiter((u - 1 for u, _ in self._edges), dtype=np.int64, count=len(self._edges))
        self._ev = np.fromiter((v - 1 for _, v in self._edges), dtype=np.int64, count=len(self._edges))

        adj: List[List[int]] = [[] for _ in range(n)]
        for u, v in self._edges:
            adj[u - 1].append(v - 1)
            adj[v - 1].append(u - 1)
        self._adj = tuple(tuple(a) for a in adj)
        self._max_degree = max((len(a) for a in self._adj), default=0)

    # ==========================================
    # Конструкторы
    # ==========================================

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]]) -> "Graph":
        return cls(n, edges)

    @classmethod
    def from_networkx(cls, nx_graph) -> "Graph":
        """Перенумеровывает узлы networkx-графа в 1..n в отсортированном порядке"""
        nodes = sorted(nx_graph.nodes())
        index = {node: i + 1 for i, node in enumerate(nodes)}
        return cls(len(nodes), ((index[u], index[v]) for u, v in nx_graph.edges()))

    def to_networkx(self):
        import networkx as nx

        g = nx.Graph()
        g.add_nodes_from(range(1, self._n + 1))
        g.add_edges_from(self._edges)
        return g

    # ==========================================
    # Доступ
    # ==========================================

    @property
    def n(self) -> int:
        return self._n

    @property
    def m(self) -> int:
        """Число рёбер (не путать с m - размером минимального CDS)"""
        return len(self._edges)

    @property
    def edges(self) -> Tuple[Tuple[int, int], ...]:
        """Рёбра (u, v), u < v, 1-индексация, отсортированы"""
        return self._edges

    @property
    def max_degree(self) -> int:
        return self._max_degree

    @property
    def adj(self) -> Tuple[Tuple[int, ...], ...]:
        """Списки соседей, 0-индексация (внутренний доступ)"""
        return self._adj

    @property
    def edge_arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        """Концы рёбер двумя массивами, 0-индексация"""
        return self._eu, self._ev

    def neighbors(self, v: int) -> List[int]:
        """Соседи вершины v, 1-индексация"""
        return [w + 1 for w in self._adj[v - 1]]

    def degree(self, v: int) -> int:
        return len(self._adj[v - 1])

    def validate_for_solver(self):
        """Солверы требуют n >= 2 и связный граф"""
        if self._n < 2:
            raise GraphError(f"Нужно n >= 2, получено n={self._n}")
        if not is_connected(self):
            raise GraphError("Граф несвязный")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self._n, self._edges))

    def __getstate__(self):
        return {"n": self._n, "edges": self._edges}

    def __setstate__(self, state):
        # Пересобираем через __init__ (slots без __dict__)
        self.__init__(state["n"], state["edges"])

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, m={self.m}, max_degree={self._max_degree})"


# ==========================================
# Множества вершин
# ==========================================

def vertex_set(n: int, members: Iterable[int] = ()) -> VertexSet:
    """Булев вектор длины n из 1-индексированных вершин"""
    bits = np.zeros(n, dtype=bool)
    for v in members:
        if not 1 <= v <= n:
            raise GraphError(f"Вершина {v} вне диапазона 1..{n}")
        bits[v - 1] = True
    return bits


def members_of(bits: VertexSet) -> List[int]:
    """Вершины множества, 1-индексация, по возрастанию"""
    return [int(i) + 1 for i in np.flatnonzero(bits)]


def set_size(bits: VertexSet) -> int:
    return int(np.count_nonzero(bits))


def closed_neighborhood_masks(g: Graph) -> List[int]:
    """N[v] как битовые маски python-int (бит i = вершина i+1)"""
    masks = []
    for v, nbrs in enumerate(g.adj):
        mask = 1 << v
        for w in nbrs:
            mask |= 1 << w
        masks.append(mask)
    return masks


# ==========================================
# p(C), q(C)
# ==========================================

def _count_components(n: int, rows: np.ndarray, cols: np.ndarray) -> int:
    mat = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))
    count, _ = connected_components(mat, directed=False)
    return int(count)


def component_count_induced(g: Graph, c: VertexSet) -> int:
    """p(C): компоненты G[C]; p(∅) = 0"""
    c = np.asarray(c, dtype=bool)
    size = int(np.count_nonzero(c))
    if size == 0:
        return 0
    eu, ev = g.edge_arrays
    inside = c[eu] & c[ev]
    # Вершины вне C остаются одиночками и вычитаются
    return _count_components(g.n, eu[inside], ev[inside]) - (g.n - size)


def component_count_closed(g: Graph, c: VertexSet) -> int:
    """q(C): компоненты остовного подграфа G<C>; q(∅) = n"""
    c = np.asarray(c, dtype=bool)
    if not c.any():
        return g.n
    eu, ev = g.edge_arrays
    touching = c[eu] | c[ev]
    return _count_components(g.n, eu[touching], ev[touching])


# ==========================================
# Связность и проверка CDS
# ==========================================

def _bfs(adj: Sequence[Sequence[int]], start: int, allowed: Optional[Sequence[bool]] = None) -> int:
    """Число вершин, достижимых из start (только по allowed, если задано)"""
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in seen and (allowed is None or allowed[w]):
                seen.add(w)
                queue.append(w)
    return len(seen)


def is_connected(g: Graph) -> bool:
    """Один BFS из вершины 1 обходит все n вершин"""
    return _bfs(g.adj, 0) == g.n


def is_cds(g: Graph, c: VertexSet) -> bool:
    """
    Прямая проверка по определению: C непусто, доминирует V \\ C
    и индуцирует связный подграф. Не использует p/q.
    """
    c = np.asarray(c, dtype=bool)
    chosen = [int(i) for i in np.flatnonzero(c)]
    if not chosen:
        return False

    for v in range(g.n):
        if not c[v] and not any(c[w] for w in g.adj[v]):
            return False

    return _bfs(g.adj, chosen[0], allowed=c.tolist()) == len(chosen)


# ==========================================
# Чтение / запись
# ==========================================

def parse_graph(text: str, source: str = "<text>") -> Graph:
    """Разбирает текстовый формат графа; ошибки с номером строки"""
    header = None
    edges = []
    for line_num, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphError(f"{source}:{line_num}: ожидалось два числа, получено {line!r}")
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphError(f"{source}:{line_num}: не числа: {line!r}") from None
        if header is None:
            header = (a, b)
        else:
            edges.append((a, b))

    if header is None:
        raise GraphError(f"{source}: нет строки заголовка 'n m'")
    n, m = header
    if len(edges) != m:
        raise GraphError(f"{source}: в заголовке m={m}, а рёбер {len(edges)}")
    try:
        return Graph(n, edges)
    except GraphError as e:
        raise GraphError(f"{source}: {e}") from None


def format_graph(g: Graph, comment: Optional[str] = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {part}" for part in comment.splitlines())
    lines.append(f"{g.n} {g.m}")
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def read_graph(path: Union[str, Path]) -> Graph:
    path = Path(path)
    return parse_graph(path.read_text(encoding="utf-8"), source=str(path))


def write_graph(g: Graph, path: Union[str, Path], comment: Optional[str] = None):
    Path(path).write_text(format_graph(g, comment), encoding="utf-8")


# ==========================================
# Именованные графы
# ==========================================

def path_graph(n: int) -> Graph:
    return Graph(n, ((i, i + 1) for i in range(1, n)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphError(f"Цикл требует n >= 3, получено {n}")
    return Graph(n, [(i, i + 1) for i in range(1, n)] + [(1, n)])


def star_graph(leaves: int) -> Graph:
    """K_{1,leaves}, центр - вершина 1"""
    return Graph(leaves + 1, ((1, i) for i in range(2, leaves + 2)))


def complete_graph(n: int) -> Graph:
    return Graph(n, ((u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)))


def complete_bipartite_graph(a: int, b: int) -> Graph:
    """K_{a,b}: доли 1..a и a+1..a+b"""
    return Graph(a + b, ((u, v) for u in range(1, a + 1) for v in range(a + 1, a + b + 1)))
