"""
shared/wgs/graph.py

Weighted-graph data model and the plain-text graph format.

Graph file format (line-oriented, '#' starts a comment):

    vertices 5
    edge 1 2 0.8pi
    edge 2 3 2.513274
    ...

Weights are radians, either decimal or '<x>pi'. They are normalized to
(-pi, pi] on input; the sign is kept.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

_PI_LITERAL = re.compile(r"^([+-]?(?:\d+(?:\.\d*)?|\.\d+)?|[+-])\s*\*?\s*pi$", re.IGNORECASE)


class GraphParseError(ValueError):
    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


def parse_angle(text: str) -> float:
    """'0.8pi', '-pi', 'pi', '2.5' -> radians."""
    raw = text.strip()
    m = _PI_LITERAL.match(raw)
    if m:
        coeff = m.group(1)
        if coeff in ("", "+"):
            return math.pi
        if coeff == "-":
            return -math.pi
        return float(coeff) * math.pi
    try:
        return float(raw)
    except ValueError:
        raise ValueError(f"Not an angle: {text!r} (use radians or '<x>pi')") from None


def normalize_angle(phi: float) -> float:
    """Map to (-pi, pi]."""
    w = math.remainder(float(phi), 2 * math.pi)
    return math.pi if w <= -math.pi else w


@dataclass(frozen=True)
class Edge:
    a: int
    b: int
    weight: float


@dataclass(frozen=True)
class WeightedGraph:
    num_vertices: int
    edges: tuple[Edge, ...]

    def __init__(self, num_vertices: int, edges: Iterable = ()):
        if num_vertices < 1:
            raise ValueError(f"A graph needs at least one vertex, got {num_vertices}")
        normalized = []
        seen: set[frozenset[int]] = set()
        for edge in edges:
            a, b, w = (edge.a, edge.b, edge.weight) if isinstance(edge, Edge) else edge
            a, b = int(a), int(b)
            if a == b:
                raise ValueError(f"Self-loop on vertex {a}")
            for v in (a, b):
                if not 1 <= v <= num_vertices:
                    raise ValueError(f"Vertex {v} out of range [1, {num_vertices}]")
            key = frozenset((a, b))
            if key in seen:
                raise ValueError(f"Duplicate edge {a}-{b}")
            seen.add(key)
            normalized.append(Edge(a, b, normalize_angle(w)))
        object.__setattr__(self, "num_vertices", int(num_vertices))
        object.__setattr__(self, "edges", tuple(normalized))

    def weight(self, a: int, b: int) -> float:
        for e in self.edges:
            if {e.a, e.b} == {a, b}:
                return e.weight
        raise KeyError(f"No edge {a}-{b}")

    def is_path(self) -> bool:
        """True if the edges are exactly 1-2, 2-3, ..., (N-1)-N."""
        pairs = {frozenset((e.a, e.b)) for e in self.edges}
        expected = {frozenset((v, v + 1)) for v in range(1, self.num_vertices)}
        return pairs == expected

    def to_text(self) -> str:
        lines = [f"vertices {self.num_vertices}"]
        lines += [f"edge {e.a} {e.b} {e.weight!r}" for e in self.edges]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ChainSpec:
    """Uniform 1D chain of 2n + 1 qubits with weight phi."""
    n: int
    phi: float

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"Chain parameter n must be >= 0, got {self.n}")

    @property
    def num_qubits(self) -> int:
        return 2 * self.n + 1

    def graph(self) -> WeightedGraph:
        return path_graph([self.phi] * (2 * self.n))


# ── Constructors ─────────────────────────────────────────────

def path_graph(weights: Sequence[float]) -> WeightedGraph:
    """Chain 1-2-...-(k+1) with the k given edge weights in order."""
    return WeightedGraph(
        len(weights) + 1,
        [(i + 1, i + 2, w) for i, w in enumerate(weights)],
    )


def star_graph(num_vertices: int, phi: float = math.pi) -> WeightedGraph:
    """Vertex 1 is the hub."""
    return WeightedGraph(num_vertices, [(1, v, phi) for v in range(2, num_vertices + 1)])


# ── Text format ──────────────────────────────────────────────

def parse_graph(text: str) -> WeightedGraph:
    num_vertices = None
    edges = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        keyword = parts[0].lower()

        if num_vertices is None:
            if keyword != "vertices" or len(parts) != 2:
                raise GraphParseError(line_no, "expected 'vertices <N>' before any edge")
            try:
                num_vertices = int(parts[1])
            except ValueError:
                raise GraphParseError(line_no, f"vertex count {parts[1]!r} is not an integer") from None
            if num_vertices < 1:
                raise GraphParseError(line_no, "vertex count must be >= 1")
            continue

        if keyword == "vertices":
            raise GraphParseError(line_no, "'vertices' declared twice")
        if keyword != "edge":
            raise GraphParseError(line_no, f"unknown keyword {parts[0]!r}")
        if len(parts) != 4:
            raise GraphParseError(line_no, "expected 'edge <a> <b> <weight>'")
        try:
            a, b = int(parts[1]), int(parts[2])
        except ValueError:
            raise GraphParseError(line_no, "edge endpoints must be integers") from None
        try:
            w = parse_angle(parts[3])
        except ValueError as e:
            raise GraphParseError(line_no, str(e)) from None

        try:
            WeightedGraph(num_vertices, edges + [(a, b, w)])
        except ValueError as e:
            raise GraphParseError(line_no, str(e)) from None
        edges.append((a, b, w))

    if num_vertices is None:
        raise GraphParseError(1, "empty graph file")
    return WeightedGraph(num_vertices, edges)


def load_graph(path: str | Path) -> WeightedGraph:
    return parse_graph(Path(path).read_text(encoding="utf-8"))
