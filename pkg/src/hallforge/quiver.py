"""Quivers, their Cartan matrix and the Euler form on Z^I."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from .errors import QuiverSchemaError

DimVec = tuple[int, ...]


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[tuple[int, int], ...]

    def __post_init__(self):
        n = len(self.vertices)
        if len(set(self.vertices)) != n:
            raise QuiverSchemaError("vertex labels must be unique")
        for s, t in self.arrows:
            if not (0 <= s < n and 0 <= t < n):
                raise QuiverSchemaError(f"arrow ({s}, {t}) references a missing vertex")
            if s == t:
                raise QuiverSchemaError(
                    f"loop at vertex {self.vertices[s]!r}: "
                    "ıquantum-group layer requires loopless quivers"
                )

    @classmethod
    def from_labels(cls, vertices: Sequence[str], arrows: Sequence[tuple[str, str]]) -> Quiver:
        vertices = tuple(str(v) for v in vertices)
        index = {v: i for i, v in enumerate(vertices)}
        if len(index) != len(vertices):
            raise QuiverSchemaError("vertex labels must be unique")
        try:
            arr = tuple((index[str(s)], index[str(t)]) for s, t in arrows)
        except KeyError as exc:
            raise QuiverSchemaError(f"arrow references unknown vertex {exc.args[0]!r}") from None
        return cls(vertices, arr)

    @property
    def n(self) -> int:
        return len(self.vertices)

    def index(self, label: str) -> int:
        try:
            return self.vertices.index(label)
        except ValueError:
            raise KeyError(f"no vertex labelled {label!r}") from None

    def unit(self, i: int) -> DimVec:
        return tuple(int(k == i) for k in range(self.n))

    def edge_count(self, i: int, j: int) -> int:
        """Edges between i and j in the underlying graph, orientation ignored."""
        return sum(1 for s, t in self.arrows if {s, t} == {i, j})

    def cartan_entry(self, i: int, j: int) -> int:
        if i == j:
            return 2
        return -self.edge_count(i, j)

    def cartan_matrix(self) -> list[list[int]]:
        return [[self.cartan_entry(i, j) for j in range(self.n)] for i in range(self.n)]

    def euler_form(self, a: Sequence[int], b: Sequence[int]) -> int:
        """``sum_i a_i b_i - sum_{arrows s->t} a_s b_t``."""
        return sum(x * y for x, y in zip(a, b)) - sum(a[s] * b[t] for s, t in self.arrows)

    def has_oriented_cycle(self) -> bool:
        succ = {i: [t for s, t in self.arrows if s == i] for i in range(self.n)}
        state = [0] * self.n  # 0 new, 1 on stack, 2 done

        def visit(u: int) -> bool:
            state[u] = 1
            for w in succ[u]:
                if state[w] == 1 or (state[w] == 0 and visit(w)):
                    return True
            state[u] = 2
            return False

        return any(state[u] == 0 and visit(u) for u in range(self.n))

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "arrows": [[self.vertices[s], self.vertices[t]] for s, t in self.arrows],
        }


def parse_quiver(text: str | dict) -> Quiver:
    """Build a Quiver from its JSON document (string or already-decoded dict)."""
    if isinstance(text, str):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise QuiverSchemaError(f"invalid JSON: {exc}") from None
    else:
        doc = text
    if not isinstance(doc, dict) or set(doc) != {"vertices", "arrows"}:
        raise QuiverSchemaError('expected an object with exactly "vertices" and "arrows"')
    vertices, arrows = doc["vertices"], doc["arrows"]
    if not isinstance(vertices, list) or not all(isinstance(v, str) for v in vertices):
        raise QuiverSchemaError('"vertices" must be a list of strings')
    if not isinstance(arrows, list) or not all(
        isinstance(a, list) and len(a) == 2 and all(isinstance(x, str) for x in a) for a in arrows
    ):
        raise QuiverSchemaError('"arrows" must be a list of [source, target] label pairs')
    return Quiver.from_labels(vertices, [tuple(a) for a in arrows])


def add_dims(*vecs: Sequence[int]) -> DimVec:
    return tuple(sum(c) for c in zip(*vecs))


def sub_dims(a: Sequence[int], b: Sequence[int]) -> DimVec:
    return tuple(x - y for x, y in zip(a, b))


def scale_dims(k: int, a: Sequence[int]) -> DimVec:
    return tuple(k * x for x in a)


# Small named quivers used throughout the test-suite and the CLI examples.
def a_n(n: int, reverse: bool = False) -> Quiver:
    labels = [str(i + 1) for i in range(n)]
    arrows = [(i + 1, i) if reverse else (i, i + 1) for i in range(n - 1)]
    return Quiver(tuple(labels), tuple(arrows))


def kronecker(m: int = 2) -> Quiver:
    return Quiver(("1", "2"), tuple((0, 1) for _ in range(m)))
