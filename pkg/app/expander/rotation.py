"""
Rotation maps: port-labelled d-regular multigraphs.

rot(v, i) = (u, j) means port i of v leads to u and arrives through port j of u.
The map is an involution, which encodes undirectedness with multiplicity; a
self-loop occupies two ports of the same vertex (or one port that maps to
itself) and contributes its ports to the diagonal of the adjacency matrix.
"""

import json
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from app.utils.exceptions import ExpanderException


@dataclass(frozen=True, eq=False)
class RotationGraph:
    """n vertices, degree d, tables of shape (n, d) for the rotation map."""

    n: int
    d: int
    vertex_table: np.ndarray
    port_table: np.ndarray

    def __post_init__(self):
        if self.n < 1 or self.d < 1:
            raise ExpanderException(f"Rotation graph needs n >= 1 and d >= 1, got n={self.n}, d={self.d}")
        vertices = np.ascontiguousarray(self.vertex_table, dtype=np.int64)
        ports = np.ascontiguousarray(self.port_table, dtype=np.int64)
        if vertices.shape != (self.n, self.d) or ports.shape != (self.n, self.d):
            raise ExpanderException(f"Rotation tables must have shape ({self.n}, {self.d})")
        if vertices.min() < 0 or vertices.max() >= self.n or ports.min() < 0 or ports.max() >= self.d:
            raise ExpanderException("Rotation map points outside the vertex or port range")
        back_vertices = vertices[vertices, ports]
        back_ports = ports[vertices, ports]
        rows = np.arange(self.n)[:, None]
        cols = np.arange(self.d)[None, :]
        if not (np.array_equal(back_vertices, np.broadcast_to(rows, vertices.shape))
                and np.array_equal(back_ports, np.broadcast_to(cols, ports.shape))):
            raise ExpanderException("Rotation map is not an involution")
        vertices.setflags(write=False)
        ports.setflags(write=False)
        object.__setattr__(self, "vertex_table", vertices)
        object.__setattr__(self, "port_table", ports)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RotationGraph):
            return NotImplemented
        return (self.n == other.n and self.d == other.d
                and np.array_equal(self.vertex_table, other.vertex_table)
                and np.array_equal(self.port_table, other.port_table))

    __hash__ = None

    @property
    def port_count(self) -> int:
        return self.n * self.d

    def rot(self, v: int, i: int) -> Tuple[int, int]:
        return int(self.vertex_table[v, i]), int(self.port_table[v, i])

    def neighbors(self, v: int) -> List[int]:
        """Neighbor multiset of v in port order."""
        return [int(u) for u in self.vertex_table[v]]

    def adjacency_matrix(self) -> np.ndarray:
        """Multigraph adjacency: entry (v, u) counts ports of v leading to u."""
        matrix = np.zeros((self.n, self.n), dtype=np.float64)
        rows = np.repeat(np.arange(self.n), self.d)
        np.add.at(matrix, (rows, self.vertex_table.ravel()), 1.0)
        return matrix

    def relabel(self, permutation) -> "RotationGraph":
        """Same multigraph with vertex v renamed permutation[v]."""
        perm = np.asarray(permutation, dtype=np.int64)
        inverse = np.empty_like(perm)
        inverse[perm] = np.arange(self.n)
        vertices = perm[self.vertex_table[inverse]]
        ports = self.port_table[inverse]
        return RotationGraph(self.n, self.d, vertices, ports)


def emit_rotation(h: RotationGraph) -> str:
    """JSON {n, d, rot: [[v, port], ...]} in row-major (vertex, port) order."""
    rot = np.stack([h.vertex_table.ravel(), h.port_table.ravel()], axis=1).tolist()
    return json.dumps({"d": h.d, "n": h.n, "rot": rot}, separators=(",", ":")) + "\n"


def parse_rotation(text: str) -> RotationGraph:
    try:
        payload = json.loads(text)
        n, d, rot = int(payload["n"]), int(payload["d"]), payload["rot"]
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
        raise ExpanderException(f"Rotation JSON is malformed: {e}")
    table = np.asarray(rot, dtype=np.int64)
    if table.shape != (n * d, 2):
        raise ExpanderException(f"Rotation JSON lists {len(rot)} entries, expected n*d = {n * d}")
    return RotationGraph(n, d, table[:, 0].reshape(n, d), table[:, 1].reshape(n, d))
