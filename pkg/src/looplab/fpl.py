"""Fully packed loop configurations on grids and boundary patches.

Vertices are ``(row, col)`` with 1-based indices, row 1 on top.  Every edge is
named by a triple ``(row, col, direction)``:

* ``(r, c, "E")`` joins ``(r, c)`` to ``(r, c + 1)``; on the last column it is
  the external edge sticking out to the right.
* ``(r, c, "S")`` joins ``(r, c)`` to ``(r + 1, c)``; on the last row it is
  the external edge sticking out of the bottom.
* ``(1, c, "N")`` and ``(r, 1, "W")`` are the external edges on the top and
  left sides.

So every vertex has exactly four incident edges and an FPL configuration is a
set of edges meeting every vertex exactly twice.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, Mapping, Sequence

from .links import BAR, CLOSE, OPEN, Sector, is_valid, pattern_key
from .poly import ZERO, MultiPoly

Edge = tuple[int, int, str]

FORMAT_VERSION = 1
WORKERS_ENV = "LOOPLAB_WORKERS"


class Constraint(str, Enum):
    FORCED_OCCUPIED = "occupied"
    FORCED_EMPTY = "empty"
    FREE = "free"


OCC, EMPTY, FREE = Constraint.FORCED_OCCUPIED, Constraint.FORCED_EMPTY, Constraint.FREE


class InconsistentSpec(ValueError):
    pass


# -- grid geometry ----------------------------------------------------------

def incident_edges(r: int, c: int) -> tuple[Edge, Edge, Edge, Edge]:
    """The ``N, W, E, S`` edges at vertex ``(r, c)``."""
    north = (r - 1, c, "S") if r > 1 else (1, c, "N")
    west = (r, c - 1, "E") if c > 1 else (r, 1, "W")
    return north, west, (r, c, "E"), (r, c, "S")


def grid_edges(rows: int, cols: int) -> list[Edge]:
    """All edges of a ``rows x cols`` grid, external ones included, in a fixed order."""
    out: list[Edge] = [(1, c, "N") for c in range(1, cols + 1)]
    for r in range(1, rows + 1):
        out.append((r, 1, "W"))
        for c in range(1, cols + 1):
            out.append((r, c, "E"))
        for c in range(1, cols + 1):
            out.append((r, c, "S"))
    return out


def is_external(edge: Edge, rows: int, cols: int) -> bool:
    r, c, d = edge
    return d in "NW" or (d == "E" and c == cols) or (d == "S" and r == rows)


def edge_side(edge: Edge, rows: int, cols: int) -> str | None:
    """``"top"``, ``"left"``, ``"right"``, ``"bottom"`` for external edges, else None."""
    r, c, d = edge
    if d == "N":
        return "top"
    if d == "W":
        return "left"
    if d == "E" and c == cols:
        return "right"
    if d == "S" and r == rows:
        return "bottom"
    return None


def side_edges(side: str, rows: int, cols: int) -> list[Edge]:
    """External edges of one side: top and bottom left to right, left and right top to bottom."""
    if side == "top":
        return [(1, c, "N") for c in range(1, cols + 1)]
    if side == "bottom":
        return [(rows, c, "S") for c in range(1, cols + 1)]
    if side == "left":
        return [(r, 1, "W") for r in range(1, rows + 1)]
    if side == "right":
        return [(r, cols, "E") for r in range(1, rows + 1)]
    raise ValueError(f"unknown side {side!r}")


def midpoint(edge: Edge) -> tuple[int, int]:
    """Edge midpoint in doubled coordinates (vertex ``(r, c)`` sits at ``(2r, 2c)``)."""
    r, c, d = edge
    if d == "N":
        return 1, 2 * c
    if d == "W":
        return 2 * r, 1
    if d == "E":
        return 2 * r, 2 * c + 1
    return 2 * r + 1, 2 * c


def from_midpoint(y: int, x: int) -> Edge:
    if y % 2 == 0:
        return (y // 2, 1, "W") if x == 1 else (y // 2, (x - 1) // 2, "E")
    return (1, x // 2, "N") if y == 1 else ((y - 1) // 2, x // 2, "S")


# -- statistics -------------------------------------------------------------

@dataclass(frozen=True)
class StatDef:
    """A boundary statistic: occupied ``edges`` plus vertices in ``straight``.

    A ``straight`` entry ``(r, c, axis)`` counts when the vertex carries a
    straight segment along ``axis`` (``"v"`` or ``"h"``).
    """

    label: str
    edges: tuple[Edge, ...] = ()
    straight: tuple[tuple[int, int, str], ...] = ()

    def value(self, occupied: frozenset[Edge] | set[Edge]) -> int:
        n = sum(1 for e in self.edges if e in occupied)
        for r, c, axis in self.straight:
            north, west, east, south = incident_edges(r, c)
            pair = (north, south) if axis == "v" else (west, east)
            if pair[0] in occupied and pair[1] in occupied:
                n += 1
        return n

    def to_json(self) -> dict:
        return {"label": self.label, "edges": [list(e) for e in self.edges],
                "straight": [list(s) for s in self.straight]}

    @classmethod
    def from_json(cls, data: Mapping) -> "StatDef":
        return cls(data["label"], tuple(tuple(e) for e in data.get("edges", ())),
                   tuple(tuple(s) for s in data.get("straight", ())))


# -- patch specs ------------------------------------------------------------

@dataclass(frozen=True)
class PatchSpec:
    """Grid size, per-edge constraints, statistics and terminals of a patch.

    ``boundary`` is the symbol written for a terminal whose path leaves through
    a non-terminal external edge: ``")"`` for one boundary, ``"|"`` for two.
    ``ties`` pairs an external edge with an edge of the same vertex whose
    value it must copy (used for mirror-symmetric searches).
    """

    rows: int
    cols: int
    edge_constraints: Mapping[Edge, Constraint]
    stat_defs: Mapping[str, StatDef] = field(default_factory=dict)
    terminal_labels: tuple[Edge, ...] = ()
    boundary: str = CLOSE
    ties: Mapping[Edge, Edge] = field(default_factory=dict)
    name: str = ""

    def __post_init__(self) -> None:
        edges = grid_edges(self.rows, self.cols)
        if set(self.edge_constraints) != set(edges) or len(self.edge_constraints) != len(edges):
            raise InconsistentSpec("edge_constraints must list every edge exactly once")
        for t in self.terminal_labels:
            if not is_external(t, self.rows, self.cols) or self.edge_constraints[t] is not OCC:
                raise InconsistentSpec(f"terminal {t} is not a forced-occupied external edge")
        if len(set(self.terminal_labels)) != len(self.terminal_labels):
            raise InconsistentSpec("duplicate terminal")
        if self.boundary not in (CLOSE, BAR):
            raise InconsistentSpec(f"boundary symbol must be ')' or '|', got {self.boundary!r}")
        for ext, partner in self.ties.items():
            if self.edge_constraints[ext] is not FREE:
                raise InconsistentSpec(f"tied edge {ext} must be FREE")
        for r in range(1, self.rows + 1):
            for c in range(1, self.cols + 1):
                states = [self.edge_constraints[e] for e in incident_edges(r, c)]
                if states.count(OCC) > 2 or states.count(EMPTY) > 2:
                    raise InconsistentSpec(f"vertex {(r, c)} cannot have degree 2")

    @property
    def L(self) -> int:
        return len(self.terminal_labels)

    @property
    def sector(self) -> Sector:
        return Sector.LP0 if self.boundary == CLOSE else Sector.LPSTAR

    def edges(self) -> list[Edge]:
        return grid_edges(self.rows, self.cols)

    def to_json(self) -> dict:
        return {
            "format": "looplab-patch",
            "version": FORMAT_VERSION,
            "name": self.name,
            "rows": self.rows,
            "cols": self.cols,
            "boundary": self.boundary,
            "edge_constraints": [[*e, self.edge_constraints[e].value] for e in self.edges()],
            "stat_defs": {k: v.to_json() for k, v in sorted(self.stat_defs.items())},
            "terminal_labels": [list(t) for t in self.terminal_labels],
            "ties": [[*k, *v] for k, v in sorted(self.ties.items())],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "PatchSpec":
        if data.get("format") != "looplab-patch":
            raise ValueError("not a looplab patch file")
        if data.get("version") != FORMAT_VERSION:
            raise ValueError(f"unsupported patch format version {data.get('version')!r}")
        constraints = {(r, c, d): Constraint(s) for r, c, d, s in data["edge_constraints"]}
        ties = {(t[0], t[1], t[2]): (t[3], t[4], t[5]) for t in data.get("ties", [])}
        return cls(
            rows=data["rows"],
            cols=data["cols"],
            edge_constraints=constraints,
            stat_defs={k: StatDef.from_json(v) for k, v in data.get("stat_defs", {}).items()},
            terminal_labels=tuple(tuple(t) for t in data.get("terminal_labels", [])),
            boundary=data.get("boundary", CLOSE),
            ties=ties,
            name=data.get("name", ""),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)

    @classmethod
    def loads(cls, text: str) -> "PatchSpec":
        return cls.from_json(json.loads(text))

    def save(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.dumps() + "\n")

    @classmethod
    def load(cls, path) -> "PatchSpec":
        with open(path) as fh:
            return cls.loads(fh.read())


@dataclass(frozen=True)
class FplConfig:
    occupied: frozenset[Edge]

    def edge_list(self) -> list[Edge]:
        return sorted(self.occupied)

    def is_valid_on(self, spec: PatchSpec) -> bool:
        for e, state in spec.edge_constraints.items():
            if state is OCC and e not in self.occupied:
                return False
            if state is EMPTY and e in self.occupied:
                return False
        if not self.occupied <= set(spec.edge_constraints):
            return False
        for r in range(1, spec.rows + 1):
            for c in range(1, spec.cols + 1):
                if sum(e in self.occupied for e in incident_edges(r, c)) != 2:
                    return False
        return True


# -- enumeration ------------------------------------------------------------

class _Search:
    """Row-major depth-first search; one vertex decides its undecided edges."""

    def __init__(self, spec: PatchSpec):
        self.spec = spec
        self.edges = spec.edges()
        self.index = {e: i for i, e in enumerate(self.edges)}
        self.forced = [
            1 if spec.edge_constraints[e] is OCC else 0 if spec.edge_constraints[e] is EMPTY else -1
            for e in self.edges
        ]
        self.tie = {self.index[k]: self.index[v] for k, v in spec.ties.items()}
        self.vertices = [(r, c) for r in range(1, spec.rows + 1) for c in range(1, spec.cols + 1)]
        self.incident = [[self.index[e] for e in incident_edges(r, c)] for r, c in self.vertices]
        # edges first touched at each vertex, in N, W, E, S order
        seen: set[int] = set()
        self.new_edges: list[list[int]] = []
        for inc in self.incident:
            fresh = [i for i in inc if i not in seen]
            seen.update(fresh)
            self.new_edges.append(fresh)
        # vertex index each edge leads to next (for look-ahead pruning)
        self.neighbours: list[list[int]] = [[] for _ in self.edges]
        for v, inc in enumerate(self.incident):
            for i in inc:
                self.neighbours[i].append(v)

    def _choices(self, v: int, state: list[int]) -> Iterator[tuple[int, ...]]:
        fresh = self.new_edges[v]
        fixed = sum(state[i] for i in self.incident[v] if i not in fresh)
        need = 2 - fixed
        options: list[tuple[int, ...]] = [()]
        for i in fresh:
            if i in self.tie:
                vals: tuple[int, ...] = (state[self.tie[i]],)
            elif self.forced[i] >= 0:
                vals = (self.forced[i],)
            else:
                vals = (0, 1)
            options = [o + (x,) for o in options for x in vals]
        for o in options:
            if sum(o) == need:
                yield o

    def _feasible(self, v: int, state: list[int]) -> bool:
        # every later vertex touched by this one must still be able to reach degree 2
        for i in self.new_edges[v]:
            for w in self.neighbours[i]:
                if w <= v:
                    continue
                known = 0
                open_ = 0
                for j in self.incident[w]:
                    if state[j] >= 0:
                        known += state[j]
                    elif self.forced[j] >= 0:
                        known += self.forced[j]
                    else:
                        open_ += 1
                if known > 2 or known + open_ < 2:
                    return False
        return True

    def run(self, v: int, state: list[int]) -> Iterator[tuple[int, ...]]:
        if v == len(self.vertices):
            yield tuple(state)
            return
        fresh = self.new_edges[v]
        for choice in self._choices(v, state):
            for i, x in zip(fresh, choice):
                state[i] = x
            if self._feasible(v, state):
                yield from self.run(v + 1, state)
        for i in fresh:
            state[i] = -1

    def first_branches(self) -> list[list[int]]:
        state = [-1] * len(self.edges)
        out = []
        for choice in self._choices(0, state):
            s = list(state)
            for i, x in zip(self.new_edges[0], choice):
                s[i] = x
            if self._feasible(0, s):
                out.append(s)
        return out

    def to_config(self, bits: Sequence[int]) -> FplConfig:
        return FplConfig(frozenset(e for e, x in zip(self.edges, bits) if x))


def _subtree(args: tuple[PatchSpec, list[int]]) -> list[tuple[int, ...]]:
    spec, state = args
    return list(_Search(spec).run(1, state))


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def enumerate_fpl(spec: PatchSpec, workers: int | None = None) -> list[FplConfig]:
    """All FPL configurations respecting ``spec``, in a canonical order.

    With more than one worker the subtrees below the first vertex run in
    separate processes; the merged result is sorted, so the output does not
    depend on the worker count.
    """
    search = _Search(spec)
    workers = worker_count() if workers is None else workers
    if workers > 1:
        branches = search.first_branches()
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(_subtree, [(spec, b) for b in branches])
            bits = [x for part in parts for x in part]
    else:
        bits = list(search.run(0, [-1] * len(search.edges)))
    bits.sort(reverse=True)
    return [search.to_config(b) for b in bits]


# -- connectivity and weights ----------------------------------------------

def _other_end(edge: Edge, vertex: tuple[int, int]) -> tuple[int, int] | None:
    r, c, d = edge
    if d == "E":
        ends = [(r, c), (r, c + 1)]
    elif d == "S":
        ends = [(r, c), (r + 1, c)]
    else:
        return None
    ends.remove(vertex)
    return ends[0]


def follow_path(c: FplConfig, spec: PatchSpec, start: Edge) -> Edge:
    """External edge reached by walking the loop that enters through ``start``."""
    vertex = start[0], start[1]
    came = start
    rows, cols = spec.rows, spec.cols
    for _ in range(4 * rows * cols + 4):
        out = [e for e in incident_edges(*vertex) if e in c.occupied and e != came]
        if len(out) != 1:
            raise ValueError(f"configuration is not fully packed at {vertex}")
        nxt = out[0]
        if is_external(nxt, rows, cols):
            return nxt
        vertex = _other_end(nxt, vertex)
        came = nxt
    raise ValueError("path does not terminate")


def extract_connectivity(c: FplConfig, spec: PatchSpec) -> str:
    """Link pattern read off the terminals of a patch configuration."""
    terminals = spec.terminal_labels
    pos = {t: i for i, t in enumerate(terminals)}
    chars = [""] * len(terminals)
    for i, t in enumerate(terminals):
        if chars[i]:
            continue
        end = follow_path(c, spec, t)
        if end in pos:
            j = pos[end]
            lo, hi = min(i, j), max(i, j)
            chars[lo], chars[hi] = OPEN, CLOSE
        else:
            chars[i] = spec.boundary
    word = "".join(chars)
    if not is_valid(word, spec.sector):
        raise ValueError(f"connectivity {word!r} is not a valid {spec.sector.value} pattern")
    return word


def boundary_statistics(c: FplConfig, spec: PatchSpec) -> tuple[int, int]:
    v_def = spec.stat_defs.get("vertical_top")
    h_def = spec.stat_defs.get("horizontal_last_column")
    v = v_def.value(c.occupied) if v_def else 0
    h = h_def.value(c.occupied) if h_def else 0
    return v, h


def config_weight(c: FplConfig, spec: PatchSpec) -> MultiPoly:
    v, h = boundary_statistics(c, spec)
    return MultiPoly({(v // 2, h // 2): 1})


GeneratingVector = dict


def generating_vector(spec: PatchSpec, configs: Iterable[FplConfig] | None = None) -> dict[str, MultiPoly]:
    """Sum of configuration weights per connectivity, keys in canonical pattern order."""
    if configs is None:
        configs = enumerate_fpl(spec)
    acc: dict[str, MultiPoly] = {}
    for c in configs:
        word = extract_connectivity(c, spec)
        acc[word] = acc.get(word, ZERO) + config_weight(c, spec)
    return {k: acc[k] for k in sorted(acc, key=pattern_key)}


def generating_vector_records(vec: Mapping[str, MultiPoly]) -> dict[str, str]:
    return {k: str(v) for k, v in vec.items()}


# -- full grids -------------------------------------------------------------

def fullgrid_constraint(edge: Edge, n: int) -> Constraint:
    """Standard external convention on an ``n x n`` grid, ``n`` odd.

    Left and right: the edge at row ``k`` is occupied iff ``k`` is odd.
    Top and bottom: the edge at column ``k`` is occupied iff ``k`` is even.
    Internal edges are free.
    """
    side = edge_side(edge, n, n)
    if side is None:
        return FREE
    r, c, _ = edge
    if side in ("left", "right"):
        return OCC if r % 2 == 1 else EMPTY
    return OCC if c % 2 == 0 else EMPTY


def full_grid_spec(n: int) -> PatchSpec:
    if n < 1 or n % 2 == 0:
        raise ValueError("full grids need odd n >= 1")
    constraints = {e: fullgrid_constraint(e, n) for e in grid_edges(n, n)}
    return PatchSpec(n, n, constraints, name=f"full-{n}")


def mirror_edge(edge: Edge, n: int, vertical: bool) -> Edge:
    """Image of an edge under the left-right (``vertical=True``) or up-down mirror."""
    y, x = midpoint(edge)
    if vertical:
        x = 2 * (n + 1) - x
    else:
        y = 2 * (n + 1) - y
    return from_midpoint(y, x)


def quadrant_spec(n: int) -> PatchSpec:
    """Top-left quadrant (centre row and column included) with mirror ties."""
    if n < 3 or n % 2 == 0:
        raise ValueError("symmetric grids need odd n >= 3")
    m = (n + 1) // 2
    constraints: dict[Edge, Constraint] = {}
    ties: dict[Edge, Edge] = {}
    for e in grid_edges(m, m):
        side = edge_side(e, m, m)
        if side in ("top", "left"):
            constraints[e] = fullgrid_constraint(e, n)
        else:
            constraints[e] = FREE
            r, c, _ = e
            if side == "right":
                ties[e] = incident_edges(r, c)[1]
            elif side == "bottom":
                ties[e] = incident_edges(r, c)[0]
    return PatchSpec(m, m, constraints, ties=ties, name=f"quadrant-{n}")


def _expand_quadrant(c: FplConfig, n: int) -> FplConfig:
    m = (n + 1) // 2
    full: set[Edge] = set()
    for e in c.occupied:
        if edge_side(e, m, m) in ("right", "bottom"):
            continue  # mirror copies of edges already present
        for img in (e, mirror_edge(e, n, True)):
            full.add(img)
            full.add(mirror_edge(img, n, False))
    return FplConfig(frozenset(full))


def enumerate_symmetric_fullgrid(n: int, workers: int | None = None) -> list[FplConfig]:
    """FPL configurations on the full ``n x n`` grid invariant under both mirrors.

    The search runs on one quadrant; the mirror ties make the centre row and
    column consistent with their reflections.
    """
    quads = enumerate_fpl(quadrant_spec(n), workers)
    full = [_expand_quadrant(c, n) for c in quads]
    key = {e: i for i, e in enumerate(grid_edges(n, n))}
    full.sort(key=lambda c: sorted(key[e] for e in c.occupied))
    return full


def is_symmetric(c: FplConfig, n: int) -> bool:
    return all(mirror_edge(e, n, True) in c.occupied and mirror_edge(e, n, False) in c.occupied
               for e in c.occupied)


def fullgrid_to_patch(c: FplConfig, n: int, spec: PatchSpec) -> FplConfig:
    """Restrict a symmetric configuration on an ``n = 2L + 3`` grid to the one-boundary patch.

    The patch is the ``L x L`` block in rows ``L+3 .. 2L+2`` and columns
    ``2 .. L+1``; when the grid convention puts the complementary occupation on
    that block, edges are complemented.
    """
    L = (n - 3) // 2
    if spec.rows != L or spec.cols != L:
        raise ValueError("patch size does not match the grid")
    dy, dx = 2 * (L + 2), 2
    occupied = set()
    for e in spec.edges():
        y, x = midpoint(e)
        if from_midpoint(y + dy, x + dx) in c.occupied:
            occupied.add(e)
    direct = FplConfig(frozenset(occupied))
    if direct.is_valid_on(spec):
        return direct
    flipped = FplConfig(frozenset(set(spec.edges()) - occupied))
    if flipped.is_valid_on(spec):
        return flipped
    raise ValueError("configuration does not restrict to the patch")
