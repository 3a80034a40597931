"""Construction of 3-graphs from braid-word movies, and the initial D_n graphs.

A graph is compiled from a *movie*: the cyclic boundary word is read as a
ring of pending strands hanging into the disk, and rewrite steps consume
them inward until none remain.

    merge i   two adjacent same-color strands end in a trivalent vertex
              and continue as one strand
    braid i   three adjacent strands matching sigma_i sigma_j sigma_i pass
              a hexavalent vertex and continue as sigma_j sigma_i sigma_j
    arc i     two adjacent same-color strands join and die

Rotation systems fall out of the construction, so compiled graphs are
planar by design; ``validate`` re-certifies every output.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .threegraph import (
    BLUE,
    BOUNDARY,
    HEX,
    RED,
    GraphError,
    ThreeGraph,
    other_color,
    triv_kind,
)


@dataclass(frozen=True)
class Step:
    op: str          # "merge" | "braid" | "arc"
    at: int          # position in the current cyclic word
    name: str = ""   # optional handle for the created vertex


class MovieError(GraphError):
    """A movie step does not apply to the current word."""


class Movie:
    """Compiler state: a cyclic ring of pending strands.

    Each pending strand is (vertex, slot, color): an edge must eventually be
    created whose far half-edge fills ``slot`` of ``vertex``'s rotation.
    """

    def __init__(self, word: Sequence[str]):
        self.kind: dict[int, str] = {}
        self.twin: dict[int, int] = {}
        self.origin: dict[int, int] = {}
        self.color: dict[int, str] = {}
        self.slots: dict[int, list[Optional[int]]] = {}  # vertex -> rotation slots
        self._next_v = 0
        self._next_h = 0
        self.named: dict[str, int] = {}
        self.pend: list[tuple[int, int, str]] = []
        self.boundary: list[int] = []
        for c in word:
            if c not in (BLUE, RED):
                raise MovieError(f"bad color {c!r}")
            v = self._new_vertex(BOUNDARY, 1)
            self.boundary.append(v)
            self.pend.append((v, 0, c))

    # -- infrastructure ----------------------------------------------------

    def _new_vertex(self, kind: str, arity: int, name: str = "") -> int:
        v = self._next_v
        self._next_v += 1
        self.kind[v] = kind
        self.slots[v] = [None] * arity
        if name:
            self.named[name] = v
        return v

    def _connect(self, u: int, uslot: int, w: int, wslot: int, color: str) -> int:
        a, b = self._next_h, self._next_h + 1
        self._next_h += 2
        self.twin[a], self.twin[b] = b, a
        self.origin[a], self.origin[b] = u, w
        self.color[a] = self.color[b] = color
        if self.slots[u][uslot] is not None or self.slots[w][wslot] is not None:
            raise MovieError("rotation slot already filled")
        self.slots[u][uslot] = a
        self.slots[w][wslot] = b
        return min(a, b)

    def _take(self, i: int, count: int) -> list[tuple[int, int, str]]:
        n = len(self.pend)
        if count > n:
            raise MovieError("not enough strands")
        return [self.pend[(i + k) % n] for k in range(count)]

    def _replace(self, i: int, count: int, new: list[tuple[int, int, str]]) -> None:
        n = len(self.pend)
        idxs = sorted(((i + k) % n for k in range(count)), reverse=True)
        for j in idxs:
            del self.pend[j]
        insert_at = i if i + count <= n else 0
        insert_at = min(insert_at, len(self.pend))
        for off, item in enumerate(new):
            self.pend.insert(insert_at + off, item)

    # -- steps ---------------------------------------------------------------

    def merge(self, i: int, name: str = "") -> int:
        (u, us, cu), (w, ws, cw) = self._take(i, 2)
        if cu != cw:
            raise MovieError(f"merge at {i}: colors differ")
        # counterclockwise at the new vertex: down-output, upper-right, upper-left
        v = self._new_vertex(triv_kind(cu), 3, name)
        self._connect(u, us, v, 2, cu)   # left strand -> slot 2 (upper-left)
        self._connect(w, ws, v, 1, cu)   # right strand -> slot 1 (upper-right)
        self._replace(i, 2, [(v, 0, cu)])
        return v

    def braid(self, i: int, name: str = "") -> int:
        (u, us, cu), (w, ws, cw), (x, xs, cx) = self._take(i, 3)
        if not (cu == cx and cw == other_color(cu)):
            raise MovieError(f"braid at {i}: pattern must alternate")
        # counterclockwise: down-right, up-right, up-middle, up-left, down-left, down
        v = self._new_vertex(HEX, 6, name)
        self._connect(u, us, v, 3, cu)   # up-left
        self._connect(w, ws, v, 2, cw)   # up-middle
        self._connect(x, xs, v, 1, cx)   # up-right
        c2 = other_color(cu)
        self._replace(i, 3, [(v, 4, c2), (v, 5, cu), (v, 0, c2)])
        return v

    def arc(self, i: int) -> None:
        (u, us, cu), (w, ws, cw) = self._take(i, 2)
        if cu != cw:
            raise MovieError(f"arc at {i}: colors differ")
        if u == w and us == ws:
            raise MovieError("arc cannot join a strand to itself")
        self._connect(u, us, w, ws, cu)
        self._replace(i, 2, [])

    def run(self, steps: Iterable[Step]) -> None:
        for s in steps:
            if s.op == "merge":
                self.merge(s.at, s.name)
            elif s.op == "braid":
                self.braid(s.at, s.name)
            elif s.op == "arc":
                self.arc(s.at)
            else:
                raise MovieError(f"unknown op {s.op}")

    def build(self, free: bool = True) -> ThreeGraph:
        if self.pend:
            raise MovieError(f"{len(self.pend)} strands still pending")
        # the construction frame reads the word left to right along the top;
        # flipping the picture puts the marked points in counterclockwise
        # boundary order while reversing every rotation
        rotation = {}
        for v, slots in self.slots.items():
            if any(h is None for h in slots):
                raise MovieError(f"vertex {v} has unfilled rotation slots")
            rotation[v] = tuple(reversed(slots))
        return ThreeGraph(dict(self.kind), dict(self.twin), dict(self.origin),
                          dict(self.color), rotation,
                          tuple(self.boundary), free)

    def edge_between(self, u: int, w: int) -> int:
        """The unique edge joining vertices u and w (error if not unique)."""
        found = [min(h, self.twin[h]) for h in self.twin
                 if self.origin[h] == u and self.origin[self.twin[h]] == w]
        ids = sorted(set(found))
        if len(ids) != 1:
            raise MovieError(f"expected one edge {u}-{w}, found {len(ids)}")
        return ids[0]


def dn_boundary_word(n: int) -> list[str]:
    """sigma_1^(n-2) (sigma_2 sigma_1^2 sigma_2) (sigma_1 sigma_2)^3, left to right."""
    return [BLUE] * (n - 2) + [RED, BLUE, BLUE, RED] + [BLUE, RED] * 3


def build_initial_dn(n: int):
    """The initial 3-graph of D_n-type together with its homology basis.

    The boundary word is sigma_1^(n-2) (sigma_2 sigma_1^2 sigma_2)
    (sigma_1 sigma_2)^3.  The basis consists of one short Y-cycle through
    the central hexavalent vertex and n-1 short I-cycles: two attached to
    the left and right leaves of the Y and a chain of n-3 more hanging off
    its bottom leaf.  Their intersection pattern is the D_n Dynkin diagram.

    Returns (graph, basis) with basis cycle names g1..gn: g1..g(n-3) the
    tail chain (g1 farthest from the center), g(n-2) the Y-cycle, g(n-1)
    and gn the two leaf I-cycles.
    """
    from .cycles import Cycle, CycleBasis

    if n < 3:
        raise MovieError("build_initial_dn needs n >= 3")
    m = Movie(dn_boundary_word(n))
    base = n - 2  # position of the red letter separating off the sigma_1 block
    g1 = m.merge(base + 1, "G1")        # the sigma_1^2 pair
    m.braid(base + 2, "H2")             # (P_{n+2}, P_{n+3}, P_{n+4})
    ml = m.merge(base + 1, "ML")        # g1 with the left blue output of H2
    g2 = m.merge(base + 3, "G2")        # right blue output of H2 with P_{n+5}
    m.braid(base + 4, "H3")             # (P_{n+6}, P_{n+7}, P_{n+8})
    mr = m.merge(base + 3, "MR")        # g2 with the left blue output of H3
    hy = m.braid(base + 1, "HY")        # (ml, middle red, mr): the Y vertex
    m.arc(base + 3)                     # HY's right red with H3's middle red
    m.arc(base)                         # P_{n-1} with HY's left red
    md = m.merge(base, "MD")            # the Y's bottom leg with H3's blue
    chain = [md]
    for k in range(n - 3):
        chain.append(m.merge(base - 1 - k, f"U{k + 1}"))
    m.arc(0)                            # last tail strand closes with P_1
    g = m.build(free=True)

    bad = g.validate()
    if bad:
        raise MovieError(f"initial graph invalid: {bad}")

    tail = [Cycle([m.edge_between(chain[k], chain[k + 1])], name=f"g{n - 3 - k}")
            for k in range(len(chain) - 1)]
    tail.reverse()
    y = Cycle([m.edge_between(hy, ml), m.edge_between(hy, mr),
               m.edge_between(hy, md)], name=f"g{n - 2}")
    left = Cycle([m.edge_between(g1, ml)], name=f"g{n - 1}")
    right = Cycle([m.edge_between(g2, mr)], name=f"g{n}")
    basis = CycleBasis(tail + [y, left, right])
    return g, basis
