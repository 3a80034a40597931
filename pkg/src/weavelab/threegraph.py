"""3-graphs as planar combinatorial maps in the disk.

A graph is stored as a half-edge structure: every edge is a twinned pair of
half-edges, each half-edge knows its origin vertex and color, and every
vertex carries the counterclockwise cyclic order of its incident half-edges
(the rotation system).  Interior vertices are monochromatic trivalent or
color-alternating hexavalent; boundary-marked vertices are univalent and
listed in counterclockwise order around the disk boundary.

Planarity is certified by Euler's formula on the map augmented with the
boundary circle: marked points joined by uncolored arcs in boundary order.
A well-embedded graph then has V - E + F = 2 with the all-arc orbit as the
outer face.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator, Optional, Sequence

BLUE = "b"  # sigma_1 crossings, bottom sheet pair
RED = "r"   # sigma_2 crossings, top sheet pair

TRIV_BLUE = "trivalent-blue"
TRIV_RED = "trivalent-red"
HEX = "hexavalent"
BOUNDARY = "boundary-marked"

TRIV = {TRIV_BLUE, TRIV_RED}


class GraphError(ValueError):
    """Structurally invalid 3-graph data."""


def other_color(c: str) -> str:
    return RED if c == BLUE else BLUE


def triv_kind(color: str) -> str:
    return TRIV_BLUE if color == BLUE else TRIV_RED


def triv_color(kind: str) -> str:
    return BLUE if kind == TRIV_BLUE else RED


@dataclass(frozen=True)
class ThreeGraph:
    """Immutable snapshot of a 3-graph; rewrites construct new values."""

    kind: dict[int, str]
    twin: dict[int, int]
    origin: dict[int, int]
    color: dict[int, str]
    rotation: dict[int, tuple[int, ...]]
    boundary_order: tuple[int, ...]
    free: bool = True

    # -- basic accessors ---------------------------------------------------

    @property
    def vertex_ids(self) -> list[int]:
        return sorted(self.kind)

    @property
    def half_edge_ids(self) -> list[int]:
        return sorted(self.twin)

    def edge_id(self, h: int) -> int:
        return min(h, self.twin[h])

    def edge_ids(self) -> list[int]:
        return sorted({self.edge_id(h) for h in self.twin})

    def edge_halves(self, e: int) -> tuple[int, int]:
        return e, self.twin[e]

    def edge_color(self, e: int) -> str:
        return self.color[e]

    def edge_ends(self, e: int) -> tuple[int, int]:
        return self.origin[e], self.origin[self.twin[e]]

    def halves_at(self, v: int) -> tuple[int, ...]:
        return self.rotation[v]

    def head(self, h: int) -> int:
        """Vertex the half-edge points at (origin of its twin)."""
        return self.origin[self.twin[h]]

    def rot_next(self, h: int) -> int:
        r = self.rotation[self.origin[h]]
        return r[(r.index(h) + 1) % len(r)]

    def rot_prev(self, h: int) -> int:
        r = self.rotation[self.origin[h]]
        return r[(r.index(h) - 1) % len(r)]

    def opposite_at_hex(self, h: int) -> int:
        """The collinear half-edge three rotation slots away at a hexavalent origin."""
        v = self.origin[h]
        if self.kind[v] != HEX:
            raise GraphError(f"vertex {v} is not hexavalent")
        r = self.rotation[v]
        return r[(r.index(h) + 3) % 6]

    def trivalent_ids(self) -> list[int]:
        return [v for v in self.vertex_ids if self.kind[v] in TRIV]

    def hexavalent_ids(self) -> list[int]:
        return [v for v in self.vertex_ids if self.kind[v] == HEX]

    # -- faces and planarity ----------------------------------------------

    def _augmented(self):
        """Half-edge maps with the boundary circle arcs added (uncolored)."""
        twin = dict(self.twin)
        origin = dict(self.origin)
        nxt = max(twin, default=0) + 1
        m = len(self.boundary_order)
        to_next: dict[int, int] = {}
        to_prev: dict[int, int] = {}
        if m >= 2:
            for i, v in enumerate(self.boundary_order):
                w = self.boundary_order[(i + 1) % m]
                a, b = nxt, nxt + 1
                nxt += 2
                twin[a], twin[b] = b, a
                origin[a], origin[b] = v, w
                to_next[v] = a
                to_prev[w] = b
        rot = {}
        for v, k in self.kind.items():
            if k == BOUNDARY and m >= 2:
                # counterclockwise at a marked point, interior leg first:
                # leg, arc toward the previous marked point, arc toward the next
                leg = self.rotation[v][0]
                rot[v] = (leg, to_prev[v], to_next[v])
            else:
                rot[v] = tuple(self.rotation[v])
        return twin, origin, rot

    def faces(self) -> list[tuple[int, ...]]:
        """Face orbits of the augmented map; darts are half-edge ids."""
        twin, origin, rotation = self._augmented()
        index = {}
        for v, r in rotation.items():
            for i, h in enumerate(r):
                index[h] = (v, i)

        def face_next(h: int) -> int:
            t = twin[h]
            v, i = index[t]
            r = rotation[v]
            return r[(i + 1) % len(r)]

        seen: set[int] = set()
        faces = []
        for h in sorted(twin):
            if h in seen:
                continue
            orbit = []
            cur = h
            while cur not in seen:
                seen.add(cur)
                orbit.append(cur)
                cur = face_next(cur)
            faces.append(tuple(orbit))
        return faces

    def validate(self) -> list[str]:
        """All invariant violations, as human-readable strings; [] when valid."""
        bad: list[str] = []
        for h, t in self.twin.items():
            if t == h or self.twin.get(t) != h:
                bad.append(f"half-edge {h}: twin structure broken")
            elif self.color[h] != self.color[t]:
                bad.append(f"edge {min(h, t)}: twins disagree on color")
            if self.origin[h] not in self.kind:
                bad.append(f"half-edge {h}: origin vertex missing")
        for v, k in self.kind.items():
            r = self.rotation.get(v, ())
            at_v = {h for h in self.twin if self.origin[h] == v}
            if set(r) != at_v or len(r) != len(at_v):
                bad.append(f"vertex {v}: rotation is not its incident half-edges")
                continue
            if k in TRIV:
                if len(r) != 3:
                    bad.append(f"vertex {v}: trivalent with {len(r)} half-edges")
                elif {self.color[h] for h in r} != {triv_color(k)}:
                    bad.append(f"vertex {v}: trivalent not monochromatic")
            elif k == HEX:
                if len(r) != 6:
                    bad.append(f"vertex {v}: hexavalent with {len(r)} half-edges")
                elif any(self.color[r[i]] == self.color[r[(i + 1) % 6]] for i in range(6)):
                    bad.append(f"vertex {v}: colors do not alternate")
            elif k == BOUNDARY:
                if len(r) != 1:
                    bad.append(f"vertex {v}: boundary-marked with {len(r)} half-edges")
            else:
                bad.append(f"vertex {v}: unknown kind {k}")
        if sorted(self.boundary_order) != sorted(v for v, k in self.kind.items()
                                                 if k == BOUNDARY):
            bad.append("boundary order does not list the boundary-marked vertices")
        if bad:
            return bad

        # connectivity of the augmented map (through the boundary circle)
        twin, origin, rotation = self._augmented()
        verts = set(self.kind)
        if verts:
            adj: dict[int, set[int]] = {v: set() for v in verts}
            for h, t in twin.items():
                adj[origin[h]].add(origin[t])
            start = next(iter(sorted(verts)))
            seen = {start}
            stack = [start]
            while stack:
                u = stack.pop()
                for w in adj[u]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            if seen != verts:
                bad.append("graph (with boundary circle) is not connected")
                return bad

        v_count = len(verts)
        e_count = len(twin) // 2
        faces = self.faces()
        f_count = len(faces)
        if v_count - e_count + f_count != 2:
            bad.append(
                f"Euler check fails: V={v_count} E={e_count} F={f_count}")
        else:
            # the outer face is the orbit consisting purely of boundary arcs;
            # it must traverse the marked points in boundary order
            arc_ids = set(twin) - set(self.twin)
            outer = [f for f in faces if set(f) <= arc_ids]
            if len(self.boundary_order) >= 1 and len(outer) != 1:
                bad.append("no pure boundary-arc outer face: not a disk embedding")
        return bad

    # -- braid word, components, genus --------------------------------------

    def boundary_braid_word(self) -> tuple[int, ...]:
        """Artin generator indices (1 = blue, 2 = red) in boundary order."""
        word = []
        for v in self.boundary_order:
            (h,) = self.rotation[v]
            word.append(1 if self.color[h] == BLUE else 2)
        return tuple(word)

    def boundary_components(self) -> int:
        """Orbits of the three strands under the boundary word's permutation."""
        perm = [0, 1, 2]
        for s in self.boundary_braid_word():
            i = s - 1  # sigma_1 swaps strands 0,1; sigma_2 swaps 1,2
            perm[i], perm[i + 1] = perm[i + 1], perm[i]
        seen = set()
        comps = 0
        for s in range(3):
            if s in seen:
                continue
            comps += 1
            cur = s
            while cur not in seen:
                seen.add(cur)
                cur = perm[cur]
        return comps

    def genus(self) -> int:
        """Riemann-Hurwitz genus of the triple branched cover."""
        v = len(self.trivalent_ids())
        b = self.boundary_components()
        num = v + 2 - 3 - b
        if num % 2 != 0:
            raise GraphError(f"genus parity violated: v={v}, components={b}")
        return num // 2

    # -- serialization -------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "vertices": [{"id": v, "kind": self.kind[v]} for v in self.vertex_ids],
            "half_edges": [{"id": h, "twin": self.twin[h], "origin": self.origin[h],
                            "color": self.color[h]} for h in self.half_edge_ids],
            "rotation": {str(v): list(self.rotation[v]) for v in self.vertex_ids},
            "boundary": list(self.boundary_order),
            "free": self.free,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "ThreeGraph":
        kind = {int(v["id"]): v["kind"] for v in d["vertices"]}
        twin = {int(h["id"]): int(h["twin"]) for h in d["half_edges"]}
        origin = {int(h["id"]): int(h["origin"]) for h in d["half_edges"]}
        color = {int(h["id"]): h["color"] for h in d["half_edges"]}
        rotation = {int(v): tuple(r) for v, r in d["rotation"].items()}
        return cls(kind, twin, origin, color, rotation, tuple(d["boundary"]),
                   bool(d.get("free", True)))

    def digest(self) -> str:
        payload = json.dumps(self.to_json_dict(), sort_keys=True).encode()
        return hashlib.sha256(payload).hexdigest()[:16]

    def canonical_form(self) -> tuple[str, dict[int, int]]:
        """Isomorphism-invariant digest plus an edge renumbering.

        Interior ids are arbitrary after rewrites; boundary-marked points
        are stable anchors, so a breadth-first relabeling from the boundary
        (walking rotations from each vertex's discovery edge) canonicalizes
        the map.  Returns (digest, edge id -> canonical edge number).
        """
        new_id: dict[int, int] = {}
        entry: dict[int, int] = {}
        queue = []
        for v in self.boundary_order:
            new_id[v] = len(new_id)
            (leg,) = self.rotation[v]
            queue.append((v, leg))
        edge_no: dict[int, int] = {}
        rows = []
        qi = 0
        while qi < len(queue):
            v, start = queue[qi]
            qi += 1
            r = self.rotation[v]
            i0 = r.index(start)
            row = [self.kind[v]]
            for k in range(len(r)):
                h = r[(i0 + k) % len(r)]
                e = self.edge_id(h)
                if e not in edge_no:
                    edge_no[e] = len(edge_no)
                w = self.head(h)
                if w not in new_id:
                    new_id[w] = len(new_id)
                    queue.append((w, self.twin[h]))
                row.append((self.color[h], edge_no[e], new_id[w]))
            rows.append((new_id[v], tuple(row)))
        rows.sort()
        payload = repr(rows).encode()
        return hashlib.sha256(payload).hexdigest()[:16], edge_no

    def __eq__(self, other) -> bool:
        if not isinstance(other, ThreeGraph):
            return NotImplemented

        def norm_rot(rot):
            out = {}
            for v, r in rot.items():
                if r:
                    i = r.index(min(r))
                    out[v] = r[i:] + r[:i]
                else:
                    out[v] = r
            return out

        def norm_bd(bd):
            if not bd:
                return bd
            i = bd.index(min(bd))
            return bd[i:] + bd[:i]

        return (self.kind == other.kind and self.twin == other.twin
                and self.origin == other.origin and self.color == other.color
                and norm_rot(self.rotation) == norm_rot(other.rotation)
                and norm_bd(self.boundary_order) == norm_bd(other.boundary_order)
                and self.free == other.free)

    def __hash__(self):
        return hash(self.digest())


def mirrored(g: ThreeGraph) -> ThreeGraph:
    """The reflected map: every rotation reversed, boundary order reversed."""
    return ThreeGraph(dict(g.kind), dict(g.twin), dict(g.origin), dict(g.color),
                      {v: tuple(reversed(r)) for v, r in g.rotation.items()},
                      tuple(reversed(g.boundary_order)), g.free)


class GraphBuilder:
    """Mutable construction buffer for :class:`ThreeGraph` values."""

    def __init__(self):
        self.kind: dict[int, str] = {}
        self.twin: dict[int, int] = {}
        self.origin: dict[int, int] = {}
        self.color: dict[int, str] = {}
        self.rotation: dict[int, list[int]] = {}
        self.boundary: list[int] = []
        self._next_v = 0
        self._next_h = 0

    def add_vertex(self, kind: str) -> int:
        v = self._next_v
        self._next_v += 1
        self.kind[v] = kind
        self.rotation[v] = []
        if kind == BOUNDARY:
            self.boundary.append(v)
        return v

    def add_edge(self, u: int, v: int, color: str) -> tuple[int, int]:
        """New edge u -> v; half-edges appended to each rotation (caller orders)."""
        a, b = self._next_h, self._next_h + 1
        self._next_h += 2
        self.twin[a], self.twin[b] = b, a
        self.origin[a], self.origin[b] = u, v
        self.color[a] = self.color[b] = color
        self.rotation[u].append(a)
        self.rotation[v].append(b)
        return a, b

    def set_rotation(self, v: int, halves: Sequence[int]) -> None:
        self.rotation[v] = list(halves)

    def build(self, free: bool = True) -> ThreeGraph:
        g = ThreeGraph(dict(self.kind), dict(self.twin), dict(self.origin),
                       dict(self.color), {v: tuple(r) for v, r in self.rotation.items()},
                       tuple(self.boundary), free)
        return g


def braid_word_equal_cyclic(a: Sequence[int], b: Sequence[int]) -> bool:
    """Words over the Artin generators, compared up to cyclic rotation."""
    a, b = tuple(a), tuple(b)
    if len(a) != len(b):
        return False
    if not a:
        return True
    return any(a[i:] + a[:i] == b for i in range(len(a)))
