"""Local rewrites of 3-graphs: Reidemeister moves and Legendrian mutation.

Move II (push-through) trades a trivalent vertex beside a hexavalent one
for an opposite-color trivalent vertex behind a pair of hexavalent ones;
II_inv is its inverse.  Move III (flop) removes two hexavalent vertices
joined by three parallel edges, letting the three crossing lines run
straight through; move I (candy twist) rotates the two hexavalent vertices
of such a triple bridge, re-gluing the lines one step around.  Mutation at
a short I-cycle is the diagonal flip of its edge inside the surrounding
quadrilateral; mutation at a short Y-cycle reduces the Y to an I-cycle
with push-throughs, flips it, and leaves resimplification to the caller.

Every rewrite transports the homology basis through an explicit table of
supported local cycle features; a cycle meeting the region in any other
way raises :class:`TransportError` rather than guessing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .cycles import Cycle, CycleBasis, CycleError, is_valid_cycle, shape_of, tour
from .cycles import SHORT_I, SHORT_Y, algebraic_intersection, geometric_intersections
from .threegraph import (
    HEX,
    TRIV,
    GraphError,
    ThreeGraph,
    other_color,
    triv_color,
    triv_kind,
)

MOVE_I = "I"
MOVE_II = "II"
MOVE_II_INV = "II_inv"
MOVE_III = "III"
MUTATE_I = "mutate_I"
MUTATE_Y = "mutate_Y"


class MoveError(GraphError):
    """The requested move does not match the graph at its anchor."""


class TransportError(MoveError):
    """A basis cycle meets the rewrite region in an unsupported way."""


@dataclass(frozen=True)
class MoveSpec:
    kind: str
    anchor: tuple


@dataclass(frozen=True)
class RewriteResult:
    graph: ThreeGraph
    basis: CycleBasis
    applied: MoveSpec
    delta: dict


class _Surgeon:
    """Mutable scratch copy of a graph for local surgery."""

    def __init__(self, g: ThreeGraph):
        self.g = g
        self.kind = dict(g.kind)
        self.twin = dict(g.twin)
        self.origin = dict(g.origin)
        self.color = dict(g.color)
        self.rotation = {v: list(r) for v, r in g.rotation.items()}
        self._next_v = max(g.kind, default=-1) + 1
        self._next_h = max(g.twin, default=-1) + 1

    def new_vertex(self, kind: str) -> int:
        v = self._next_v
        self._next_v += 1
        self.kind[v] = kind
        self.rotation[v] = []
        return v

    def new_edge(self, color: str) -> tuple[int, int]:
        a, b = self._next_h, self._next_h + 1
        self._next_h += 2
        self.twin[a], self.twin[b] = b, a
        self.color[a] = self.color[b] = color
        return a, b

    def drop_vertex(self, v: int) -> None:
        del self.kind[v]
        del self.rotation[v]

    def drop_edge(self, e: int) -> None:
        t = self.twin[e]
        for x in (e, t):
            del self.twin[x]
            del self.origin[x]
            del self.color[x]

    def set_rotation(self, v: int, halves: Sequence[int]) -> None:
        self.rotation[v] = list(halves)
        for h in halves:
            self.origin[h] = v

    def splice_legs(self, a: int, b: int) -> int:
        """Fuse the edges of pattern-side half-edges a and b into one edge.

        Both a and b pointed into the removed region; their far halves are
        twinned together.  Returns the canonical id of the fused edge.
        """
        if self.color[a] != self.color[b]:
            raise MoveError("cannot splice legs of different colors")
        fa, fb = self.twin[a], self.twin[b]
        self.twin[fa], self.twin[fb] = fb, fa
        for x in (a, b):
            del self.twin[x]
            del self.origin[x]
            del self.color[x]
        return min(fa, fb)

    def build(self, free: bool) -> ThreeGraph:
        return ThreeGraph(dict(self.kind), dict(self.twin), dict(self.origin),
                          dict(self.color),
                          {v: tuple(r) for v, r in self.rotation.items()},
                          self.g.boundary_order, free)


def _rot_at(g: ThreeGraph, h: int, k: int) -> int:
    v = g.origin[h]
    r = g.rotation[v]
    return r[(r.index(h) + k) % len(r)]


def _retoken(g_old: ThreeGraph, c_old: Cycle, new_edges: frozenset[int],
             rename: dict[int, int], name: str) -> Cycle:
    """Carry the orientation token onto a surviving edge of the new cycle."""
    mapped = c_old.first_he
    e_old = g_old.edge_id(mapped)
    if e_old in rename and rename[e_old] in new_edges:
        # token edge was fused; keep direction via the surviving half-edge
        return Cycle(new_edges, rename[e_old], c_old.direction, name)
    if e_old in new_edges:
        return Cycle(new_edges, c_old.first_he, c_old.direction, name)
    # walk the old tour and adopt the first surviving edge in travel order
    start = c_old.first_he if c_old.direction == 1 else g_old.twin[c_old.first_he]
    d = start
    for _ in range(2 * len(c_old.edges) + 2):
        e = g_old.edge_id(d)
        e2 = rename.get(e, e)
        if e2 in new_edges:
            if e2 == e:
                return Cycle(new_edges, d, 1, name)
            return Cycle(new_edges, e2, 1, name)
        # advance along the old tour
        v = g_old.head(d)
        arrive = g_old.twin[d]
        if g_old.kind[v] in TRIV:
            d = arrive
        else:
            r = g_old.rotation[v]
            slot = r.index(arrive)
            st = [r.index(x) for x in r if g_old.edge_id(x) in c_old.edges]
            if len(st) == 2:
                d = r[(slot + 3) % 6]
            else:
                d = r[(slot + 2) % 6]
        if d == start:
            break
    raise TransportError(f"cycle {name}: no surviving edge for its orientation")


# ---------------------------------------------------------------------------
# Push-through (II / II_inv)
#
# Simple side: trivalent v joined to hexavalent h by edge estar.
#   v rotation: (estar, T4, T3); h rotation: (estar, T2, T1, B1, B2, B3)
# Complex side: trivalent v2 (opposite color) and hexavalent h1, h2.
#   v2: (B1, y1, x1); h1: (x3, T3, T2, T1, x1, x2); h2: (B3, T4, x3, x2, y1, B2)
# ---------------------------------------------------------------------------


def find_push_sites(g: ThreeGraph) -> list[tuple[int, int]]:
    sites = set()
    for v in g.trivalent_ids():
        for h in g.rotation[v]:
            w = g.head(h)
            if g.kind[w] == HEX:
                sites.add((v, w))
    return sorted(sites)


def find_unpush_sites(g: ThreeGraph) -> list[tuple[int, int, int, int]]:
    out = []
    for v2 in g.trivalent_ids():
        r = g.rotation[v2]
        for i in range(3):
            y1h, x1h = r[(i + 1) % 3], r[(i + 2) % 3]
            h1, h2 = g.head(x1h), g.head(y1h)
            if g.kind.get(h1) != HEX or g.kind.get(h2) != HEX or h1 == h2:
                continue
            x1_h1 = g.twin[x1h]
            x2_h1 = _rot_at(g, x1_h1, 1)
            x3_h1 = _rot_at(g, x1_h1, 2)
            if g.head(x2_h1) != h2 or g.head(x3_h1) != h2:
                continue
            y1_h2 = g.twin[y1h]
            if _rot_at(g, y1_h2, -1) != g.twin[x2_h1]:
                continue
            if _rot_at(g, y1_h2, -2) != g.twin[x3_h1]:
                continue
            out.append((v2, h1, h2, i))
    return sorted(out)


def _push_legs_simple(g: ThreeGraph, v: int, h: int):
    ev = [x for x in g.rotation[v] if g.head(x) == h]
    if g.kind.get(v) not in TRIV or g.kind.get(h) != HEX or len(ev) != 1:
        raise MoveError(f"no push-through site at ({v}, {h})")
    ev = ev[0]
    eh = g.twin[ev]
    halves = dict(T4=_rot_at(g, ev, 1), T3=_rot_at(g, ev, 2),
                  T2=_rot_at(g, eh, 1), T1=_rot_at(g, eh, 2),
                  B1=_rot_at(g, eh, 3), B2=_rot_at(g, eh, 4),
                  B3=_rot_at(g, eh, 5))
    return ev, eh, halves


def _check_disjoint(cycles: Sequence[Cycle]) -> None:
    for i in range(len(cycles)):
        for j in range(i + 1, len(cycles)):
            shared = cycles[i].edges & cycles[j].edges
            if shared:
                raise TransportError(
                    f"cycles {cycles[i].name} and {cycles[j].name} would share "
                    f"edges {sorted(shared)}")


def push_through(g: ThreeGraph, basis: CycleBasis, v: int, h: int
                 ) -> tuple[ThreeGraph, CycleBasis, dict]:
    """Move II: the simple side at (v, h) becomes the complex side."""
    ev, eh, halves = _push_legs_simple(g, v, h)
    estar = g.edge_id(ev)
    col = g.color[ev]
    oc = other_color(col)
    legs = {k: g.edge_id(x) for k, x in halves.items()}

    s = _Surgeon(g)
    s.drop_edge(ev)
    s.drop_vertex(v)
    s.drop_vertex(h)
    v2 = s.new_vertex(triv_kind(oc))
    h1 = s.new_vertex(HEX)
    h2 = s.new_vertex(HEX)
    x1a, x1b = s.new_edge(oc)
    x2a, x2b = s.new_edge(col)
    x3a, x3b = s.new_edge(oc)
    y1a, y1b = s.new_edge(oc)
    s.set_rotation(v2, [halves["B1"], y1a, x1a])
    s.set_rotation(h1, [x3a, halves["T3"], halves["T2"], halves["T1"], x1b, x2a])
    s.set_rotation(h2, [halves["B3"], halves["T4"], x3b, x2b, y1b, halves["B2"]])
    g2 = s.build(g.free)

    new = dict(x1=min(x1a, x1b), x2=min(x2a, x2b), x3=min(x3a, x3b),
               y1=min(y1a, y1b))
    cycles = [_push_forward_cycle(g, c, estar, legs, new) for c in basis]
    _check_disjoint(cycles)
    info = dict(v2=v2, h1=h1, h2=h2, estar=estar, legs=legs, new=new)
    return g2, CycleBasis(cycles), info


def _push_forward_cycle(g_old: ThreeGraph, c: Cycle, estar: int,
                        legs: dict, new: dict) -> Cycle:
    edges = set(c.edges)
    hit = {k for k, e in legs.items() if e in edges}
    add: set[int] = set()
    remove: set[int] = set()
    if estar in edges:
        if {"T1", "B2"} <= hit:
            remove.add(estar)
            add.add(new["x3"])            # short Y opens into a long I
        elif "B1" in hit:
            remove.add(estar)             # long tail through estar shortens
        else:
            raise TransportError(f"cycle {c.name}: unsupported use of the pushed edge")
    if "T3" in hit:
        add.add(new["x1"])                # turning point slides behind h1
    if "T4" in hit:
        add.add(new["y1"])
    if {"B3", "T1"} <= hit and estar not in edges:
        add.update((new["x3"], new["y1"]))
    if {"T2", "B2"} <= hit and estar not in edges:
        add.update((new["x3"], new["x1"]))
    if {"B3", "T2", "B1"} <= hit:
        add.add(new["x2"])                # the red tripod picks up the bridge
    result = frozenset((edges - remove) | add)
    if result == edges and not (hit or estar in edges):
        return c
    return _retoken(g_old, c, result, {}, c.name)


def unpush(g: ThreeGraph, basis: CycleBasis, v2: int, h1: int, h2: int, i: int
           ) -> tuple[ThreeGraph, CycleBasis, dict]:
    """Move II_inv: the complex side at (v2, h1, h2) becomes the simple side."""
    r = g.rotation[v2]
    b1h, y1h, x1h = r[i], r[(i + 1) % 3], r[(i + 2) % 3]
    oc = triv_color(g.kind[v2])
    col = other_color(oc)
    x1_h1 = g.twin[x1h]
    halves = dict(B1=b1h,
                  x2=_rot_at(g, x1_h1, 1), x3=_rot_at(g, x1_h1, 2),
                  T1=_rot_at(g, x1_h1, -1), T2=_rot_at(g, x1_h1, -2),
                  T3=_rot_at(g, x1_h1, -3))
    y1_h2 = g.twin[y1h]
    halves.update(B2=_rot_at(g, y1_h2, 1), B3=_rot_at(g, y1_h2, 2),
                  T4=_rot_at(g, y1_h2, 3))
    legs = {k: g.edge_id(halves[k]) for k in ("T1", "T2", "T3", "T4", "B1", "B2", "B3")}
    old = dict(x1=g.edge_id(x1h), x2=g.edge_id(halves["x2"]),
               x3=g.edge_id(halves["x3"]), y1=g.edge_id(y1h))

    s = _Surgeon(g)
    for e in old.values():
        s.drop_edge(e)
    s.drop_vertex(v2)
    s.drop_vertex(h1)
    s.drop_vertex(h2)
    v = s.new_vertex(triv_kind(col))
    h = s.new_vertex(HEX)
    ea, eb = s.new_edge(col)
    s.set_rotation(v, [ea, halves["T4"], halves["T3"]])
    s.set_rotation(h, [eb, halves["T2"], halves["T1"], halves["B1"],
                       halves["B2"], halves["B3"]])
    g2 = s.build(g.free)

    estar = min(ea, eb)
    cycles = [_push_backward_cycle(g, c, estar, legs, old) for c in basis]
    _check_disjoint(cycles)
    info = dict(v=v, h=h, estar=estar, legs=legs, new=old)
    return g2, CycleBasis(cycles), info


def _push_backward_cycle(g_old: ThreeGraph, c: Cycle, estar: int,
                         legs: dict, old: dict) -> Cycle:
    edges = set(c.edges)
    x1, x2, x3, y1 = old["x1"], old["x2"], old["x3"], old["y1"]
    hit = {k for k, e in legs.items() if e in edges}
    touched = bool(edges & {x1, x2, x3, y1}) or "B1" in hit
    add: set[int] = set()
    remove: set[int] = set()
    if x2 in edges:
        remove.add(x2)                    # bridge drops: red tripod restored
    if x3 in edges:
        if y1 in edges:
            remove.update((x3, y1))       # pass B3 <-> T1 restored
        elif x1 in edges:
            remove.update((x3, x1))       # pass T2 <-> B2 restored
        elif {"T1", "B2"} <= hit:
            remove.add(x3)
            add.add(estar)                # long I closes back into the Y
        else:
            raise TransportError(f"cycle {c.name}: unsupported use of the bridge")
    elif x1 in edges:
        remove.add(x1)                    # turning point slides back to v
    elif y1 in edges:
        remove.add(y1)
    if "B1" in hit and x2 not in edges and not ({x1, y1} & edges):
        add.add(estar)                    # stub at v2 grows back through h
    result = frozenset((edges - remove) | add)
    if not touched:
        return c
    return _retoken(g_old, c, result, {}, c.name)


# ---------------------------------------------------------------------------
# Flop (III): two hexavalent vertices joined by three parallel edges on
# consecutive slots; removing them lets the three lines run straight.
# ---------------------------------------------------------------------------


def find_flop_sites(g: ThreeGraph) -> list[tuple[int, int, int, int]]:
    """(ha, hb, sa, sb): bridge slots (sa..sa+2) at ha meet (sb..sb+2) at hb
    in reversed order."""
    out = []
    hexes = g.hexavalent_ids()
    for ai in range(len(hexes)):
        for bi in range(ai + 1, len(hexes)):
            ha, hb = hexes[ai], hexes[bi]
            between = [x for x in g.rotation[ha] if g.head(x) == hb]
            if len(between) != 3:
                continue
            ra = g.rotation[ha]
            slots = sorted(ra.index(x) for x in between)
            for sa in slots:
                if {sa, (sa + 1) % 6, (sa + 2) % 6} == {s % 6 for s in slots}:
                    rb = g.rotation[hb]
                    sb = rb.index(g.twin[ra[(sa + 2) % 6]])
                    if (rb[(sb + 1) % 6] == g.twin[ra[(sa + 1) % 6]]
                            and rb[(sb + 2) % 6] == g.twin[ra[sa]]):
                        out.append((ha, hb, sa, sb))
                    break
    return sorted(out)


def flop(g: ThreeGraph, basis: CycleBasis, ha: int, hb: int, sa: int, sb: int
         ) -> tuple[ThreeGraph, CycleBasis, dict]:
    ra, rb = g.rotation[ha], g.rotation[hb]
    bridge = [g.edge_id(ra[(sa + k) % 6]) for k in range(3)]
    # the three lines: (leg at ha, bridge, leg at hb)
    lines = [
        (ra[(sa + 3) % 6], bridge[0], rb[(sb + 5) % 6]),
        (ra[(sa + 4) % 6], bridge[1], rb[(sb + 4) % 6]),
        (ra[(sa + 5) % 6], bridge[2], rb[(sb + 3) % 6]),
    ]
    s = _Surgeon(g)
    rename: dict[int, int] = {}
    removed: list[int] = []
    for leg_a, br, leg_b in lines:
        ea, eb = g.edge_id(leg_a), g.edge_id(leg_b)
        s.drop_edge(br)
        removed.append(br)
        fused = s.splice_legs(leg_a, leg_b)
        rename[ea] = fused
        rename[eb] = fused
    s.drop_vertex(ha)
    s.drop_vertex(hb)
    g2 = s.build(g.free)

    cycles = []
    for c in basis:
        edges = set(c.edges)
        touched = bool(edges & set(rename)) or bool(edges & set(removed))
        for leg_a, br, leg_b in lines:
            ea, eb = g.edge_id(leg_a), g.edge_id(leg_b)
            inside = edges & {ea, eb, g.edge_id(br)}
            if not inside:
                continue
            if inside != {ea, eb, g.edge_id(br)}:
                raise TransportError(
                    f"cycle {c.name}: does not ride a full line through the flop")
            edges -= {ea, eb, g.edge_id(br)}
            edges.add(rename[ea])
        if touched:
            cycles.append(_retoken(g, c, frozenset(edges), rename, c.name))
        else:
            cycles.append(c)
    return g2, CycleBasis(cycles), dict(rename=rename, lines=len(lines))


# ---------------------------------------------------------------------------
# Mirrored variants: every local pattern also occurs reflected, and the
# reflected rewrite is applied by conjugating with the mirror map.
# ---------------------------------------------------------------------------


def _mirror_op(fn):
    from .threegraph import mirrored

    def wrapper(g: ThreeGraph, basis: CycleBasis, *anchor):
        g2, b2, info = fn(mirrored(g), basis, *anchor)
        return mirrored(g2), b2, info

    wrapper.__name__ = fn.__name__ + "_mirror"
    return wrapper


push_through_mirror = _mirror_op(push_through)
unpush_mirror = _mirror_op(unpush)
flop_mirror = _mirror_op(flop)


def find_unpush_sites_mirror(g: ThreeGraph) -> list[tuple[int, int, int, int]]:
    from .threegraph import mirrored
    return find_unpush_sites(mirrored(g))


def find_flop_sites_mirror(g: ThreeGraph) -> list[tuple[int, int, int, int]]:
    from .threegraph import mirrored
    return find_flop_sites(mirrored(g))


# ---------------------------------------------------------------------------
# Legendrian mutation
# ---------------------------------------------------------------------------


def mutate_at_I(g: ThreeGraph, basis: CycleBasis, idx: int
                ) -> tuple[ThreeGraph, CycleBasis, dict]:
    """Mutation at a short I-cycle: the diagonal flip of its edge."""
    c = basis[idx]
    if shape_of(g, c) != SHORT_I:
        raise MoveError(f"cycle {c.name} is not a short I-cycle")
    (e,) = c.edges
    ev, ew = g.edge_halves(e)
    t1, t2 = g.origin[ev], g.origin[ew]
    col = g.color[ev]
    a = _rot_at(g, ev, 1)
    b = _rot_at(g, ev, 2)
    cc = _rot_at(g, ew, 1)
    d = _rot_at(g, ew, 2)

    s = _Surgeon(g)
    s.drop_edge(e)
    s.drop_vertex(t1)
    s.drop_vertex(t2)
    u1 = s.new_vertex(triv_kind(col))
    u2 = s.new_vertex(triv_kind(col))
    f1, f2 = s.new_edge(col)
    s.set_rotation(u1, [f1, d, a])
    s.set_rotation(u2, [f2, b, cc])
    g2 = s.build(g.free)

    e2 = min(f1, f2)
    cycles = []
    for j, cj in enumerate(basis):
        if j == idx:
            cycles.append(Cycle([e2], f1, cj.direction, cj.name))
        else:
            if e in cj.edges:
                raise TransportError(f"cycle {cj.name} shares the mutated edge")
            cycles.append(cj)
    return g2, CycleBasis(cycles), dict(u1=u1, u2=u2, new_edge=e2, old_edge=e)


def mutate_at_Y(g: ThreeGraph, basis: CycleBasis, idx: int
                ) -> tuple[ThreeGraph, CycleBasis, dict]:
    """Mutation at a short Y-cycle via reduction to a short I-cycle.

    One leaf of the Y is pushed through the central hexavalent vertex,
    turning the Y into a long I-cycle; push-throughs at its endpoints
    shorten it to a single edge, which is then flipped.
    """
    c = basis[idx]
    if shape_of(g, c) != SHORT_Y:
        raise MoveError(f"cycle {c.name} is not a short Y-cycle")
    hub = next(v for v in _cycle_vertices(g, c) if g.kind[v] == HEX)
    leaves = sorted(v for v in _cycle_vertices(g, c) if g.kind[v] in TRIV)
    steps = []
    for leaf in leaves:
        try:
            g2, b2, info = push_through(g, basis, leaf, hub)
            steps.append(("II", (leaf, hub)))
            break
        except TransportError:
            continue
    else:
        raise MoveError(f"cycle {c.name}: no leaf admits the reducing push")
    # the mutated cycle is now a long I; shorten it to a single edge
    for _ in range(4):
        cur = b2[idx]
        if shape_of(g2, cur) == SHORT_I:
            break
        sites = _shortening_sites(g2, cur)
        if not sites:
            raise MoveError(f"cannot shorten {cur.name} before flipping")
        for site in sites:
            try:
                g2, b2, _ = push_through(g2, b2, *site)
                steps.append(("II", site))
                break
            except TransportError:
                continue
        else:
            raise MoveError(f"cycle {c.name}: all shortening sites conflict")
    else:
        raise MoveError(f"cycle {c.name} did not shorten to a flip site")
    g2, b2, info = mutate_at_I(g2, b2, idx)
    steps.append(("flip", info["old_edge"]))
    return g2, b2, dict(steps=steps)


def _cycle_vertices(g: ThreeGraph, c: Cycle) -> set[int]:
    out = set()
    for e in c.edges:
        u, w = g.edge_ends(e)
        out.update((u, w))
    return out


def _shortening_sites(g: ThreeGraph, c: Cycle) -> list[tuple[int, int]]:
    """(leaf vertex, hexavalent) push sites that simplify the long cycle.

    Pushing a leaf whose edge continues straight through the adjacent
    hexavalent vertex drops an edge from the cycle; pushing a leaf of a
    Y-branching turns the branching into a pass-through.  Strictly
    shortening sites are listed first.
    """
    shorten = set()
    debranch = set()
    for e in sorted(c.edges):
        for h in g.edge_halves(e):
            v = g.origin[h]
            if g.kind[v] not in TRIV:
                continue
            other = g.head(h)
            if g.kind.get(other) != HEX:
                continue
            eh = g.twin[h]
            if g.edge_id(_rot_at(g, eh, 3)) in c.edges:
                shorten.add((v, other))
            elif (g.edge_id(_rot_at(g, eh, 2)) in c.edges
                  and g.edge_id(_rot_at(g, eh, 4)) in c.edges):
                debranch.add((v, other))
    return sorted(shorten) + sorted(debranch)


def shorten_cycles(g: ThreeGraph, basis: CycleBasis, cap: int = 100
                   ) -> tuple[ThreeGraph, CycleBasis, list]:
    """Push-throughs until every basis cycle is a short I or short Y."""
    log = []
    for _ in range(cap):
        long_idx = [i for i, c in enumerate(basis)
                    if shape_of(g, c) not in (SHORT_I, SHORT_Y)]
        if not long_idx:
            return g, basis, log
        progressed = False
        for i in long_idx:
            for site in _shortening_sites(g, basis[i]):
                try:
                    g, basis, _ = push_through(g, basis, *site)
                except TransportError:
                    continue
                log.append(("II", site, basis[i].name))
                progressed = True
                break
            if progressed:
                break
        if not progressed:
            stuck = basis[long_idx[0]]
            raise MoveError(f"no applicable push-through; stuck cycle {stuck.name}")
    raise MoveError("shortening did not terminate")


# ---------------------------------------------------------------------------
# Uniform front-end
# ---------------------------------------------------------------------------


def find_matches(g: ThreeGraph, kind: str) -> list[MoveSpec]:
    """All anchors where the move's local pattern occurs, in ascending order."""
    if kind == MOVE_II:
        return [MoveSpec(kind, s) for s in find_push_sites(g)]
    if kind == MOVE_II_INV:
        return [MoveSpec(kind, s) for s in find_unpush_sites(g)]
    if kind in (MOVE_III, MOVE_I):
        return [MoveSpec(kind, s) for s in find_flop_sites(g)]
    raise MoveError(f"unknown move kind {kind!r}")


def apply_move(g: ThreeGraph, basis: CycleBasis, m: MoveSpec) -> RewriteResult:
    """Apply a Reidemeister move and re-verify the preserved invariants."""
    before = _invariants(g, basis)
    if m.kind == MOVE_II:
        g2, b2, info = push_through(g, basis, *m.anchor)
    elif m.kind == MOVE_II_INV:
        g2, b2, info = unpush(g, basis, *m.anchor)
    elif m.kind == MOVE_III:
        g2, b2, info = flop(g, basis, *m.anchor)
    elif m.kind == MOVE_I:
        g2, b2, info = candy_twist(g, basis, *m.anchor)
    else:
        raise MoveError(f"unknown move kind {m.kind!r}")
    bad = g2.validate()
    if bad:
        raise MoveError(f"rewrite produced an invalid graph: {bad}")
    for c in b2:
        if not is_valid_cycle(g2, c):
            raise TransportError(f"transported cycle {c.name} is invalid")
    after = _invariants(g2, b2)
    if before != after:
        raise MoveError(f"move broke invariants: {before} -> {after}")
    return RewriteResult(g2, b2, m, info)


def _invariants(g: ThreeGraph, basis: CycleBasis):
    word = g.boundary_braid_word()
    pairwise = tuple(
        algebraic_intersection(g, basis[i], basis[j])
        for i in range(len(basis)) for j in range(i + 1, len(basis)))
    return (word, g.genus(), g.boundary_components(), len(basis), pairwise)
