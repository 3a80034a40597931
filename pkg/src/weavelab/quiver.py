"""Quivers, framed seeds, mutation, and exchange-graph enumeration.

A quiver is stored as a skew-symmetric integer matrix ``b`` where
``b[i][j]`` is the number of arrows j -> i minus the number of arrows
i -> j.  Framed seeds carry a square coefficient matrix ``c`` (initialized
to the identity) whose columns are the c-vectors; they give seeds a
computable identity up to simultaneous relabeling of the vertices.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence


class QuiverError(ValueError):
    """Malformed quiver data or invalid mutation index."""


class NotInClassError(QuiverError):
    """The quiver does not belong to the mutation class a routine expects."""


class SeedCapExceeded(RuntimeError):
    """Exchange-graph enumeration outgrew its seed cap."""


Matrix = tuple[tuple[int, ...], ...]


def _as_matrix(rows: Sequence[Sequence[int]]) -> Matrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


@dataclass(frozen=True)
class Quiver:
    """Skew-symmetric integer adjacency data on labeled vertices."""

    b: Matrix
    labels: tuple[str, ...]

    def __init__(self, b: Sequence[Sequence[int]], labels: Optional[Sequence[str]] = None):
        b = _as_matrix(b)
        n = len(b)
        if any(len(row) != n for row in b):
            raise QuiverError("adjacency matrix must be square")
        for i in range(n):
            if b[i][i] != 0:
                raise QuiverError(f"loop at vertex {i}")
            for j in range(n):
                if b[i][j] != -b[j][i]:
                    raise QuiverError(f"matrix not skew-symmetric at ({i},{j})")
        if labels is None:
            labels = tuple(f"v{i + 1}" for i in range(n))
        else:
            labels = tuple(str(x) for x in labels)
            if len(labels) != n:
                raise QuiverError("label count does not match vertex count")
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return len(self.b)

    @classmethod
    def from_arrows(cls, n: int, arrows: Sequence[tuple[int, int]],
                    labels: Optional[Sequence[str]] = None) -> "Quiver":
        """Build a quiver from a list of (source, target) arrows, 0-based."""
        b = [[0] * n for _ in range(n)]
        for s, t in arrows:
            if not (0 <= s < n and 0 <= t < n) or s == t:
                raise QuiverError(f"bad arrow ({s},{t})")
            b[t][s] += 1
            b[s][t] -= 1
        return cls(b, labels)

    def arrows(self) -> list[tuple[int, int, int]]:
        """All arrows as (source, target, multiplicity), source < ordering by b."""
        out = []
        for i in range(self.n):
            for j in range(self.n):
                if self.b[i][j] > 0:
                    out.append((j, i, self.b[i][j]))
        return out

    def underlying_edges(self) -> set[frozenset[int]]:
        return {frozenset((i, j)) for i in range(self.n) for j in range(i) if self.b[i][j] != 0}

    def degree(self, v: int) -> int:
        return sum(1 for j in range(self.n) if self.b[v][j] != 0)

    def neighbors(self, v: int) -> list[int]:
        return [j for j in range(self.n) if self.b[v][j] != 0]

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for w in self.neighbors(u):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    def to_json_dict(self) -> dict:
        return {"n": self.n, "b": [list(r) for r in self.b], "labels": list(self.labels)}

    @classmethod
    def from_json_dict(cls, d: dict) -> "Quiver":
        q = cls(d["b"], d.get("labels"))
        if q.n != d.get("n", q.n):
            raise QuiverError("inconsistent vertex count in JSON")
        return q


def _mutate_rows(rows: Matrix, v: int, ncols: int) -> Matrix:
    new_rows = []
    for i, row in enumerate(rows):
        riv = row[v]
        new = list(row)
        for j in range(ncols):
            if i == v or j == v:
                new[j] = -row[j]
            elif riv != 0:
                prod = riv * rows[v][j]
                if prod > 0:
                    new[j] = row[j] + (prod if riv > 0 else -prod)
        new_rows.append(tuple(new))
    return tuple(new_rows)


def mutate_quiver(q: Quiver, v: int) -> Quiver:
    """Fomin-Zelevinsky matrix mutation at vertex ``v`` (0-based); involutive."""
    if not (0 <= v < q.n):
        raise QuiverError(f"mutation index {v} out of range for n={q.n}")
    return Quiver(_mutate_rows(q.b, v, q.n), q.labels)


@dataclass(frozen=True)
class FramedSeed:
    """A quiver with principal coefficients: the framing gives seed identity."""

    quiver: Quiver
    c: Matrix

    def __init__(self, quiver: Quiver, c: Optional[Sequence[Sequence[int]]] = None):
        n = quiver.n
        if c is None:
            c = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
        else:
            c = _as_matrix(c)
        if len(c) != n or any(len(row) != n for row in c):
            raise QuiverError("c-matrix must be n x n")
        for j in range(n):
            col = [c[i][j] for i in range(n)]
            if any(x > 0 for x in col) and any(x < 0 for x in col):
                raise QuiverError(f"c-matrix column {j} is not sign-coherent")
        object.__setattr__(self, "quiver", quiver)
        object.__setattr__(self, "c", c)

    @property
    def n(self) -> int:
        return self.quiver.n

    def to_json_dict(self) -> dict:
        d = self.quiver.to_json_dict()
        d["c"] = [list(r) for r in self.c]
        return d

    @classmethod
    def from_json_dict(cls, d: dict) -> "FramedSeed":
        return cls(Quiver(d["b"], d.get("labels")), d["c"])


def mutate_framed(seed: FramedSeed, v: int) -> FramedSeed:
    """Mutate the extended 2n x n matrix (b over c) at vertex ``v``; involutive."""
    n = seed.n
    if not (0 <= v < n):
        raise QuiverError(f"mutation index {v} out of range for n={n}")
    ext = seed.quiver.b + seed.c
    new = _mutate_rows(ext, v, n)
    return FramedSeed(Quiver(new[:n], seed.quiver.labels), new[n:])


def canonical_key(seed: FramedSeed) -> bytes:
    """Canonical byte string: equal iff seeds agree up to a simultaneous
    permutation of the vertex indices (quiver rows/columns and c columns).

    Vertices are first bucketed by a permutation-covariant invariant (their
    c-column plus the sorted multiset of incident b-values); only ties are
    resolved by brute force.
    """
    n = seed.n
    b, c = seed.quiver.b, seed.c
    inv = []
    for v in range(n):
        ccol = tuple(c[i][v] for i in range(n))
        inv.append((ccol, tuple(sorted(b[v]))))
    order = sorted(range(n), key=lambda v: inv[v])
    groups: list[list[int]] = []
    for v in order:
        if groups and inv[groups[-1][0]] == inv[v]:
            groups[-1].append(v)
        else:
            groups.append([v])

    def serialize(perm: Sequence[int]) -> bytes:
        rows = []
        for i in perm:
            rows.append(",".join(str(b[i][j]) for j in perm))
        for i in range(n):
            rows.append(",".join(str(c[i][j]) for j in perm))
        return ";".join(rows).encode()

    if all(len(g) == 1 for g in groups):
        return serialize([g[0] for g in groups])
    best: Optional[bytes] = None
    for combo in itertools.product(*(itertools.permutations(g) for g in groups)):
        perm = [v for part in combo for v in part]
        s = serialize(perm)
        if best is None or s < best:
            best = s
    assert best is not None
    return best


@dataclass(frozen=True)
class ExchangeGraph:
    """Seeds (by canonical key) and mutation edges of a finite mutation class."""

    seeds: dict[bytes, FramedSeed]
    edges: list[tuple[bytes, bytes, int]]

    @property
    def seed_count(self) -> int:
        return len(self.seeds)

    def check_regular(self) -> bool:
        """Every seed must have exactly n incident edges and the graph is connected."""
        if not self.seeds:
            return False
        n = next(iter(self.seeds.values())).n
        deg: dict[bytes, int] = {k: 0 for k in self.seeds}
        adj: dict[bytes, set[bytes]] = {k: set() for k in self.seeds}
        for a, b_, _ in self.edges:
            deg[a] += 1
            deg[b_] += 1
            adj[a].add(b_)
            adj[b_].add(a)
        if any(d != n for d in deg.values()):
            return False
        start = next(iter(self.seeds))
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.seeds)


def enumerate_exchange_graph(seed0: FramedSeed, cap: int = 100_000,
                             jobs: int = 1) -> ExchangeGraph:
    """Breadth-first closure of ``seed0`` under framed mutation.

    Deduplicates via canonical keys.  Raises :class:`SeedCapExceeded` once
    more than ``cap`` distinct seeds appear (non-finite type, or a bug).
    ``jobs`` > 1 evaluates each BFS frontier with a thread pool; results are
    merged in deterministic order either way.
    """
    n = seed0.n
    key0 = canonical_key(seed0)
    seeds = {key0: seed0}
    edge_labels: dict[tuple[bytes, bytes], int] = {}
    frontier = [(key0, seed0)]

    def expand(item: tuple[bytes, FramedSeed]) -> list[tuple[bytes, bytes, int, FramedSeed]]:
        key, s = item
        out = []
        for v in range(n):
            s2 = mutate_framed(s, v)
            k2 = canonical_key(s2)
            out.append((key, k2, v, s2))
        return out

    while frontier:
        if jobs > 1:
            from concurrent.futures import ThreadPoolExecutor
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(expand, frontier))
        else:
            results = [expand(item) for item in frontier]
        next_frontier = []
        for batch in results:
            for key, k2, v, s2 in batch:
                pair = (min(key, k2), max(key, k2))
                # canonical relabeling can rename the mutated vertex at the far
                # end, so the pair is the edge identity; keep the first label
                edge_labels.setdefault(pair, v)
                if k2 not in seeds:
                    seeds[k2] = s2
                    next_frontier.append((k2, s2))
                    if len(seeds) > cap:
                        raise SeedCapExceeded(
                            f"more than {cap} seeds reached from the initial quiver")
        frontier = next_frontier

    edges = sorted((a, b_, v) for (a, b_), v in edge_labels.items())
    return ExchangeGraph(seeds, edges)


def catalan(m: int) -> int:
    """The m-th Catalan number, exact."""
    if m < 0:
        raise QuiverError("catalan index must be nonnegative")
    return math.comb(2 * m, m) // (m + 1)


def dn_seed_count(n: int) -> int:
    """Number of cluster seeds in the D_n-type exchange graph: (3n-2)*C_{n-1}."""
    if n < 2:
        raise QuiverError("dn_seed_count needs n >= 2")
    return (3 * n - 2) * catalan(n - 1)


def an_seed_count(n: int) -> int:
    """Number of cluster seeds in the A_n-type exchange graph: C_{n+1}."""
    if n < 1:
        raise QuiverError("an_seed_count needs n >= 1")
    return catalan(n + 1)


def an_dynkin(n: int) -> Quiver:
    """Linear A_n quiver 1 -> 2 -> ... -> n."""
    if n < 1:
        raise QuiverError("an_dynkin needs n >= 1")
    return Quiver.from_arrows(n, [(i, i + 1) for i in range(n - 1)])


@dataclass(frozen=True)
class VatneType:
    """Mutation-class normal-form tag for a D_n quiver.

    ``tag`` is one of "I", "II", "III", "IV".  For Type IV, ``k`` is the
    length of the central oriented cycle, ``kcycle_vertices`` its vertices
    and ``spike_vertices`` the apexes of the triangles glued to its edges.
    For Type II the shared-arrow endpoints sit in ``kcycle_vertices`` and
    the two 2-valent tips in ``spike_vertices``.  ``tails`` lists the
    A-type tail subquivers as tuples (attachment vertex, tail vertices).
    """

    tag: str
    k: Optional[int] = None
    kcycle_vertices: frozenset[int] = frozenset()
    spike_vertices: frozenset[int] = frozenset()
    tails: tuple[tuple[int, tuple[int, ...]], ...] = ()


def _oriented_chordless_cycles(q: Quiver) -> list[tuple[int, ...]]:
    n = q.n
    found: set[tuple[int, ...]] = set()

    def walk(path: list[int]) -> None:
        u = path[-1]
        for w in range(n):
            if q.b[w][u] > 0:  # arrow u -> w
                if w == path[0] and len(path) >= 3:
                    chordless = True
                    L = len(path)
                    for i in range(L):
                        for j in range(i + 2, L):
                            if i == 0 and j == L - 1:
                                continue
                            if q.b[path[i]][path[j]] != 0:
                                chordless = False
                    if chordless:
                        k = path.index(min(path))
                        found.add(tuple(path[k:] + path[:k]))
                elif w not in path and w > path[0]:
                    walk(path + [w])

    for s in range(n):
        walk([s])
    return sorted(found, key=lambda c: (len(c), c))


def is_a_type_quiver(q: Quiver) -> bool:
    """Structural membership test for the A_n mutation class.

    Connected, all arrows simple, every chordless cycle an oriented
    triangle, valence at most 4, and the valence-3/valence-4 rules: a
    3-valent vertex has exactly two of its arrows on one triangle, a
    4-valent vertex has its arrows split between two triangles.
    """
    n = q.n
    if n == 0:
        return False
    if not q.is_connected():
        return False
    if any(abs(x) > 1 for row in q.b for x in row):
        return False
    cycles = _oriented_chordless_cycles(q)
    if any(len(c) != 3 for c in cycles):
        return False
    # underlying cycles that are not oriented are excluded by checking that
    # the cycle space is generated by the oriented triangles
    m = len(q.underlying_edges())
    comps = 1
    if m - n + comps != len(cycles):
        return False
    tri_at: dict[int, list[tuple[int, ...]]] = {v: [] for v in range(n)}
    tri_edges: set[frozenset[int]] = set()
    for c in cycles:
        for v in c:
            tri_at[v].append(c)
        for i in range(3):
            e = frozenset((c[i], c[(i + 1) % 3]))
            if e in tri_edges:
                return False  # an edge on two triangles
            tri_edges.add(e)
    for v in range(n):
        deg = q.degree(v)
        if deg > 4:
            return False
        if deg == 3 and len(tri_at[v]) != 1:
            return False
        if deg == 4 and len(tri_at[v]) != 2:
            return False
        if len(tri_at[v]) * 2 > deg:
            return False
    return True


def _a_type_tails(q: Quiver, core: set[int]) -> tuple[tuple[int, tuple[int, ...]], ...]:
    """Components of Q minus ``core``; each must be an A-type subquiver."""
    n = q.n
    rest = [v for v in range(n) if v not in core]
    seen: set[int] = set()
    tails = []
    for v in rest:
        if v in seen:
            continue
        comp = [v]
        seen.add(v)
        stack = [v]
        while stack:
            u = stack.pop()
            for w in q.neighbors(u):
                if w not in core and w not in seen:
                    seen.add(w)
                    comp.append(w)
                    stack.append(w)
        attach = sorted({w for u in comp for w in q.neighbors(u) if w in core})
        comp_sorted = tuple(sorted(comp))
        sub = _induced(q, comp_sorted)
        if not is_a_type_quiver(sub):
            raise NotInClassError(f"component {comp_sorted} is not an A-type tail")
        tails.append((attach[0] if attach else -1, comp_sorted))
    return tuple(sorted(tails))


def _induced(q: Quiver, verts: Sequence[int]) -> Quiver:
    return Quiver([[q.b[i][j] for j in verts] for i in verts],
                  [q.labels[i] for i in verts])


def classify_vatne_type(q: Quiver) -> VatneType:
    """Classify a quiver in the D_n mutation class into Vatne's four types.

    The templates, in priority order: a chordless oriented cycle of length
    at least 4 with glued spike triangles is Type IV; such a cycle without
    spikes is Type III; an edge-glued complex of three or more triangles,
    or of two triangles with anything attached at a 2-valent tip, is Type
    IV with k = 3; exactly two edge-glued triangles with attachments only
    at the shared arrow is Type II; all remaining quivers (trees and lone
    triangles with A-type appendages) are Type I.
    """
    n = q.n
    if n < 2:
        raise NotInClassError("need at least 2 vertices")
    if not q.is_connected():
        raise NotInClassError("quiver is not connected")
    if any(abs(x) > 1 for row in q.b for x in row):
        raise NotInClassError("multiple arrows cannot occur in the D_n class")
    cycles = _oriented_chordless_cycles(q)
    triangles = [c for c in cycles if len(c) == 3]
    long_cycles = [c for c in cycles if len(c) >= 4]

    if len(long_cycles) > 1:
        raise NotInClassError("more than one long oriented cycle")
    if long_cycles:
        z = long_cycles[0]
        zset = set(z)
        zedges = {frozenset((z[i], z[(i + 1) % len(z)])) for i in range(len(z))}
        spikes = set()
        for t in triangles:
            shared = [frozenset(p) for p in itertools.combinations(t, 2)
                      if frozenset(p) in zedges]
            if shared:
                (apex,) = set(t) - zset
                spikes.add(apex)
        core = zset | spikes
        tails = _a_type_tails(q, core)
        if len(z) == 4 and not spikes:
            # spoke-free oriented 4-cycles (with vertex-attached tails) are
            # the quivers of the Type III normal forms
            return VatneType("III", len(z), frozenset(zset), frozenset(), tails)
        return VatneType("IV", len(z), frozenset(zset), frozenset(spikes), tails)

    # group triangles by shared edges
    comps: list[list[tuple[int, ...]]] = []
    for t in triangles:
        tedges = {frozenset(p) for p in itertools.combinations(t, 2)}
        hits = []
        for comp in comps:
            for u in comp:
                uedges = {frozenset(p) for p in itertools.combinations(u, 2)}
                if tedges & uedges:
                    hits.append(comp)
                    break
        merged = [t]
        for comp in hits:
            merged.extend(comp)
            comps.remove(comp)
        comps.append(merged)
    big = max(comps, key=len, default=None)
    if big is not None and len(big) >= 2:
        if len(big) >= 3:
            # central triangle shares edges with every other one
            central = None
            for t in big:
                tedges = {frozenset(p) for p in itertools.combinations(t, 2)}
                if all(t is u or tedges & {frozenset(p) for p in itertools.combinations(u, 2)}
                       for u in big):
                    central = t
            if central is None:
                raise NotInClassError("triangle complex without a central triangle")
            zset = set(central)
            spikes = {v for t in big if t is not central for v in t if v not in zset}
            tails = _a_type_tails(q, zset | spikes)
            return VatneType("IV", 3, frozenset(zset), frozenset(spikes), tails)
        t1, t2 = big
        shared = set(t1) & set(t2)
        tips = (set(t1) | set(t2)) - shared
        tip_attached = [v for v in tips if q.degree(v) > 2]
        if tip_attached:
            if len(tip_attached) > 1:
                raise NotInClassError("both tips of the glued triangles carry tails")
            spike = tip_attached[0]
            central = t1 if spike in t2 else t2
            zset = set(central)
            tails = _a_type_tails(q, zset | {spike})
            return VatneType("IV", 3, frozenset(zset), frozenset({spike}), tails)
        core = set(t1) | set(t2)
        tails = _a_type_tails(q, core)
        return VatneType("II", None, frozenset(shared), frozenset(tips), tails)

    # no D-core: fork plus A-type rest.  Locate a fork when one exists: two
    # degree-1 vertices with a common neighbor, their arrows parallel.
    for c in range(n):
        leaves = [v for v in q.neighbors(c) if q.degree(v) == 1]
        for a, b_ in itertools.combinations(leaves, 2):
            if q.b[c][a] == q.b[c][b_]:
                tails = _a_type_tails(q, {a, b_, c})
                return VatneType("I", None, frozenset({c}), frozenset({a, b_}), tails)
    return VatneType("I", None, frozenset(), frozenset(), ())


def dn_dynkin(n: int) -> Quiver:
    """The D_n Dynkin quiver as the initial D_n weave realizes it.

    Vertices 0..n-4 form the tail path oriented toward its head, the fork
    vertex n-3 points at the head, and the fork leaves n-2 and n-1 point at
    the fork.  This matches the intersection quiver of the initial 3-graph
    with its standard basis ordering.
    """
    if n < 3:
        raise QuiverError("dn_dynkin needs n >= 3")
    arrows = [(i, i + 1) for i in range(n - 4)] if n >= 4 else []
    if n >= 4:
        arrows.append((n - 3, n - 4))
    arrows.append((n - 2, n - 3))
    arrows.append((n - 1, n - 3))
    return Quiver.from_arrows(n, arrows)
