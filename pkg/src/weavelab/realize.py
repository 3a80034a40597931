"""The constructive realizability engine for D_n-type weaves.

Any quiver mutation of the initial intersection quiver is realized as a
Legendrian mutation of the 3-graph followed by Reidemeister moves that
restore the working invariants: after every realized step the basis is all
short, the graph is sharp at the mutated cycle and locally sharp, and the
intersection quiver equals the matrix mutation of its predecessor.

States are identified with framed quiver seeds, so the weave-side crawl of
the exchange graph can be checked seed-for-seed against the quiver-side
enumeration.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .builders import build_initial_dn
from .cycles import (
    SHORT_I,
    SHORT_Y,
    CycleBasis,
    geometric_intersections,
    intersection_quiver,
    shape_of,
)
from .moves import (
    MoveError,
    TransportError,
    find_unpush_sites,
    find_flop_sites,
    flop,
    mutate_at_I,
    mutate_at_Y,
    push_through,
    unpush,
    _shortening_sites,
)
from .quiver import (
    FramedSeed,
    Quiver,
    VatneType,
    canonical_key,
    classify_vatne_type,
    dn_seed_count,
    mutate_framed,
    mutate_quiver,
)
from .threegraph import ThreeGraph


class RealizeError(MoveError):
    """A mutation step could not be realized or verified."""


@dataclass(frozen=True)
class WeaveState:
    """A 3-graph with its homology basis and the framed seed it represents."""

    graph: ThreeGraph
    basis: CycleBasis
    seed: FramedSeed

    @property
    def quiver(self) -> Quiver:
        return self.seed.quiver


@dataclass(frozen=True)
class NormalFormData:
    """Normal form tag with role data, refined by the weave when possible."""

    tag: str
    k: Optional[int]
    core_cycles: dict
    tails: tuple


@dataclass(frozen=True)
class RealizationStep:
    vertex: int
    case: str
    rewrites: tuple
    verification: dict

    @property
    def verified(self) -> bool:
        return all(self.verification.values())


def initial_state(n: int) -> WeaveState:
    g, basis = build_initial_dn(n)
    q = intersection_quiver(g, basis)
    return WeaveState(g, basis, FramedSeed(q))


def _pairs(g: ThreeGraph, basis: CycleBasis) -> dict:
    out = {}
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            pts = geometric_intersections(g, basis[i], basis[j])
            out[(i, j)] = (len(pts), sum(s for _, s in pts))
    return out


def _excess(pairs: dict) -> int:
    return sum(geo - abs(alg) for geo, alg in pairs.values())


def _total_length(basis: CycleBasis) -> int:
    return sum(len(c.edges) for c in basis)


def _all_short(g: ThreeGraph, basis: CycleBasis) -> bool:
    return all(shape_of(g, c) in (SHORT_I, SHORT_Y) for c in basis)


def _branches(g: ThreeGraph, basis: CycleBasis) -> int:
    from .cycles import _structure
    total = 0
    for c in basis:
        st = _structure(g, c.edges)
        total += sum(1 for v, s in st.items() if len(s) == 3)
    return total


def _measure(g: ThreeGraph, basis: CycleBasis):
    return (_excess(_pairs(g, basis)), _branches(g, basis),
            _total_length(basis), len(g.hexavalent_ids()))


def _candidates(g: ThreeGraph, basis: CycleBasis):
    from .moves import (find_flop_sites_mirror, find_unpush_sites_mirror,
                        flop_mirror, push_through_mirror, unpush_mirror)
    for i, c in enumerate(basis):
        if shape_of(g, c) not in (SHORT_I, SHORT_Y):
            for site in _shortening_sites(g, c):
                yield ("II", site, push_through, site)
                yield ("II~", site, push_through_mirror, site)
    for site in find_unpush_sites(g):
        yield ("II_inv", site, unpush, site)
    for site in find_unpush_sites_mirror(g):
        yield ("II_inv~", site, unpush_mirror, site)
    for site in find_flop_sites(g):
        yield ("III", site, flop, site)
    for site in find_flop_sites_mirror(g):
        yield ("III~", site, flop_mirror, site)


def _simplify(g: ThreeGraph, basis: CycleBasis, log: list,
              budget: int = 400) -> tuple[ThreeGraph, CycleBasis]:
    """Reidemeister moves until the basis is short and sharp.

    Best-first search over move applications, ordered by the measure
    (excess geometric intersections, branchings, total cycle length,
    hexavalent count).  Push-throughs shorten cycles and remove their
    branchings, reverse push-throughs cancel excess intersection pairs and
    shed hexavalent vertices, flops move excess pairs that reverse
    push-throughs cannot reach.  The search is deterministic; the move
    sequence reaching the first clean state is appended to ``log``.
    """
    import heapq

    def state_key(g1, b1):
        digest, edge_no = g1.canonical_form()
        cyc = tuple(sorted(tuple(sorted(edge_no[e] for e in c.edges))
                           for c in b1))
        return digest, cyc

    start_m = _measure(g, basis)
    if start_m[0] == 0 and start_m[1] == 0 and _all_short(g, basis):
        return g, basis
    counter = 0
    heap = [(start_m, 0, g, basis, [])]
    seen = {state_key(g, basis)}
    expansions = 0
    best_state = (start_m, g, basis, [])
    while heap and expansions < budget:
        m, _, g1, b1, path = heapq.heappop(heap)
        expansions += 1
        if m < best_state[0]:
            best_state = (m, g1, b1, path)
        if m[0] == 0 and m[1] == 0 and _all_short(g1, b1):
            log.extend(path)
            return g1, b1
        for kind, site, fn, anchor in _candidates(g1, b1):
            try:
                g2, b2, _ = fn(g1, b1, *site)
            except (TransportError, MoveError):
                continue
            key = state_key(g2, b2)
            if key in seen:
                continue
            seen.add(key)
            m2 = _measure(g2, b2)
            if (m2[0] > start_m[0] + 2 or m2[1] > start_m[1] + 2
                    or m2[2] > start_m[2] + 8 or m2[3] > start_m[3] + 8):
                continue
            counter += 1
            heapq.heappush(heap, (m2, counter, g2, b2, path + [(kind, site)]))
    m, g1, b1, path = best_state
    if m[0] == 0 and _all_short(g1, b1):
        log.extend(path)
        return g1, b1
    raise RealizeError(f"simplification did not stabilize (best measure {m})")


def _sharp_flags(g: ThreeGraph, basis: CycleBasis, v: int) -> tuple[bool, bool]:
    """(sharp at cycle v, locally sharp everywhere).

    Local sharpness is witnessed constructively: a cycle that is not sharp
    must become sharp at itself after some single available move.
    """
    pairs = _pairs(g, basis)

    def sharp_at(pd, i):
        return all(geo == abs(alg) for (a, b), (geo, alg) in pd.items()
                   if i in (a, b))

    sharp_v = sharp_at(pairs, v)
    locally = True
    for i in range(len(basis)):
        if sharp_at(pairs, i):
            continue
        witnessed = False
        for site in find_unpush_sites(g):
            try:
                g2, b2, _ = unpush(g, basis, *site)
            except TransportError:
                continue
            if sharp_at(_pairs(g2, b2), i):
                witnessed = True
                break
        if not witnessed:
            for site in find_flop_sites(g):
                try:
                    g2, b2, _ = flop(g, basis, *site)
                except TransportError:
                    continue
                if sharp_at(_pairs(g2, b2), i):
                    witnessed = True
                    break
        if not witnessed:
            locally = False
    return sharp_v, locally


def realize_mutation(state: WeaveState, v: int, verify: bool = True
                     ) -> tuple[RealizationStep, WeaveState]:
    """Perform one Legendrian mutation and the simplifications after it."""
    g, basis = state.graph, state.basis
    n = len(basis)
    if not (0 <= v < n):
        raise RealizeError(f"vertex {v} out of range")
    before = classify_vatne_type(state.quiver)
    shape = shape_of(g, basis[v])
    log: list = []
    if shape == SHORT_I:
        g2, b2, info = mutate_at_I(g, basis, v)
        log.append(("mutate_I", v))
    elif shape == SHORT_Y:
        g2, b2, info = mutate_at_Y(g, basis, v)
        log.append(("mutate_Y", v))
        log.extend(info["steps"])
    else:
        raise RealizeError(f"cycle {basis[v].name} is not short")
    g2, b2 = _simplify(g2, b2, log)

    seed2 = mutate_framed(state.seed, v)
    q2 = intersection_quiver(g2, b2)
    commutes = q2.b == seed2.quiver.b
    after = classify_vatne_type(q2) if commutes else None
    if verify:
        sharp_v, locally = _sharp_flags(g2, b2, v)
        allshort = _all_short(g2, b2)
        bad = g2.validate()
        verification = {
            "quiver_commutes": commutes,
            "sharp_at_mutated": sharp_v,
            "locally_sharp": locally,
            "all_short": allshort,
            "graph_valid": not bad,
        }
    else:
        verification = {"quiver_commutes": commutes}
    case = f"{before.tag}->{after.tag if after else '?'}"
    step = RealizationStep(v, case, tuple(log), verification)
    if verify and not step.verified:
        raise RealizeError(f"verification failed at vertex {v}: {verification} "
                           f"(trace {log})")
    new_state = WeaveState(g2, CycleBasis([c.renamed(state.basis[i].name)
                                           for i, c in enumerate(b2)]), seed2)
    return step, new_state


def realize_sequence(n: int, vertices: Sequence[int], verify: bool = True
                     ) -> tuple[list[RealizationStep], WeaveState]:
    """Fold realize_mutation over a vertex sequence from the initial graph."""
    state = initial_state(n)
    steps = []
    for k, v in enumerate(vertices):
        try:
            step, state = realize_mutation(state, v, verify=verify)
        except MoveError as ex:
            raise RealizeError(f"step {k} (vertex {v}): {ex}") from ex
        steps.append(step)
    return steps, state


@dataclass
class MutationTrace:
    """JSON-lines trace of realized rewrites."""

    records: list

    def dumps(self) -> str:
        return "\n".join(json.dumps(r) for r in self.records)


def trace_records(steps: Sequence[RealizationStep], states: Sequence[WeaveState]
                  ) -> list[dict]:
    out = []
    for i, step in enumerate(steps):
        out.append({
            "step": i,
            "kind": "mutation",
            "anchor": step.vertex,
            "case": step.case,
            "rewrites": [list(map(str, r)) for r in step.rewrites],
            "pre_hash": states[i].graph.digest(),
            "post_hash": states[i + 1].graph.digest(),
            "quiver_check": step.verification["quiver_commutes"],
        })
    return out


def crawl_exchange_graph_via_weaves(n: int, depth: Optional[int] = None,
                                    verify: bool = True,
                                    cap: int = 100_000) -> dict:
    """Breadth-first crawl of the exchange graph where every edge is a
    realized Legendrian mutation.

    Returns a report with the seed count, the expected count, the edge
    count, and any failures (which make the crawl incomplete).
    """
    state0 = initial_state(n)
    key0 = canonical_key(state0.seed)
    states = {key0: state0}
    edges = set()
    failures = []
    frontier = [key0]
    level = 0
    while frontier and (depth is None or level < depth):
        next_frontier = []
        for key in frontier:
            state = states[key]
            for v in range(n):
                k2 = canonical_key(mutate_framed(state.seed, v))
                pair = (min(key, k2), max(key, k2))
                if pair in edges and k2 in states:
                    continue
                try:
                    step, s2 = realize_mutation(state, v, verify=verify)
                except (MoveError, RealizeError) as ex:
                    failures.append({"seed": key.hex()[:16] if isinstance(key, bytes)
                                     else str(key)[:16],
                                     "vertex": v, "error": str(ex)})
                    continue
                edges.add(pair)
                if k2 not in states:
                    states[k2] = s2
                    next_frontier.append(k2)
                    if len(states) > cap:
                        raise RealizeError("seed cap exceeded")
        frontier = next_frontier
        level += 1
    expected = dn_seed_count(n) if depth is None else None
    return {
        "n": n,
        "seeds": len(states),
        "expected": expected,
        "edges": len(edges),
        "failures": failures,
        "complete": depth is None and not failures and len(states) == expected,
    }
