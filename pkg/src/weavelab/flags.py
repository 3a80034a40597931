"""Exact local models of flag moduli: cross ratio, triple ratio, X-seeds.

Everything is computed over exact rationals.  The X-variable attached to a
basis cycle is its microlocal monodromy; around a short I-cycle that is the
cross ratio of the four lines of the local flag configuration, around a
short Y-cycle the triple ratio of three incident line/plane flags.  Under
mutation the X-variables transform by the cluster rule keyed to the signed
intersection numbers.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .quiver import Quiver, mutate_quiver

Rat = Fraction


class DegenerateConfiguration(ValueError):
    """Projective data violates a required distinctness or incidence."""


class ForbiddenValue(ValueError):
    """An X-value hit 0 or -1 where the mutation rule needs otherwise."""


def _rat(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class ProjPoint2:
    """A line in the plane: a nonzero pair of rationals up to scale."""

    x: Fraction
    y: Fraction

    def __init__(self, x, y):
        x, y = _rat(x), _rat(y)
        if x == 0 and y == 0:
            raise DegenerateConfiguration("projective point must be nonzero")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def wedge(self, other: "ProjPoint2") -> Fraction:
        return self.x * other.y - self.y * other.x

    def same_line(self, other: "ProjPoint2") -> bool:
        return self.wedge(other) == 0

    def scaled(self, t) -> "ProjPoint2":
        t = _rat(t)
        if t == 0:
            raise DegenerateConfiguration("scale factor must be nonzero")
        return ProjPoint2(self.x * t, self.y * t)


def _as_point(p) -> ProjPoint2:
    return p if isinstance(p, ProjPoint2) else ProjPoint2(*p)


def cross_ratio(a, b, c, d) -> Fraction:
    """(a^b / b^c) * (c^d / d^a); scale-invariant in each argument.

    Consecutive arguments (cyclically) must span distinct lines.
    """
    a, b, c, d = _as_point(a), _as_point(b), _as_point(c), _as_point(d)
    ab, bc, cd, da = a.wedge(b), b.wedge(c), c.wedge(d), d.wedge(a)
    if bc == 0 or da == 0:
        raise DegenerateConfiguration("cross ratio denominator vanishes")
    if ab == 0 or cd == 0:
        raise DegenerateConfiguration("consecutive lines coincide")
    return (ab * cd) / (bc * da)


Vec3 = tuple[Fraction, Fraction, Fraction]


def _vec3(v) -> Vec3:
    t = tuple(_rat(x) for x in v)
    if len(t) != 3:
        raise DegenerateConfiguration("need 3 coordinates")
    if all(x == 0 for x in t):
        raise DegenerateConfiguration("zero vector")
    return t


def _apply(cov: Vec3, vec: Vec3) -> Fraction:
    return sum(c * v for c, v in zip(cov, vec))


def _parallel(u: Vec3, v: Vec3) -> bool:
    return all(u[i] * v[j] == u[j] * v[i] for i in range(3) for j in range(i))


@dataclass(frozen=True)
class FlagTriple:
    """Three flags (line inside plane) in 3-space, stored exactly.

    Lines a, b, c are vectors, planes A, B, C covectors, with a in A, b in
    B, c in C, lines pairwise distinct and planes pairwise distinct.
    """

    a: Vec3
    b: Vec3
    c: Vec3
    A: Vec3
    B: Vec3
    C: Vec3

    def __init__(self, a, b, c, A, B, C):
        a, b, c = _vec3(a), _vec3(b), _vec3(c)
        A, B, C = _vec3(A), _vec3(B), _vec3(C)
        for cov, vec, name in ((A, a, "a in A"), (B, b, "b in B"), (C, c, "c in C")):
            if _apply(cov, vec) != 0:
                raise DegenerateConfiguration(f"incidence {name} fails")
        for u, v, name in ((a, b, "a,b"), (b, c, "b,c"), (c, a, "c,a")):
            if _parallel(u, v):
                raise DegenerateConfiguration(f"lines {name} coincide")
        for u, v, name in ((A, B, "A,B"), (B, C, "B,C"), (C, A, "C,A")):
            if _parallel(u, v):
                raise DegenerateConfiguration(f"planes {name} coincide")
        for k, v in zip("abcABC", (a, b, c, A, B, C)):
            object.__setattr__(self, k, v)


def triple_ratio(f: FlagTriple) -> Fraction:
    """B(a)C(b)A(c) / (B(c)C(a)A(b)).

    Degenerate incidences like a in B make a numerator factor vanish and
    the ratio exactly 0.
    """
    den = _apply(f.B, f.c) * _apply(f.C, f.a) * _apply(f.A, f.b)
    if den == 0:
        raise DegenerateConfiguration("triple ratio denominator vanishes")
    num = _apply(f.B, f.a) * _apply(f.C, f.b) * _apply(f.A, f.c)
    return num / den


@dataclass(frozen=True)
class XSeed:
    """A quiver together with one nonzero exact rational X-value per vertex."""

    quiver: Quiver
    x: tuple[Fraction, ...]

    def __init__(self, quiver: Quiver, x: Sequence):
        vals = tuple(_rat(v) for v in x)
        if len(vals) != quiver.n:
            raise ForbiddenValue("one X-value per vertex required")
        if any(v == 0 for v in vals):
            raise ForbiddenValue("X-values must be nonzero")
        object.__setattr__(self, "quiver", quiver)
        object.__setattr__(self, "x", vals)


def mutate_x_seed(seed: XSeed, i: int) -> XSeed:
    """Cluster X-mutation at vertex i; involutive where defined.

    x_i inverts; x_j picks up (1+x_i^{-1})^(-e) when e = <gamma_i, gamma_j>
    is positive and (1+x_i)^(-e) when e is negative.
    """
    q, x = seed.quiver, seed.x
    n = q.n
    if not (0 <= i < n):
        raise ForbiddenValue(f"index {i} out of range")
    xi = x[i]
    if xi == 0 or xi == -1:
        raise ForbiddenValue(f"x[{i}] = {xi} is a forbidden value for mutation")
    new = list(x)
    new[i] = 1 / xi
    for j in range(n):
        if j == i:
            continue
        e = q.b[i][j]
        if e > 0:
            new[j] = x[j] * (1 + 1 / xi) ** (-e)
        elif e < 0:
            new[j] = x[j] * (1 + xi) ** (-e)
    return XSeed(mutate_quiver(q, i), new)


def random_rational(rng: random.Random, bound: int = 100) -> Fraction:
    """Nonzero rational with numerator and denominator bounded by ``bound``."""
    while True:
        p = rng.randint(-bound, bound)
        if p != 0:
            break
    return Fraction(p, rng.randint(1, bound))


def random_line(rng: random.Random, bound: int = 100) -> ProjPoint2:
    while True:
        x = rng.randint(-bound, bound)
        y = rng.randint(-bound, bound)
        if x or y:
            return ProjPoint2(x, y)


def verify_local_model(trials: int = 100, rng_seed: int = 0) -> dict:
    """Check the short I-cycle mutation model on random exact lines.

    Each trial draws five lines a, b, c, d, e around the mutating edge.  The
    X-variable of a cycle is minus the cross ratio of its quadrilateral of
    lines: that sign aligns the monodromy formula with the cluster mutation
    exponents for arbitrary generic representatives (for cyclically ordered
    representatives, where all consecutive wedges are positive, it is the
    usual positivity normalization).  With x1 = -CR(a,b,c,e) and
    x2 = -CR(e,a,c,d), the mutated picture has x-values -CR(b,c,e,a) and
    -CR(e,b,c,d); the trial passes when these equal 1/x1 and x2*(1+x1),
    when the Plucker relation e^b * a^c = b^c * e^a - a^b * c^e holds, and
    when the X-seed mutation rule on the 2-vertex quiver with
    <g1,g2> = -1 reproduces both mutated values.
    """
    rng = random.Random(rng_seed)
    passes = 0
    failures: list[dict] = []
    resamples = 0
    q = Quiver([[0, -1], [1, 0]])  # <g1,g2> = -1: one arrow from v1 to v2
    for t in range(trials):
        while True:
            pts = [random_line(rng, 20) for _ in range(5)]
            a, b, c, d, e = pts
            try:
                x1 = -cross_ratio(a, b, c, e)
                x2 = -cross_ratio(e, a, c, d)
                mx1 = -cross_ratio(b, c, e, a)
                mx2 = -cross_ratio(e, b, c, d)
            except DegenerateConfiguration:
                resamples += 1
                continue
            if x1 in (0, -1) or x2 == 0:
                resamples += 1
                continue
            break
        plucker = (e.wedge(b) * a.wedge(c)
                   == b.wedge(c) * e.wedge(a) - a.wedge(b) * c.wedge(e))
        ok = plucker and mx1 == 1 / x1 and mx2 == x2 * (1 + x1)
        if ok:
            mut = mutate_x_seed(XSeed(q, (x1, x2)), 0)
            ok = mut.x == (mx1, mx2)
        if ok:
            passes += 1
        else:
            failures.append({
                "trial": t,
                "lines": [[str(p.x), str(p.y)] for p in pts],
                "x1": str(x1), "x2": str(x2), "mx1": str(mx1), "mx2": str(mx2),
            })
    return {"trials": trials, "passes": passes, "failures": failures,
            "resamples": resamples}
