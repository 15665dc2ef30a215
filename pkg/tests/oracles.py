"""Independent reference computations used to cross-check the library."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product
from math import floor, ceil, gcd

from arithsurf.fiber_graph import FiberModel
from arithsurf.moves import BranchPoint, InternalNode, NodePoint, SmoothPoint


def _det(a, b):
    return a[0] * b[1] - a[1] * b[0]


# ---------------------------------------------------------------------------
# cones


def hull_boundary(u, v):
    """Lattice points on the compact boundary of conv(cone minus origin), by gift wrapping."""
    n = _det(u, v)
    assert n > 0
    # z = (alpha*u + beta*v)/n with alpha = det(z, v), beta = det(u, z)
    pts = []
    for alpha in range(n + 1):
        for beta in range(n + 1 - alpha):
            x, y = alpha * u[0] + beta * v[0], alpha * u[1] + beta * v[1]
            if (alpha or beta) and x % n == 0 and y % n == 0:
                pts.append((x // n, y // n))
    chain = [tuple(u)]
    cur = tuple(u)
    while cur != tuple(v):
        ahead = [p for p in pts if _det(cur, p) > 0]
        best = ahead[0]
        for p in ahead[1:]:
            side = _det((best[0] - cur[0], best[1] - cur[1]), (p[0] - cur[0], p[1] - cur[1]))
            if side > 0:
                best = p
            elif side == 0 and abs(p[0] - cur[0]) + abs(p[1] - cur[1]) < abs(best[0] - cur[0]) + abs(best[1] - cur[1]):
                best = p
        chain.append(best)
        cur = best
    return chain


def weights_from_rays(rays):
    out = []
    for prev, mid, nxt in zip(rays, rays[1:], rays[2:]):
        sx, sy = prev[0] + nxt[0], prev[1] + nxt[1]
        a = -Fraction(sx, mid[0]) if mid[0] else -Fraction(sy, mid[1])
        assert a.denominator == 1 and (sx, sy) == (-a * mid[0], -a * mid[1])
        out.append(int(a))
    return out


def _bezout(x, y):
    """Integers (p, q) with p*x + q*y = 1."""
    if y == 0:
        return (x, 0) if abs(x) == 1 else None
    old_r, r, old_s, s, old_t, t = x, y, 1, 0, 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    assert old_r == 1
    return old_s, old_t


def enumerate_panels(rays):
    """P(i) = {p : p(l_i) = 1, p >= 0 on the cone}, for i = 1..m, by a bounded search."""
    l0, lend = rays[0], rays[-1]
    out = []
    for li in rays[1:-1]:
        p0 = _bezout(li[0], li[1])
        ell = (-li[1], li[0])  # z -> det(l_i, z)
        ev = lambda f, z: f[0] * z[0] + f[1] * z[1]
        # p = p0 + t * ell ; need p(l0) >= 0 and p(lend) >= 0
        lo, hi = None, None
        for ray in (l0, lend):
            a, b = ev(p0, ray), ev(ell, ray)
            assert b != 0
            bound = Fraction(-a, b)
            if b > 0:
                lo = ceil(bound) if lo is None else max(lo, ceil(bound))
            else:
                hi = floor(bound) if hi is None else min(hi, floor(bound))
        found = set()
        for t in range(lo, hi + 1):
            p = (p0[0] + t * ell[0], p0[1] + t * ell[1])
            assert ev(p, li) == 1
            if all(ev(p, r) >= 0 for r in rays):
                found.add(p)
        out.append(frozenset(found))
    return out


def dual_monoid_irreducibles(u, v, bound):
    """Irreducible elements of the dual monoid with coordinates bounded by ``bound``."""
    els = [
        (p, q)
        for p in range(-bound, bound + 1)
        for q in range(-bound, bound + 1)
        if (p, q) != (0, 0) and p * u[0] + q * u[1] >= 0 and p * v[0] + q * v[1] >= 0
    ]
    members = set(els)
    irr = []
    for a in els:
        if not any((a[0] - b[0], a[1] - b[1]) in members for b in els if b != a):
            irr.append(a)
    return set(irr)


def random_cone(rng: random.Random, max_index=50):
    while True:
        n = rng.randint(2, max_index)
        k = rng.randrange(1, n)
        if gcd(k, n) == 1:
            break
    u, v = (1, 0), (-k, n)
    a, b, c, d = rng.choice(SMALL_GL2)
    return (a * u[0] + b * u[1], c * u[0] + d * u[1]), (a * v[0] + b * v[1], c * v[0] + d * v[1])


SMALL_GL2 = [
    m
    for m in product(range(-2, 3), repeat=4)
    if m[0] * m[3] - m[1] * m[2] in (1, -1)
]


def cone_family(max_index=50, copies=1):
    """Normal forms (1,0),(-k,n) plus unimodular images, all with det <= max_index."""
    normal = [((1, 0), (-k, n)) for n in range(2, max_index + 1) for k in range(1, n) if gcd(k, n) == 1]
    out = list(normal)
    mats = [m for m in SMALL_GL2 if m != (1, 0, 0, 1)]
    for idx, (u, v) in enumerate(normal):
        for j in range(copies):
            a, b, c, d = mats[(idx * 7 + j * 13) % len(mats)]
            out.append(((a * u[0] + b * u[1], c * u[0] + d * u[1]), (a * v[0] + b * v[1], c * v[0] + d * v[1])))
    return out


# ---------------------------------------------------------------------------
# fundamental cycles


def fundamental_cycle_bruteforce(matrix, cap=6):
    """Componentwise minimum over all c >= 1 (entries <= cap) with M c <= 0."""
    n = len(matrix)
    best = None
    for c in product(range(1, cap + 1), repeat=n):
        if all(sum(matrix[j][i] * c[i] for i in range(n)) <= 0 for j in range(n)):
            best = c if best is None else tuple(min(x, y) for x, y in zip(best, c))
    return best


def fixed_point_cycle(matrix):
    """Iterate from the reduced cycle, bumping every positive coordinate at once."""
    n = len(matrix)
    z = [1] * n
    while True:
        pos = [j for j in range(n) if sum(matrix[j][i] * z[i] for i in range(n)) > 0]
        if not pos:
            return tuple(z)
        for j in pos:
            z[j] += 1


# ---------------------------------------------------------------------------
# singular models


def expand(model: FiberModel) -> FiberModel:
    """Regular model recovered from the chains stored on each singular point."""
    comps = list(model.components)
    edges = list(model.edges)
    for sp in model.singular:
        comps.extend(sp.chain)
        edges.extend(sp.edges)
    return FiberModel(model.p, comps, edges, model.branches)


# ---------------------------------------------------------------------------
# random moves


def random_point(model: FiberModel, rng: random.Random):
    choices = []
    for c in model.components:
        base = 2 * c.kd if c.kind == "node_rational" else c.kd
        choices.append(SmoothPoint(c.id, base, True))
        choices.append(SmoothPoint(c.id, 2 * base, rng.random() < 0.8))
        if c.kind == "node_rational":
            choices.append(InternalNode(c.id))
    choices += [NodePoint(i) for i in range(len(model.edges))]
    choices += [BranchPoint(b.id) for b in model.branches]
    return rng.choice(choices)


def stable_curve_axioms(lreg: FiberModel) -> bool:
    """Reduced, separable, and every geometric rational component has >= 3 special points.

    Counted on the expanded regular model: a contracted chain contributes the
    points where it touches the remaining components.
    """
    full = expand(lreg)
    for c in lreg.components:
        if c.m != 1 or not c.sep:
            return False
        if c.kind == "general":
            if not c.normal:
                return False
            continue
        points = 0
        for e in full.edges:
            if not e.sep:
                return False
            if e.a == c.id and e.b == c.id:
                points += 2 * e.deg
            elif c.id in (e.a, e.b):
                points += e.deg
        points += sum(b.f for b in full.branches if b.on == c.id)
        geometric = c.kd
        if c.kind == "node_rational":
            points += 2 * c.kd
            geometric = 2 * c.kd
        if points < 3 * geometric:
            return False
    if any(b.e != 1 or not b.sep for b in full.branches):
        return False
    return True
