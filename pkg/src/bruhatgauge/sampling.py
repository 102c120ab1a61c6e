"""Random exact test data, driven by an explicit ``random.Random``."""

import os
import random
from fractions import Fraction

from .automorphisms import BundleAutomorphism, SplittingType
from .configurations import FlagConfiguration, component_cell, component_groups
from .connections import ParabolicWeights, adapted_connection as _build, adapted_connections
from .errors import InvalidWeights, NoAdaptedConnection
from .exact import ONE, ZERO, Poly, Scalar, det, pmat_const, pmat_identity, pmat_mul
from .weyl import CosetClass, Flag, Partition, membership_mask


def make_rng(seed=None):
    if seed is None:
        seed = int(os.environ.get("BRUHAT_SEED", "0"))
    return random.Random(seed)


def scalar(rng, bound=5, gaussian=False, nonzero=False):
    while True:
        re = rng.randint(-bound, bound)
        im = rng.randint(-bound, bound) if gaussian else 0
        if rng.random() < 0.3:
            re = Scalar(re, 0).re / rng.randint(1, bound)
        x = Scalar(re, im)
        if x or not nonzero:
            return x


def matrix(rng, r, c=None, **kw):
    c = r if c is None else c
    return tuple(tuple(scalar(rng, **kw) for _ in range(c)) for _ in range(r))


def invertible(rng, r, **kw):
    while True:
        m = matrix(rng, r, **kw)
        if det(m):
            return m


def partition(rng, r):
    parts, left = [], r
    while left:
        p = rng.randint(1, left)
        parts.append(p)
        left -= p
    return Partition(tuple(parts))


def permutation(rng, r):
    p = list(range(r))
    rng.shuffle(p)
    return tuple(p)


def unipotent_on(rng, mask, **kw):
    return tuple(
        tuple(ONE if j == k else (scalar(rng, **kw) if (j, k) in mask else ZERO)
              for k in range(mask.r))
        for j in range(mask.r)
    )


def lower_unipotent(rng, r, **kw):
    return tuple(tuple(ONE if j == k else (scalar(rng, **kw) if k < j else ZERO)
                       for k in range(r)) for j in range(r))


def flag_in(rng, lam, coset, **kw):
    return Flag(coset, unipotent_on(rng, membership_mask(lam, coset), **kw))


def complete_flag(rng, r, **kw):
    lam = Partition.complete(r)
    return flag_in(rng, lam, CosetClass(permutation(rng, r), lam), **kw)


def large_cell_flag(rng, r, **kw):
    lam = Partition.complete(r)
    return flag_in(rng, lam, CosetClass(tuple(range(r - 1, -1, -1)), lam), **kw)


def splitting(rng, r, lo=-3, hi=-1):
    while True:
        m = sorted(rng.randint(lo, hi) for _ in range(r))
        if len(set(m)) > 1:
            return SplittingType(tuple(m))


def points(rng, count, exclude=(), bound=6, gaussian=False):
    out = []
    seen = set(exclude)
    while len(out) < count:
        z = scalar(rng, bound=bound, gaussian=gaussian, nonzero=True)
        if z not in seen:
            seen.add(z)
            out.append(z)
    return tuple(out)


def configuration(rng, n, pts=None, **kw):
    if pts is None:
        pts = points(rng, n.point_count, exclude=(ZERO,))
    comps = []
    for l in component_groups(n):
        lam, coset = component_cell(n, l)
        comps.append(flag_in(rng, lam, coset, **kw))
    return FlagConfiguration(n, pts, tuple(comps))


def levi(rng, n, **kw):
    blk = n.partition.block_index
    while True:
        d = tuple(tuple(scalar(rng, **kw) if blk[j] == blk[k] else ZERO for k in range(n.r))
                  for j in range(n.r))
        if det(d):
            return d


def unipotent_automorphism(rng, n, factors=None, **kw):
    """Product of random elementary automorphisms ``I + p(z) e_jk`` with j in a later block."""
    blk = n.partition.block_index
    slots = [(j, k) for j in range(n.r) for k in range(n.r) if blk[j] > blk[k]]
    g = pmat_identity(n.r)
    for _ in range(factors if factors is not None else 2 * len(slots)):
        j, k = rng.choice(slots)
        e = [list(row) for row in pmat_identity(n.r)]
        e[j][k] = Poly([scalar(rng, **kw) for _ in range(n.degree_bound(j, k) + 1)])
        g = pmat_mul(g, tuple(map(tuple, e)))
    return BundleAutomorphism(n, g)


def automorphism(rng, n, **kw):
    return BundleAutomorphism(n, pmat_mul(unipotent_automorphism(rng, n, **kw).g,
                                          pmat_const(levi(rng, n, **kw))))


def nontrivial_unipotent(rng, n, **kw):
    while True:
        g = unipotent_automorphism(rng, n, **kw)
        if g.g != pmat_identity(n.r):
            return g


def weights(rng, npts, r, total, denominator=12):
    """Distinct ascending weights in [0, 1) on a 1/denominator grid summing to ``total``.

    Rows start as random distinct grid values; single entries are then moved
    one step at a time, keeping rows distinct, until the sum is right.
    """
    top = denominator - 1
    low = r * (r - 1) // 2
    if r > denominator or not low * npts <= total * denominator <= npts * (r * top - low):
        raise InvalidWeights(f"no distinct weights on this grid sum to {total}")
    rows = [set(rng.sample(range(denominator), r)) for _ in range(npts)]
    diff = total * denominator - sum(sum(row) for row in rows)
    while diff:
        step = 1 if diff > 0 else -1
        moves = [(i, v) for i, row in enumerate(rows) for v in row
                 if 0 <= v + step <= top and v + step not in row]
        i, v = rng.choice(moves)
        rows[i].remove(v)
        rows[i].add(v + step)
        diff -= step
    return ParabolicWeights(tuple(tuple(Fraction(v, denominator) for v in sorted(row))
                                  for row in rows))


def marked_points(rng, count, bound=6, gaussian=False):
    """``count`` distinct finite points, the last one 0."""
    return points(rng, count - 1, exclude=(ZERO,), bound=bound, gaussian=gaussian) + (ZERO,)


def adapted_connection(rng, n, npts, flag_maker=None, tries=50, **kw):
    """Random (connection, flags, weights) with generic flags, or raise after ``tries``."""
    flag_maker = flag_maker or large_cell_flag
    for _ in range(tries):
        try:
            w = weights(rng, npts, n.r, -n.degree)
        except InvalidWeights as exc:
            raise NoAdaptedConnection("the degree cannot be balanced by weights") from exc
        pts = marked_points(rng, npts - 1)
        flags = tuple(flag_maker(rng, n.r) for _ in range(npts))
        try:
            _, _, basis = adapted_connections(n, pts, flags, w)
            coeffs = [scalar(rng, **kw) for _ in basis]
            return _build(n, pts, flags, w, coeffs), flags, w
        except NoAdaptedConnection:
            continue
    raise NoAdaptedConnection("could not sample an adapted connection")
