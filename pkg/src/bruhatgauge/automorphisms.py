"""The automorphism group of a split bundle O(m_1) + ... + O(m_r) over the sphere.

An automorphism is stored as its matrix ``g(z)`` of polynomials in the affine
coordinate. Blocks are indexed from 0 in the block structure of the
splitting; the special subgroups ``G_l`` are indexed by ``l = 1, ..., s-1``.
"""

from dataclasses import dataclass
from functools import cached_property

from .errors import (
    DimensionMismatch, IndexOutOfRange, InvalidBlock, InvalidSplitting,
    NotAnAutomorphism, RepeatedPoint, ZeroOrInfinitePoint,
)
from .exact import (
    ONE, ZERO, ZERO_POLY, Poly, S, det, invert_matrix, lagrange_polynomial,
    mat_mul, permutation_matrix, pmat_add, pmat_coefficient, pmat_const, pmat_det,
    pmat_eval, pmat_identity, pmat_mul, pmat_scale, pmat_sub,
)
from .weyl import Mask, Partition, is_block_diagonal, is_block_lower


@dataclass(frozen=True)
class SplittingType:
    m: tuple

    def __post_init__(self):
        m = tuple(int(x) for x in self.m)
        if len(m) < 2:
            raise InvalidSplitting("rank must be at least 2")
        if list(m) != sorted(m):
            raise InvalidSplitting(f"splitting must be sorted ascending, got {m}")
        if len(set(m)) < 2:
            raise InvalidSplitting("trivial twist (a single distinct degree) is excluded")
        object.__setattr__(self, "m", m)

    @property
    def r(self):
        return len(self.m)

    @cached_property
    def values(self):
        return tuple(sorted(set(self.m)))

    @property
    def s(self):
        return len(self.values)

    @cached_property
    def partition(self):
        return Partition(tuple(self.m.count(v) for v in self.values))

    @property
    def parts(self):
        return self.partition.parts

    @cached_property
    def gaps(self):
        v = self.values
        return tuple(v[l + 1] - v[l] for l in range(self.s - 1))

    @property
    def degree(self):
        return sum(self.m)

    @property
    def span(self):
        """``n_s - n_1``, the largest degree an automorphism entry may have."""
        return self.values[-1] - self.values[0]

    @property
    def point_count(self):
        return sum(self.gaps)

    def degree_bound(self, row, col):
        """Largest allowed degree of entry (row, col); -1 means the entry vanishes."""
        return self.m[row] - self.m[col] if self.m[row] >= self.m[col] else -1

    def group_points(self, l):
        """Indices into the point list owned by the group G_l, ``1 <= l <= s-1``."""
        start = sum(self.gaps[: l - 1])
        return range(start, start + self.gaps[l - 1])

    def group_of_point(self, i):
        for l in range(1, self.s):
            if i in self.group_points(l):
                return l
        raise IndexOutOfRange(f"point index {i} out of range")


def aut_membership(g, n):
    """True iff ``g`` satisfies the block degree constraints and has constant nonzero det."""
    if len(g) != n.r or any(len(row) != n.r for row in g):
        return False
    for j, row in enumerate(g):
        for k, x in enumerate(row):
            if x.degree > n.degree_bound(j, k):
                return False
    d = pmat_det(g)
    return d.degree == 0


def block_dimension(n, j, k):
    if not (0 <= k < n.s and 0 <= j < n.s):
        raise IndexOutOfRange(f"block ({j}, {k}) out of range")
    if j < k:
        raise InvalidBlock("blocks above the diagonal are zero")
    p = n.parts
    return p[j] * p[k] * (n.values[j] - n.values[k] + 1)


def monomial_basis(n):
    """All monomials ``z^t e_{row,col}`` allowed by the degree constraints."""
    out = []
    for row in range(n.r):
        for col in range(n.r):
            for t in range(n.span + 1):
                if t <= n.degree_bound(row, col):
                    out.append((row, col, t))
    return out


def shift_cycle(n, l):
    if not 1 <= l <= n.s - 1:
        raise IndexOutOfRange(f"l must lie in 1..{n.s - 1}, got {l}")
    head = sum(n.parts[:l])
    tail = n.r - head
    tau = tuple(k + head if k < tail else k - tail for k in range(n.r))
    return tau, permutation_matrix(tau)


def shifted_partition(n, l):
    p = n.parts
    return Partition(p[l:] + p[:l])


def gl_mask(n, l):
    if not 1 <= l <= n.s - 1:
        raise IndexOutOfRange(f"l must lie in 1..{n.s - 1}, got {l}")
    head = sum(n.parts[:l])
    return Mask(n.r, frozenset((j, k) for j in range(head, n.r) for k in range(head)))


@dataclass(frozen=True)
class BundleAutomorphism:
    splitting: SplittingType
    g: tuple

    @classmethod
    def checked(cls, splitting, g):
        g = tuple(tuple(row) for row in g)
        if not aut_membership(g, splitting):
            raise NotAnAutomorphism("matrix violates the automorphism constraints")
        return cls(splitting, g)

    @classmethod
    def constant(cls, splitting, m):
        return cls.checked(splitting, pmat_const(m))

    @classmethod
    def identity(cls, splitting):
        return cls(splitting, pmat_identity(splitting.r))

    def __call__(self, z):
        return pmat_eval(self.g, z)

    def __mul__(self, other):
        if self.splitting != other.splitting:
            raise NotAnAutomorphism("splitting types differ")
        return BundleAutomorphism(self.splitting, pmat_mul(self.g, other.g))

    def coefficient(self, k):
        return pmat_coefficient(self.g, k)

    def inverse(self):
        """Exact inverse via the nilpotent expansion around the constant term."""
        r = self.splitting.r
        p0 = self.coefficient(0)
        p0_inv = invert_matrix(p0)
        k = pmat_mul(pmat_sub(self.g, pmat_const(p0)), pmat_const(p0_inv))
        acc = pmat_identity(r)
        term = pmat_identity(r)
        for _ in range(self.splitting.s):
            term = pmat_scale(pmat_mul(term, k), -ONE)
            acc = pmat_add(acc, term)
        return BundleAutomorphism(self.splitting, pmat_mul(pmat_const(p0_inv), acc))

    def at_infinity(self):
        """Value at infinity of the matrix in the trivialization there."""
        n = self.splitting
        return tuple(
            tuple(self.g[j][k].coeff(n.m[j] - n.m[k]) if n.m[j] >= n.m[k] else ZERO
                  for k in range(n.r))
            for j in range(n.r)
        )

    def chart_infinity(self):
        """``zeta^N g(1/zeta) zeta^-N`` as a polynomial matrix in zeta."""
        n = self.splitting
        rows = []
        for j in range(n.r):
            row = []
            for k in range(n.r):
                e = n.m[j] - n.m[k]
                x = self.g[j][k]
                if e < 0 or not x:
                    row.append(ZERO_POLY)
                    continue
                cs = [ZERO] * (e + 1)
                for u, c in enumerate(x.coeffs):
                    cs[e - u] = c
                row.append(Poly._raw(cs))
            rows.append(tuple(row))
        return tuple(rows)

    def is_unipotent_part(self):
        """True when the Levi factor at the constant term is the identity."""
        p0 = self.coefficient(0)
        blk = self.splitting.partition.block_index
        return all(p0[j][k] == (ONE if j == k else ZERO)
                   for j in range(len(p0)) for k in range(len(p0)) if blk[j] == blk[k])


def _check_points(points, origin):
    pts = [S(p) for p in points]
    origin = S(origin)
    if any(p == origin for p in pts):
        raise ZeroOrInfinitePoint("points must differ from the origin")
    if len(set(pts)) != len(pts):
        raise RepeatedPoint("points must be pairwise distinct")
    return tuple(pts)


@dataclass(frozen=True)
class BasisElement:
    group: int
    point: object
    position: tuple
    poly: Poly

    def nilpotent(self, r):
        j, k = self.position
        return tuple(tuple(self.poly if (a, b) == (j, k) else ZERO_POLY for b in range(r))
                     for a in range(r))


@dataclass(frozen=True)
class AutBasis:
    splitting: SplittingType
    points: tuple
    origin: object
    groups: tuple

    def __len__(self):
        return sum(len(g) for g in self.groups)

    def element(self, coeffs):
        """``(prod_l (I + sum X)) u`` for coefficient lists aligned with ``groups``."""
        n = self.splitting
        r = n.r
        out = pmat_identity(r)
        for l in range(1, n.s):
            out = pmat_mul(out, _exp_group(self.groups[l], coeffs[l], r))
        u = _exp_group(self.groups[0], coeffs[0], r)
        return BundleAutomorphism(n, pmat_mul(out, u))


def _exp_group(elems, coeffs, r):
    """``I + sum c X`` over the given generators."""
    if len(elems) != len(coeffs):
        raise DimensionMismatch("coefficient count does not match the basis")
    m = [list(row) for row in pmat_identity(r)]
    for e, c in zip(elems, coeffs):
        j, k = e.position
        m[j][k] = m[j][k] + e.poly * S(c)
    return tuple(tuple(row) for row in m)


def aut_basis(n, points, origin=ZERO):
    """Basis of the unipotent part of Aut(E_N) split into the groups G_0, ..., G_{s-1}.

    ``points`` holds one finite point per unit of each gap ``d_l``, grouped by
    l in order. Every G_l element with l >= 1 is the identity at ``origin``.
    """
    if len(points) != n.point_count:
        raise DimensionMismatch(f"expected {n.point_count} points, got {len(points)}")
    pts = _check_points(points, origin)
    origin = S(origin)
    blocks = n.partition.blocks
    groups = []
    g0 = []
    for bj in range(n.s):
        for bk in range(bj):
            for row in blocks[bj]:
                for col in blocks[bk]:
                    g0.append(BasisElement(0, None, (row, col), Poly.const(ONE)))
    groups.append(tuple(g0))
    for l in range(1, n.s):
        elems = []
        for i in n.group_points(l):
            for bj in range(l, n.s):
                for bk in range(l):
                    support = [q for grp in range(bk + 1, bj + 1) for q in n.group_points(grp)]
                    poly = lagrange_polynomial([pts[q] for q in support], support.index(i),
                                               vanish_at_zero=True, origin=origin)
                    for row in blocks[bj]:
                        for col in blocks[bk]:
                            elems.append(BasisElement(l, i, (row, col), poly))
        groups.append(tuple(elems))
    return AutBasis(n, pts, origin, tuple(groups))


@dataclass(frozen=True)
class AutFactorization:
    coeffs: tuple
    u: tuple
    d: tuple
    factors: tuple


def factor_automorphism(g, basis):
    """Write ``g = (g_1 ... g_{s-1}) u d`` with g_l in G_l, u in N_N and d in D_N."""
    n = basis.splitting
    if isinstance(g, BundleAutomorphism):
        if g.splitting != n:
            raise NotAnAutomorphism("splitting type does not match the basis")
        g = g.g
    if not aut_membership(g, n):
        raise NotAnAutomorphism("matrix violates the automorphism constraints")
    r = n.r
    lam = n.partition
    blk = lam.block_index
    p0 = pmat_eval(g, basis.origin)
    d = tuple(tuple(x if blk[j] == blk[k] else ZERO for k, x in enumerate(row))
              for j, row in enumerate(p0))
    u = mat_mul(p0, invert_matrix(d))
    h = pmat_mul(g, pmat_const(invert_matrix(p0)))
    coeffs = [tuple(u[e.position[0]][e.position[1]] for e in basis.groups[0])]
    values = {}
    for l in range(1, n.s):
        cs = []
        for e in basis.groups[l]:
            if e.point not in values:
                values[e.point] = pmat_eval(h, basis.points[e.point])
            j, k = e.position
            cs.append(values[e.point][j][k])
        coeffs.append(tuple(cs))
    factors = tuple(
        BundleAutomorphism(n, _exp_group(basis.groups[l], coeffs[l], r)) for l in range(1, n.s)
    )
    out = AutFactorization(tuple(coeffs), u, d, factors)
    if reconstruct(basis, out).g != tuple(tuple(row) for row in g):
        raise NotAnAutomorphism("factorization does not reproduce the input")
    assert is_block_lower(u, lam) and is_block_diagonal(d, lam)
    return out


def reconstruct(basis, fac):
    n = basis.splitting
    out = pmat_identity(n.r)
    for f in fac.factors:
        out = pmat_mul(out, f.g)
    return BundleAutomorphism(n, pmat_mul(out, pmat_const(mat_mul(fac.u, fac.d))))


def is_levi(d, n):
    return is_block_diagonal(d, n.partition) and det(d) != ZERO


__all__ = [
    "SplittingType", "BundleAutomorphism", "AutBasis", "AutFactorization", "BasisElement",
    "aut_membership", "block_dimension", "monomial_basis", "shift_cycle", "shifted_partition",
    "gl_mask", "aut_basis", "factor_automorphism", "reconstruct", "is_levi",
]
