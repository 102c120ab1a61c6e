"""Partitions, Weyl group cosets and the generalized Bruhat decomposition in GL(r).

Permutations are 0-based tuples ``p`` with ``p[k]`` the image of ``k``; the
permutation matrix of ``p`` sends ``e_k`` to ``e_{p[k]}``, so that
``Ad(Pi)(A)[j][k] = A[p^-1(j)][p^-1(k)]``.
"""

from dataclasses import dataclass
from functools import cached_property

from .errors import InvalidPartition, SingularMatrix
from .exact import (
    ONE, ZERO, identity, invert_matrix, mat_mul, permutation_matrix, transpose,
)


@dataclass(frozen=True)
class Partition:
    parts: tuple

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if not parts or any(p <= 0 for p in parts):
            raise InvalidPartition(f"parts must be positive integers, got {self.parts!r}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def complete(cls, r):
        return cls((1,) * r)

    @property
    def r(self):
        return sum(self.parts)

    @property
    def s(self):
        return len(self.parts)

    @cached_property
    def blocks(self):
        out, start = [], 0
        for p in self.parts:
            out.append(range(start, start + p))
            start += p
        return tuple(out)

    @cached_property
    def block_index(self):
        """``block_index[k]`` is the block containing position ``k``."""
        return tuple(b for b, blk in enumerate(self.blocks) for _ in blk)

    def reversed(self):
        return Partition(tuple(reversed(self.parts)))


def invert_permutation(p):
    inv = [0] * len(p)
    for k, v in enumerate(p):
        inv[v] = k
    return tuple(inv)


def compose(p, q):
    """Permutation ``p o q``."""
    return tuple(p[q[k]] for k in range(len(q)))


def canonical_representative(p, partition):
    """The member of the coset ``p W_lambda`` that is increasing on every block."""
    p = tuple(p)
    out = list(p)
    for blk in partition.blocks:
        vals = sorted(p[k] for k in blk)
        for k, v in zip(blk, vals):
            out[k] = v
    return tuple(out)


@dataclass(frozen=True)
class CosetClass:
    """A class in W(r)/W_lambda, stored by its canonical representative."""

    sigma: tuple
    partition: Partition

    def __post_init__(self):
        sigma = tuple(int(x) for x in self.sigma)
        if sorted(sigma) != list(range(self.partition.r)):
            raise InvalidPartition("permutation length does not match the partition")
        object.__setattr__(self, "sigma", canonical_representative(sigma, self.partition))

    @property
    def matrix(self):
        return permutation_matrix(self.sigma)

    @property
    def inverse(self):
        return invert_permutation(self.sigma)


@dataclass(frozen=True)
class Mask:
    r: int
    free: frozenset

    def __contains__(self, pos):
        return pos in self.free

    def supports(self, m):
        """True when ``m`` is lower unipotent and vanishes off the free positions."""
        for j, row in enumerate(m):
            for k, x in enumerate(row):
                if j == k:
                    if x != ONE:
                        return False
                elif (j, k) not in self.free and x:
                    return False
        return True


def lower_positions(r):
    return [(j, k) for j in range(r) for k in range(j)]


def membership_mask(partition, coset, side="complement"):
    """Free strictly-lower positions of N_{lambda,[Pi]} or of its complement."""
    if coset.partition != partition:
        raise InvalidPartition("coset class belongs to another partition")
    inv = coset.inverse
    blk = partition.block_index
    comp = set()
    for j, k in lower_positions(partition.r):
        a, b = inv[j], inv[k]
        if a < b and blk[a] != blk[b]:
            comp.add((j, k))
    if side == "complement":
        return Mask(partition.r, frozenset(comp))
    if side == "subgroup":
        return Mask(partition.r, frozenset(set(lower_positions(partition.r)) - comp))
    raise ValueError(f"unknown side {side!r}")


def complement_permutation(sigma, partition=None):
    """Permutation whose inverse is ``k -> r - 1 - sigma^-1(k)``; an involution."""
    r = len(sigma)
    return tuple(sigma[r - 1 - k] for k in range(r))


def largest_cell_permutation(r):
    return tuple(r - 1 - k for k in range(r))


def is_block_lower(m, partition):
    blk = partition.block_index
    return all(not x for j, row in enumerate(m) for k, x in enumerate(row) if blk[j] < blk[k])


def is_block_diagonal(m, partition):
    blk = partition.block_index
    return all(not x for j, row in enumerate(m) for k, x in enumerate(row) if blk[j] != blk[k])


def factor_unipotent(c, partition, coset):
    """Split a lower unipotent ``c`` as ``A @ B`` with A in N^c and B in N.

    Entries are fixed by induction on ``j - k`` from
    ``c[j][k] = a[j][k] + b[j][k] + sum_{k<l<j} a[j][l] b[l][k]``.
    """
    r = len(c)
    comp = membership_mask(partition, coset, "complement")
    a = [[ONE if i == j else ZERO for j in range(r)] for i in range(r)]
    b = [[ONE if i == j else ZERO for j in range(r)] for i in range(r)]
    for gap in range(1, r):
        for k in range(r - gap):
            j = k + gap
            acc = c[j][k]
            for l in range(k + 1, j):
                if a[j][l] and b[l][k]:
                    acc = acc - a[j][l] * b[l][k]
            if (j, k) in comp:
                a[j][k] = acc
            else:
                b[j][k] = acc
    return tuple(map(tuple, a)), tuple(map(tuple, b))


def _complete_bruhat(g):
    """Return (L0, p) with g = L0 Pi_p B, L0 lower unipotent, B lower triangular."""
    r = len(g)
    cols = [list(col) for col in zip(*g)]
    perm = [0] * r
    for k in range(r - 1, -1, -1):
        col = cols[k]
        piv = next((i for i, x in enumerate(col) if x), None)
        if piv is None:
            raise SingularMatrix("matrix is singular")
        inv = col[piv].inverse()
        col = [x * inv for x in col]
        cols[k] = col
        perm[k] = piv
        for j in range(k):
            f = cols[j][piv]
            if f:
                cols[j] = [x - f * y if y else x for x, y in zip(cols[j], col)]
    lcols = [None] * r
    for k in range(r):
        lcols[perm[k]] = cols[k]
    return transpose(lcols), tuple(perm)


def bruhat_decompose(g, partition):
    """Unique factorization ``g = L @ Pi @ P`` with L in N^c_{lambda,[Pi]}, P in P_lambda."""
    g = tuple(tuple(row) for row in g)
    if len(g) != partition.r:
        raise InvalidPartition("matrix size does not match the partition")
    l0, perm = _complete_bruhat(g)
    coset = CosetClass(perm, partition)
    l, _ = factor_unipotent(l0, partition, coset)
    pi = coset.matrix
    p = mat_mul(mat_mul(transpose(pi), invert_matrix(l)), g)
    assert is_block_lower(p, partition)
    return l, coset, p


@dataclass(frozen=True)
class Flag:
    """A point of F_lambda in Bruhat coordinates: the flag ``L Pi . F_lambda``."""

    coset: CosetClass
    L: tuple

    @property
    def partition(self):
        return self.coset.partition

    @classmethod
    def special(cls, coset):
        return cls(coset, identity(coset.partition.r))

    def frame(self):
        return mat_mul(self.L, self.coset.matrix)

    def is_special(self):
        return self.L == identity(self.partition.r)


def flag_from_frame(frame, partition):
    l, coset, _ = bruhat_decompose(frame, partition)
    return Flag(coset, l)


def act_on_flag(g, flag):
    return flag_from_frame(mat_mul(g, flag.frame()), flag.partition)
