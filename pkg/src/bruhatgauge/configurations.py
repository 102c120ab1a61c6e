"""Configurations of generalized flags over marked points and their normal form.

Component 0 sits at the origin in the cell of the reversed partition; the
component at the i-th point of group l sits in the cell of the shifted
partition lambda_l with class tau_l.
"""

from dataclasses import dataclass

from .automorphisms import (
    BundleAutomorphism, aut_basis, aut_membership, is_levi, shift_cycle, shifted_partition,
)
from .errors import DimensionMismatch, InvalidConfiguration, InvalidPartition, NotAnAutomorphism, NotBlockDiagonal
from .exact import S, ZERO, conjugate_by, identity, invert_matrix, pmat_const, pmat_eval, pmat_mul
from .weyl import (
    CosetClass, Flag, act_on_flag, flag_from_frame, largest_cell_permutation, membership_mask,
)


def component_cell(n, l):
    """The (partition, class) of a component of group l; l = 0 is the origin."""
    if l == 0:
        lam = n.partition.reversed()
        return lam, CosetClass(largest_cell_permutation(n.r), lam)
    lam = shifted_partition(n, l)
    tau, _ = shift_cycle(n, l)
    return lam, CosetClass(tau, lam)


def component_groups(n):
    """Group index of every component, origin first."""
    return (0,) + tuple(n.group_of_point(i) for i in range(n.point_count))


@dataclass(frozen=True)
class FlagConfiguration:
    splitting: object
    points: tuple
    components: tuple
    origin: object = ZERO

    def __post_init__(self):
        n = self.splitting
        object.__setattr__(self, "points", tuple(S(p) for p in self.points))
        object.__setattr__(self, "origin", S(self.origin))
        object.__setattr__(self, "components", tuple(self.components))
        if len(self.points) != n.point_count:
            raise InvalidConfiguration(f"expected {n.point_count} points, got {len(self.points)}")
        if len(self.components) != n.point_count + 1:
            raise InvalidConfiguration("need one component per point plus the origin")
        if self.origin in self.points or len(set(self.points)) != len(self.points):
            raise InvalidConfiguration("points must be distinct and differ from the origin")
        for f, l in zip(self.components, component_groups(n)):
            lam, coset = component_cell(n, l)
            if f.coset != coset:
                raise InvalidConfiguration(f"component of group {l} lies in the wrong cell")
            if not membership_mask(lam, coset).supports(f.L):
                raise InvalidConfiguration("coordinates are not supported on the cell mask")

    @classmethod
    def from_coordinates(cls, n, points, coords, origin=ZERO):
        """Build from coordinate matrices, one per component, origin first."""
        comps = []
        for L, l in zip(coords, component_groups(n)):
            _, coset = component_cell(n, l)
            comps.append(Flag(coset, tuple(tuple(S(x) for x in row) for row in L)))
        return cls(n, tuple(points), tuple(comps), origin)

    @property
    def locations(self):
        return (self.origin,) + self.points

    def is_special(self):
        return all(f.is_special() for f in self.components)


def special_element(n, points, origin=ZERO):
    comps = tuple(Flag.special(component_cell(n, l)[1]) for l in component_groups(n))
    return FlagConfiguration(n, tuple(points), comps, origin)


def evaluate_action(g, cfg):
    if isinstance(g, BundleAutomorphism):
        g = g.g
    if not aut_membership(g, cfg.splitting):
        raise NotAnAutomorphism("matrix violates the automorphism constraints")
    comps = tuple(act_on_flag(pmat_eval(g, z), f) for z, f in zip(cfg.locations, cfg.components))
    return FlagConfiguration(cfg.splitting, cfg.points, comps, cfg.origin)


def normalize_configuration(cfg):
    """The unique unipotent automorphism taking ``cfg`` to the special element.

    Component 0 is cleared first by a constant factor in N_N; then the points
    of each group in increasing order, each by a G_l element that is the
    identity at the origin and at the other points of that group.
    """
    n = cfg.splitting
    r = n.r
    basis = aut_basis(n, cfg.points, cfg.origin)
    g = pmat_const(invert_matrix(cfg.components[0].L))
    cur = evaluate_action(g, cfg)
    for l in range(1, n.s):
        for i in n.group_points(l):
            L = cur.components[i + 1].L
            if L == identity(r):
                continue
            m = [list(row) for row in pmat_const(identity(r))]
            for e in basis.groups[l]:
                if e.point == i:
                    j, k = e.position
                    m[j][k] = m[j][k] + e.poly * (-L[j][k])
            h = tuple(tuple(row) for row in m)
            cur = evaluate_action(h, cur)
            g = pmat_mul(h, g)
    if not cur.is_special():
        raise InvalidConfiguration("normalization did not reach the special element")
    return BundleAutomorphism(n, g), cur


def levi_act(d, cfg):
    d = tuple(tuple(S(x) for x in row) for row in d)
    if len(d) != cfg.splitting.r:
        raise DimensionMismatch("matrix size does not match the splitting")
    if not is_levi(d, cfg.splitting):
        raise NotBlockDiagonal("expected an invertible block-diagonal matrix")
    d_inv = invert_matrix(d)
    comps = tuple(Flag(f.coset, conjugate_by(d, f.L, d_inv)) for f in cfg.components)
    return FlagConfiguration(cfg.splitting, cfg.points, comps, cfg.origin)


def project_flag(f, partition):
    if set(f.partition.parts) != {1}:
        raise InvalidPartition("projection expects a complete flag")
    return flag_from_frame(f.frame(), partition)


def evenly_split_configuration(n, z1, b0, b1):
    """Two-point configuration for an evenly split bundle (s = 2, d_1 = 1).

    ``b0`` and ``b1`` are the coordinate matrices at 0 and at ``z1``.
    """
    if n.s != 2 or n.gaps != (1,):
        raise InvalidConfiguration("expected an evenly split bundle")
    return FlagConfiguration.from_coordinates(n, (z1,), (b0, b1))
