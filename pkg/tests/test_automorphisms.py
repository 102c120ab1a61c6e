import itertools

import pytest
from hypothesis import given, settings, strategies as st

from bruhatgauge import sampling
from bruhatgauge.automorphisms import (
    BundleAutomorphism, SplittingType, aut_basis, aut_membership, block_dimension,
    factor_automorphism, gl_mask, monomial_basis, reconstruct, shift_cycle, shifted_partition,
)
from bruhatgauge.errors import (
    DimensionMismatch, IndexOutOfRange, InvalidBlock, InvalidSplitting, NotAnAutomorphism,
    RepeatedPoint, ZeroOrInfinitePoint,
)
from bruhatgauge.exact import (
    ONE, Poly, S, diag, identity, invert_matrix, mat_mul, matrix, pmat, pmat_const, pmat_det,
    pmat_eval, pmat_identity, pmat_mul,
)
from bruhatgauge.weyl import CosetClass, is_block_lower, membership_mask


def all_splittings(max_r=4, lo=-3, hi=-1):
    out = []
    for r in range(2, max_r + 1):
        for m in itertools.combinations_with_replacement(range(lo, hi + 1), r):
            if len(set(m)) > 1:
                out.append(SplittingType(m))
    return out


N21 = SplittingType((-2, -1))


def one_based(mask):
    return {(j + 1, k + 1) for j, k in mask.free}


def test_splitting_type_derived_data():
    n = SplittingType((-3, -1, -1, 0))
    assert n.values == (-3, -1, 0) and n.parts == (1, 2, 1)
    assert n.gaps == (2, 1) and n.degree == -5 and n.point_count == 3
    with pytest.raises(InvalidSplitting):
        SplittingType((-1, -2))
    with pytest.raises(InvalidSplitting):
        SplittingType((-1, -1))


def test_membership_examples():
    assert aut_membership(pmat_const(matrix([[2, 0], [5, 3]])), N21)
    assert aut_membership(pmat([[[2], [0]], [[1, 4], [3]]]), N21)
    assert not aut_membership(pmat([[[2], [0]], [[1, 4, 1], [3]]]), N21)
    assert not aut_membership(pmat([[[2], [1]], [[0], [3]]]), N21)
    assert not aut_membership(pmat([[[0], [0]], [[1], [3]]]), N21)


def test_block_dimension_examples():
    n = SplittingType((-3, -1, -1))
    assert block_dimension(n, 1, 0) == 6
    assert block_dimension(n, 1, 1) == 4
    assert block_dimension(N21, 1, 0) == 2
    with pytest.raises(InvalidBlock):
        block_dimension(n, 0, 1)


def test_shift_cycle_examples():
    tau, pi = shift_cycle(SplittingType((-3, -2, -1)), 1)
    assert tuple(t + 1 for t in tau) == (2, 3, 1)
    tau, _ = shift_cycle(SplittingType((-2, -2, -1)), 1)
    assert tuple(t + 1 for t in tau) == (3, 1, 2)
    with pytest.raises(IndexOutOfRange):
        shift_cycle(N21, 2)


def test_gl_mask_examples():
    n = SplittingType((-3, -2, -1))
    assert one_based(gl_mask(n, 1)) == {(2, 1), (3, 1)}
    assert one_based(gl_mask(n, 2)) == {(3, 1), (3, 2)}
    for n in [N21, SplittingType((-3, -3, -1)), SplittingType((-2, -1, -1, -1))]:
        blk = n.partition.block_index
        assert gl_mask(n, 1).free == {(j, k) for j in range(n.r) for k in range(n.r)
                                      if blk[j] > blk[k]}


@pytest.mark.parametrize("n", all_splittings(5, -3, 0), ids=str)
def test_gl_mask_is_shifted_complement_mask(n):
    for l in range(1, n.s):
        tau, _ = shift_cycle(n, l)
        lam = shifted_partition(n, l)
        coset = CosetClass(tau, lam)
        assert coset.sigma == tau
        assert membership_mask(lam, coset).free == gl_mask(n, l).free


def test_aut_basis_examples():
    basis = aut_basis(N21, [2])
    assert [(e.position, e.poly) for e in basis.groups[0]] == [((1, 0), Poly([1]))]
    assert [(e.position, e.poly) for e in basis.groups[1]] == [((1, 0), Poly([0, S("1/2")]))]
    n = SplittingType((-3, -1, -1))
    assert len(aut_basis(n, [1, 2])) == 6 + 2 + 2 - 4
    with pytest.raises(RepeatedPoint):
        aut_basis(n, [1, 1])
    with pytest.raises(ZeroOrInfinitePoint):
        aut_basis(n, [0, 1])
    with pytest.raises(DimensionMismatch):
        aut_basis(n, [1])


@pytest.mark.parametrize("n", all_splittings(), ids=str)
def test_basis_count_and_identity_at_origin(n):
    pts = [S(k + 1) for k in range(n.point_count)]
    basis = aut_basis(n, pts)
    unipotent_dim = sum(block_dimension(n, j, k) for j in range(n.s) for k in range(j))
    assert len(basis) == unipotent_dim
    for l in range(1, n.s):
        mask = gl_mask(n, l)
        for e in basis.groups[l]:
            assert e.position in mask and e.poly(0) == 0
            assert e.poly.degree <= n.degree_bound(*e.position)


@pytest.mark.parametrize("n", all_splittings(), ids=str)
def test_dimension_formula(n):
    counts = {}
    blk = n.partition.block_index
    for row, col, _ in monomial_basis(n):
        key = (blk[row], blk[col])
        counts[key] = counts.get(key, 0) + 1
    for (j, k), c in counts.items():
        assert c == block_dimension(n, j, k)
    assert all(j >= k for j, k in counts)
    assert sum(counts.values()) == sum(block_dimension(n, j, k)
                                       for j in range(n.s) for k in range(j + 1))


def test_factor_examples():
    basis = aut_basis(N21, [3])
    d = diag([2, 5])
    fac = factor_automorphism(pmat_const(d), basis)
    assert fac.d == d and fac.u == identity(2)
    assert all(c == 0 for cs in fac.coeffs for c in cs)
    with pytest.raises(NotAnAutomorphism):
        factor_automorphism(pmat([[[1], [1]], [[0], [1]]]), basis)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_factorization_round_trips(seed):
    rng = sampling.make_rng(seed)
    n = sampling.splitting(rng, rng.randint(2, 4))
    basis = aut_basis(n, sampling.points(rng, n.point_count, exclude=(S(0),)))
    g = sampling.automorphism(rng, n)
    fac = factor_automorphism(g, basis)
    assert reconstruct(basis, fac) == g
    coeffs = [tuple(sampling.scalar(rng) for _ in grp) for grp in basis.groups]
    d = sampling.levi(rng, n)
    h = BundleAutomorphism(n, pmat_mul(basis.element(coeffs).g, pmat_const(d)))
    fac2 = factor_automorphism(h, basis)
    assert fac2.coeffs == tuple(coeffs) and fac2.d == d


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_determinant_constant_and_inverse(seed):
    rng = sampling.make_rng(seed)
    n = sampling.splitting(rng, rng.randint(2, 4))
    g = sampling.automorphism(rng, n)
    assert pmat_det(g.g).degree == 0
    inv = g.inverse()
    assert aut_membership(inv.g, n)
    assert (g * inv).g == pmat_identity(n.r)
    h = sampling.automorphism(rng, n)
    assert aut_membership((g * h).g, n)
    z = sampling.scalar(rng)
    assert is_block_lower(g(z), n.partition)
    assert g.at_infinity() == pmat_eval(g.chart_infinity(), 0)


def _group_element(rng, basis, l, r):
    cs = [sampling.scalar(rng) for _ in basis.groups[l]]
    coeffs = [tuple(S(0) for _ in grp) for grp in basis.groups]
    coeffs[l] = tuple(cs)
    return basis.element(coeffs)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_groups_abelian_and_closed(seed):
    rng = sampling.make_rng(seed)
    n = sampling.splitting(rng, rng.randint(2, 4))
    basis = aut_basis(n, sampling.points(rng, n.point_count, exclude=(S(0),)))
    for l in range(n.s):
        a = _group_element(rng, basis, l, n.r)
        b = _group_element(rng, basis, l, n.r)
        if l or n.s == 2:
            # G_0 = N_N is abelian only for two distinct degrees
            assert (a * b).g == (b * a).g
        fac = factor_automorphism(a * b, basis)
        assert all(not any(cs) for k, cs in enumerate(fac.coeffs) if k != l)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_commutator_law(seed):
    rng = sampling.make_rng(seed)
    n = sampling.splitting(rng, rng.randint(3, 5), lo=-4, hi=0)
    if n.s < 3:
        return
    l1, l2 = sorted(rng.sample(range(1, n.s), 2))
    both = gl_mask(n, l1).free & gl_mask(n, l2).free
    a = sampling.unipotent_on(rng, gl_mask(n, l1))
    b = sampling.unipotent_on(rng, gl_mask(n, l2))
    comm = mat_mul(mat_mul(a, b), mat_mul(invert_matrix(a), invert_matrix(b)))
    for j in range(n.r):
        for k in range(n.r):
            if j != k and (j, k) not in both:
                assert comm[j][k] == 0
            if j == k:
                assert comm[j][k] == ONE


def test_groups_do_not_commute_pairwise():
    n = SplittingType((-3, -2, -1))
    a = matrix([[1, 0, 0], [1, 1, 0], [0, 0, 1]])
    b = matrix([[1, 0, 0], [0, 1, 0], [0, 1, 1]])
    assert mat_mul(a, b) != mat_mul(b, a)
    assert a[1][0] and (1, 0) in gl_mask(n, 1) and (2, 1) in gl_mask(n, 2)


@pytest.mark.parametrize("m", [(-2, -1), (-3, -1), (-2, -2, -1), (-3, -1, -1)])
def test_two_step_factors_commute(m, rng):
    n = SplittingType(m)
    basis = aut_basis(n, sampling.points(rng, n.point_count, exclude=(S(0),)))
    for _ in range(10):
        fac = factor_automorphism(sampling.automorphism(rng, n), basis)
        pieces = list(fac.factors) + [BundleAutomorphism(n, pmat_const(fac.u))]
        for x, y in itertools.combinations(pieces, 2):
            assert (x * y).g == (y * x).g
