"""Acceptance criteria, one check per criterion, all exact over Q(i).

Run under pytest (lines appear in the "acceptance criteria" summary section)
or directly with ``python3 tests/test_acceptance.py``.
"""

import itertools
import os
import sys
import time

import pytest

from bruhatgauge import sampling
from bruhatgauge.automorphisms import (
    BundleAutomorphism, SplittingType, aut_basis, block_dimension, factor_automorphism,
    monomial_basis, reconstruct,
)
from bruhatgauge.configurations import (
    evaluate_action, levi_act, normalize_configuration, special_element,
)
from bruhatgauge.connections import (
    accessory_check, adapted_connection, adapted_connections,
    adapted_space_dimension, bruhat_gauge, bruhat_parameters, connection_difference,
    gauge_transform, rh_gauge, rh_residue_sum, transport_flags, validate_adapted,
    validate_differential,
)
from bruhatgauge.errors import BruhatError, NoAdaptedConnection, NoStrongWitness
from bruhatgauge.exact import (
    ONE, ZERO, conjugate_by, identity, mat_add, mat_mul, mat_scale, pmat_const, pmat_degree,
    pmat_mul, trace, zeros,
)
from bruhatgauge.weyl import (
    CosetClass, Flag, Partition, bruhat_decompose, canonical_representative, factor_unipotent,
    is_block_lower, membership_mask,
)

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:
    ACCEPTANCE_LINES = []

SEED = int(os.environ.get("BRUHAT_SEED", "20240611"))


def rng_for(k):
    return sampling.make_rng(SEED * 100 + k)


def line(ok, label, detail):
    text = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
    print(text)
    return ok, text


def compositions(r):
    for cut in itertools.product((False, True), repeat=r - 1):
        parts, run = [], 1
        for c in cut:
            if c:
                parts.append(run)
                run = 1
            else:
                run += 1
        yield Partition(tuple(parts + [run]))


def cosets(lam):
    return sorted({canonical_representative(p, lam) for p in itertools.permutations(range(lam.r))})


def splittings(max_r=4, lo=-3, hi=-1):
    return [SplittingType(m) for r in range(2, max_r + 1)
            for m in itertools.combinations_with_replacement(range(lo, hi + 1), r)
            if len(set(m)) > 1]


def trace_balance(a):
    return sum((trace(x) for x in a.all_residues()), ZERO) + a.splitting.degree


W0 = CosetClass((1, 0), Partition.complete(2))
SMALL = Flag(CosetClass((0, 1), Partition.complete(2)), identity(2))


def large(b):
    return Flag(W0, ((ONE, ZERO), (b, ONE)))


# -- criteria ------------------------------------------------------------------

def criterion_1():
    rng = rng_for(1)
    bad = 0
    start = time.perf_counter()
    for _ in range(500):
        r = rng.randint(2, 5)
        g = sampling.invertible(rng, r, gaussian=rng.random() < 0.2)
        lam = sampling.partition(rng, r)
        L, coset, P = bruhat_decompose(g, lam)
        ok = (mat_mul(mat_mul(L, coset.matrix), P) == g
              and bruhat_decompose(g, lam) == (L, coset, P)
              and membership_mask(lam, coset).supports(L)
              and is_block_lower(P, lam))
        bad += not ok
    elapsed = time.perf_counter() - start
    return line(not bad and elapsed < 5, "C1 Bruhat round-trip & uniqueness",
                f"{500 - bad}/500 exact, {elapsed:.2f} s (limit 5 s)")


def criterion_2():
    rng = rng_for(2)
    pairs = bad = 0
    for r in range(2, 6):
        for lam in compositions(r):
            for sigma in cosets(lam):
                coset = CosetClass(sigma, lam)
                comp = membership_mask(lam, coset, "complement")
                sub = membership_mask(lam, coset, "subgroup")
                pairs += 1
                for _ in range(500):
                    c = sampling.lower_unipotent(rng, r)
                    a, b = factor_unipotent(c, lam, coset)
                    ok = (comp.supports(a) and sub.supports(b) and mat_mul(a, b) == c
                          and factor_unipotent(mat_mul(a, b), lam, coset) == (a, b))
                    bad += not ok
    total = pairs * 500
    return line(not bad, "C2 complement factorization",
                f"{total - bad}/{total} over {pairs} (partition, class) pairs with r <= 5")


def criterion_3():
    bad = checked = 0
    for n in splittings():
        basis = monomial_basis(n)
        blocks = n.partition.blocks
        blk = n.partition.block_index
        total = 0
        for j in range(n.s):
            for k in range(j + 1):
                count = sum(1 for row, col, _ in basis if blk[row] == j and blk[col] == k)
                expected = len(blocks[j]) * len(blocks[k]) * (n.values[j] - n.values[k] + 1)
                bad += count != expected or block_dimension(n, j, k) != expected
                total += expected
                checked += 1
        bad += len(basis) != total
    return line(not bad, "C3 dimension formula",
                f"{checked} blocks over {len(splittings())} splittings, {bad} mismatches")


def criterion_4():
    rng = rng_for(4)
    bad = 0
    split = splittings()
    for n in split:
        basis = aut_basis(n, sampling.points(rng, n.point_count, exclude=(ZERO,)))
        for _ in range(200):
            g = sampling.automorphism(rng, n)
            fac = factor_automorphism(g, basis)
            ok = reconstruct(basis, fac) == g
            coeffs = [tuple(sampling.scalar(rng) for _ in grp) for grp in basis.groups]
            d = sampling.levi(rng, n)
            synth = BundleAutomorphism(n, pmat_mul(basis.element(coeffs).g, pmat_const(d)))
            back = factor_automorphism(synth, basis)
            ok = ok and back.coeffs == tuple(coeffs) and back.d == d
            if n.s == 2:
                pieces = list(fac.factors) + [BundleAutomorphism(n, pmat_const(fac.u))]
                ok = ok and all((x * y).g == (y * x).g for x, y in itertools.combinations(pieces, 2))
            bad += not ok
    total = 200 * len(split)
    return line(not bad, "C4 semidirect factorization",
                f"{total - bad}/{total} over {len(split)} splittings (s = 2 factors commute)")


def criterion_5():
    rng = rng_for(5)
    bad = free_bad = 0
    split = splittings()
    for n in split:
        pts = sampling.points(rng, n.point_count, exclude=(ZERO,))
        for _ in range(200):
            cfg = sampling.configuration(rng, n, pts)
            g, out = normalize_configuration(cfg)
            ok = (out.is_special() and out == special_element(n, pts)
                  and evaluate_action(g, cfg) == out and normalize_configuration(cfg) == (g, out)
                  and g.is_unipotent_part())
            bad += not ok
        for _ in range(50):
            h = sampling.nontrivial_unipotent(rng, n)
            cfg = sampling.configuration(rng, n, pts)
            free_bad += evaluate_action(h, cfg) == cfg
    total = 200 * len(split)
    return line(not bad and not free_bad, "C5 torsor (free and transitive)",
                f"{total - bad}/{total} normalized uniquely, "
                f"{50 * len(split) - free_bad}/{50 * len(split)} nontrivial elements move a configuration")


def criterion_6():
    rng = rng_for(6)
    bad = 0
    split = splittings()
    for n in split:
        pts = sampling.points(rng, n.point_count, exclude=(ZERO,))
        special = special_element(n, pts)
        for _ in range(100):
            d = sampling.levi(rng, n)
            cfg = sampling.configuration(rng, n, pts)
            moved = levi_act(d, cfg)
            ok = (levi_act(d, special) == special
                  and evaluate_action(pmat_const(d), special) == special
                  and moved == evaluate_action(pmat_const(d), cfg)
                  and all(f.L == conjugate_by(d, e.L) for f, e in zip(moved.components, cfg.components)))
            bad += not ok
    total = 100 * len(split)
    return line(not bad, "C6 Levi stabilization", f"{total - bad}/{total}")


def sample_adapted(rng, r, npts, lo=-2, hi=0):
    """Random splitting of rank r with an adapted connection on ``npts`` points."""
    while True:
        n = sampling.splitting(rng, r, lo, hi)
        try:
            return sampling.adapted_connection(rng, n, npts, flag_maker=sampling.large_cell_flag)
        except NoAdaptedConnection:
            # unbalanced splittings on few points may carry no adapted connection
            continue


def criterion_7():
    rng = rng_for(7)
    bad = 0
    for r in (2, 3):
        for _ in range(100):
            a, flags, w = sample_adapted(rng, r, rng.randint(3, 5))
            n = a.splitting
            g = sampling.automorphism(rng, n)
            b = gauge_transform(g, a)
            ok = (trace_balance(a) == 0 and trace_balance(b) == 0
                  and validate_adapted(b, transport_flags(g, a, flags), w))
            bad += not ok
    return line(not bad, "C7 gauge conservation", f"{200 - bad}/200 (100 rank 2, 100 rank 3)")


def criterion_8():
    rng = rng_for(8)
    bad = 0
    for k in range(100):
        a, flags, w = sample_adapted(rng, 2 + k % 2, 5)
        n = a.splitting
        _, _, basis = adapted_connections(n, a.points, flags, w)
        a2 = None
        while a2 is None:
            try:
                a2 = adapted_connection(n, a.points, flags, w, [sampling.scalar(rng) for _ in basis])
            except NoAdaptedConnection:
                continue
        phi = connection_difference(a2, a, flags)
        bad += not (validate_differential(phi) and a + phi == a2)
    dims = {}
    dim_bad = 0
    for npts in (4, 5, 6):
        for m in [(-2, -1), (-1, 0)]:
            for _ in range(10):
                pts = sampling.marked_points(rng, npts - 1)
                flags = tuple(large(b) for b in sampling.points(rng, npts))
                got = adapted_space_dimension(SplittingType(m), pts, flags)
                dims.setdefault(npts, set()).add(got)
                dim_bad += got != npts - 3
    shown = ", ".join(f"n={k}: {sorted(v)}" for k, v in sorted(dims.items()))
    return line(not bad and not dim_bad, "C8 affine structure",
                f"{100 - bad}/100 differences valid; dimensions {shown} (expected n - 3)")


def _rh_samples():
    rng = rng_for(9)
    out = []
    for _ in range(100):
        a, flags, w = sample_adapted(rng, 2, rng.randint(4, 6), -3, 0)
        out.append((rng.randrange(10 ** 9), a, flags, w))
    return out


def criterion_9_literal():
    literal = trivial_class = 0
    samples = _rh_samples()
    for _, a, flags, w in samples:
        res = rh_gauge(a, flags, w)
        total = zeros(2)
        for x in res.connection.residues:
            total = mat_add(total, x)
        literal += total == mat_scale(mat_add(w.matrix(w.n - 1), res.n_prime), -ONE)
        trivial_class += res.pi == (0, 1)
    return line(literal == len(samples), "C9 RH gauge, residue sum -(W_n + N') as written",
                f"{literal}/{len(samples)} hold; Pi_n is trivial in {trivial_class}/{len(samples)} "
                "(the identity needs Pi_n trivial, see decisions ledger)")


def criterion_9():
    bad = {"fuchsian": 0, "sum": 0, "adapted": 0, "accessory": 0, "unique": 0}
    samples = _rh_samples()
    for seed, a, flags, w in samples:
        rng = sampling.make_rng(seed)
        try:
            res = rh_gauge(a, flags, w)
        except BruhatError:
            for key in bad:
                bad[key] += 1
            continue
        out = res.connection
        total = zeros(2)
        for x in out.residues:
            total = mat_add(total, x)
        bad["fuchsian"] += not out.is_fuchsian()
        bad["sum"] += total != rh_residue_sum(res, w)
        bad["adapted"] += not validate_adapted(out, res.flags, w)
        bad["accessory"] += not accessory_check(out, w)
        u = sampling.nontrivial_unipotent(rng, a.splitting)
        again = rh_gauge(gauge_transform(u, a), transport_flags(u, a, flags), w)
        d = again.g * u * res.g.inverse()
        bad["unique"] += not (pmat_degree(d.g) <= 0 and gauge_transform(d, out) == again.connection)
    ok = not any(bad.values())
    detail = ", ".join(f"{k} {len(samples) - v}/{len(samples)}" for k, v in bad.items())
    return line(ok, "C9 RH gauge, Fuchsian with sum = -Ad(Pi_n)(W_n + N'), accessory, uniqueness",
                detail)


def criterion_10():
    rng = rng_for(10)
    bad = witnessed = 0
    for _ in range(100):
        extra = rng.randint(2, 3)
        while True:
            n = sampling.splitting(rng, 2, -3, 0)
            count = n.point_count + 1
            try:
                a, flags, w = sampling.adapted_connection(rng, n, count + extra,
                                                          flag_maker=sampling.large_cell_flag)
                break
            except NoAdaptedConnection:
                continue
        anchors = tuple(rng.sample(range(len(a.points)), count))
        g, b, new_flags = bruhat_gauge(a, flags, anchors)
        ok = validate_adapted(b, new_flags, w)
        for i in anchors:
            before = bruhat_parameters(a.residues[i], *w.alphas[i])
            after = bruhat_parameters(b.residues[i], *w.alphas[i])
            ok = ok and new_flags[i].L[1][0] == 0 and after == (ZERO, before[1])
        witness = next((i for i in range(a.n) if i not in anchors
                        and new_flags[i].coset == W0 and new_flags[i].L[1][0]), None)
        try:
            _, b2, strong = bruhat_gauge(a, flags, anchors, strong=True)
            ok = ok and witness is not None and strong[witness].L[1][0] == 1
            ok = ok and all(strong[i].L[1][0] == 0 for i in anchors)
            witnessed += 1
        except NoStrongWitness:
            ok = ok and witness is None
        bad += not ok
    # no witness: non-anchor finite flags at b = 0 and infinity in the small cell
    n = SplittingType((-2, -1))
    flags = (large(ZERO),) * 3 + (SMALL,)
    raised = 0
    trials = 0
    while raised < 10 and trials < 2000:
        trials += 1
        w = sampling.weights(rng, 4, 2, 3)
        try:
            a = adapted_connection(n, sampling.marked_points(rng, 3), flags, w)
        except NoAdaptedConnection:
            continue
        try:
            bruhat_gauge(a, flags, (0, 1), strong=True)
        except NoStrongWitness:
            raised += 1
    return line(not bad and raised == 10, "C10 Bruhat gauge",
                f"{100 - bad}/100 (strong witness in {witnessed}); "
                f"{raised}/10 witness-free inputs raise NoStrongWitness")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10]


# -- pytest wrappers -------------------------------------------------------------

@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda f: f.__name__)
def test_criterion(criterion):
    ok, text = criterion()
    ACCEPTANCE_LINES.append(text)
    assert ok, text


@pytest.mark.xfail(strict=True, reason="holds only when Pi_n is trivial; see decisions ledger")
def test_criterion_9_literal_residue_sum():
    ok, text = criterion_9_literal()
    ACCEPTANCE_LINES.append(text)
    assert ok, text


if __name__ == "__main__":
    results = [c() for c in CRITERIA[:9]] + [criterion_9_literal(), criterion_10()]
    sys.exit(0 if all(ok for ok, _ in results) else 1)
