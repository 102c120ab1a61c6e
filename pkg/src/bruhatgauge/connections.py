"""Logarithmic connections on split bundles, parabolic differentials and gauges.

A connection is ``A(z) dz`` with ``A(z) = sum_i A_i / (z - z_i) + f(z)``, the
finite marked points ``z_1, ..., z_{n-1}`` ending with ``z_{n-1} = 0`` and
``z_n`` at infinity. Flags are complete flags, one per marked point with the
point at infinity last; a residue ``A_i`` is adapted to the flag ``L Pi`` with
weights ``alpha`` when ``(L Pi)^-1 A_i (L Pi)`` is semisimple and lower
triangular with diagonal ``alpha_i1 <= ... <= alpha_ir``.
"""

from dataclasses import dataclass
from fractions import Fraction

from .automorphisms import BundleAutomorphism, SplittingType, aut_membership
from .configurations import FlagConfiguration, component_cell, component_groups, normalize_configuration
from .errors import (
    AnchorsNotInCell, CoincidentFlags, DimensionMismatch, EqualWeights, IncompatibleData,
    InconsistentSystem, InvalidConfiguration, InvalidWeights, NoAdaptedConnection,
    NoStrongWitness, NotAnAutomorphism, NotInGauge, NotRank2, RepeatedPoint, Resonant,
    SingularMatrix,
)
from .exact import (
    ONE, ZERO, ZERO_POLY, Poly, S, conjugate_by, diag, identity, invert_matrix, mat_add,
    mat_mul, mat_scale, mat_sub, nullspace, permutation_matrix, pmat_add, pmat_const,
    pmat_derivative, pmat_eval, pmat_mul, pmat_sub, solve_affine, zeros,
)
from .weyl import (
    CosetClass, Partition, act_on_flag, bruhat_decompose, flag_from_frame,
    invert_permutation, largest_cell_permutation,
)


# -- weights -------------------------------------------------------------------

@dataclass(frozen=True)
class ParabolicWeights:
    alphas: tuple

    def __post_init__(self):
        rows = []
        for row in self.alphas:
            row = tuple(Fraction(x) for x in row)
            if any(not 0 <= x < 1 for x in row) or list(row) != sorted(row):
                raise InvalidWeights(f"weights must be ascending in [0, 1), got {row}")
            rows.append(row)
        if len({len(r) for r in rows}) > 1:
            raise InvalidWeights("every point needs the same number of weights")
        if sum(sum(r) for r in rows).denominator != 1:
            raise InvalidWeights("total weight must be an integer")
        object.__setattr__(self, "alphas", tuple(rows))

    @property
    def n(self):
        return len(self.alphas)

    @property
    def total(self):
        return sum(sum(r) for r in self.alphas)

    def matrix(self, i):
        return diag(self.alphas[i])

    def beta(self, i):
        a = self.alphas[i]
        if len(a) != 2:
            raise NotRank2("beta is defined in rank 2")
        return a[1] - a[0]


# -- connections and differentials ---------------------------------------------

def _as_matrix(m):
    return tuple(tuple(S(x) for x in row) for row in m)


def _check_points(points):
    pts = tuple(S(p) for p in points)
    if not pts or pts[-1] != ZERO:
        raise InvalidConfiguration("the last finite marked point must be 0")
    if len(set(pts)) != len(pts):
        raise RepeatedPoint("marked points must be pairwise distinct")
    return pts


@dataclass(frozen=True)
class _Meromorphic:
    splitting: SplittingType
    points: tuple
    residues: tuple
    tail: tuple

    def __post_init__(self):
        r = self.splitting.r
        object.__setattr__(self, "points", _check_points(self.points))
        object.__setattr__(self, "residues", tuple(_as_matrix(a) for a in self.residues))
        tail = self.tail
        if tail is None:
            tail = tuple(tuple(ZERO_POLY for _ in range(r)) for _ in range(r))
        object.__setattr__(self, "tail", tuple(tuple(x if isinstance(x, Poly) else Poly(x)
                                                      for x in row) for row in tail))
        if len(self.residues) != len(self.points):
            raise DimensionMismatch("need one residue per finite marked point")
        for a in self.residues + (self.tail,):
            if len(a) != r or any(len(row) != r for row in a):
                raise DimensionMismatch(f"expected {r}x{r} matrices")

    @property
    def n(self):
        """Number of marked points, counting infinity."""
        return len(self.points) + 1

    def moment(self, q):
        """``sum_i A_i z_i^q``."""
        acc = zeros(self.splitting.r)
        for a, z in zip(self.residues, self.points):
            acc = mat_add(acc, mat_scale(a, z ** q if q else ONE))
        return acc

    def _shift(self):
        return diag(self.splitting.m) if isinstance(self, LogConnection) else zeros(self.splitting.r)

    def infinity_violations(self):
        """Entries breaking the simple-pole condition at infinity (empty when it holds)."""
        m = self.splitting.m
        bad = []
        moments = {}
        for j in range(len(m)):
            for k in range(len(m)):
                e = m[j] - m[k]
                if self.tail[j][k] and self.tail[j][k].degree > e - 1:
                    bad.append((j, k, "tail"))
                for q in range(-e):
                    if q not in moments:
                        moments[q] = self.moment(q)
                    if moments[q][j][k]:
                        bad.append((j, k, q))
        return bad

    def satisfies_infinity_condition(self):
        return not self.infinity_violations()

    def residue_at_infinity(self):
        """Residue in the trivialization at infinity."""
        m = self.splitting.m
        shift = self._shift()
        out = []
        for j in range(len(m)):
            row = []
            for k in range(len(m)):
                e = m[j] - m[k]
                x = -shift[j][k]
                if e >= 1:
                    x = x - self.tail[j][k].coeff(e - 1)
                if e <= 0:
                    x = x - self.moment(-e)[j][k]
                row.append(x)
            out.append(tuple(row))
        return tuple(out)

    def all_residues(self):
        return self.residues + (self.residue_at_infinity(),)

    def evaluate(self, z):
        """``A(z)`` at a point away from the poles."""
        z = S(z)
        acc = pmat_eval(self.tail, z)
        for a, p in zip(self.residues, self.points):
            acc = mat_add(acc, mat_scale(a, (z - p).inverse()))
        return acc

    def is_fuchsian(self):
        return all(not x for row in self.tail for x in row)

    def _same_shape(self, other):
        if self.splitting != other.splitting or self.points != other.points:
            raise IncompatibleData("splitting types or marked points differ")


class LogConnection(_Meromorphic):
    """Logarithmic connection in the affine chart; the residue at infinity is derived."""

    def __add__(self, phi):
        if not isinstance(phi, ParabolicDifferential):
            return NotImplemented
        self._same_shape(phi)
        return LogConnection(self.splitting, self.points,
                             tuple(mat_add(a, b) for a, b in zip(self.residues, phi.residues)),
                             pmat_add(self.tail, phi.tail))


@dataclass(frozen=True)
class ParabolicDifferential(_Meromorphic):
    flags: tuple = ()

    def __post_init__(self):
        super().__post_init__()
        object.__setattr__(self, "flags", tuple(self.flags))
        if len(self.flags) != self.n:
            raise DimensionMismatch("need one flag per marked point, infinity last")

    def __add__(self, other):
        if not isinstance(other, ParabolicDifferential):
            return NotImplemented
        self._same_shape(other)
        return ParabolicDifferential(
            self.splitting, self.points,
            tuple(mat_add(a, b) for a, b in zip(self.residues, other.residues)),
            pmat_add(self.tail, other.tail), self.flags)


def _frame_conjugate(flag, a):
    """``(L Pi)^-1 a (L Pi)``."""
    b = flag.frame()
    return mat_mul(mat_mul(invert_matrix(b), a), b)


def _is_lower(t, strict):
    return all(not t[j][k] for j in range(len(t)) for k in range(len(t))
               if k > j or (strict and k == j))


def _is_semisimple(a, eigenvalues):
    r = len(a)
    acc = identity(r)
    for lam in sorted(set(eigenvalues)):
        acc = mat_mul(acc, mat_sub(a, mat_scale(identity(r), S(lam))))
    return not any(x for row in acc for x in row)


def residue_is_adapted(a, flag, alphas):
    t = _frame_conjugate(flag, a)
    if not _is_lower(t, strict=False):
        return False
    if any(t[k][k] != S(x) for k, x in enumerate(alphas)):
        return False
    return _is_semisimple(a, alphas)


def validate_adapted(a, flags, w):
    if not (len(flags) == a.n == w.n):
        raise DimensionMismatch("residues, flags and weights must agree in number")
    if not a.satisfies_infinity_condition():
        return False
    return all(residue_is_adapted(res, f, w.alphas[i])
               for i, (res, f) in enumerate(zip(a.all_residues(), flags)))


def validate_differential(phi):
    if not phi.satisfies_infinity_condition():
        return False
    return all(_is_lower(_frame_conjugate(f, res), strict=True)
               for res, f in zip(phi.all_residues(), phi.flags))


def connection_difference(a, a2, flags):
    a._same_shape(a2)
    return ParabolicDifferential(
        a.splitting, a.points,
        tuple(mat_sub(x, y) for x, y in zip(a.residues, a2.residues)),
        pmat_sub(a.tail, a2.tail), tuple(flags))


# -- rank 2 parametrization ----------------------------------------------------

def residue_from_bruhat(alpha1, alpha2, b, c):
    """Rank-2 residue with eigenvalues alpha1, alpha2 whose alpha2-eigenline is (1, b)."""
    a1, a2, b, c = S(alpha1), S(alpha2), S(b), S(c)
    beta = a2 - a1
    if not beta:
        raise EqualWeights("the two weights must differ")
    k = beta * c
    return ((a2 - k * b, k), (beta * b - k * b * b, a1 + k * b))


def bruhat_parameters(a, alpha1, alpha2):
    """Recover (b, c) from a rank-2 residue, or None when its flag is not in the large cell."""
    a1, a2 = S(alpha1), S(alpha2)
    beta = a2 - a1
    if not beta:
        raise EqualWeights("the two weights must differ")
    (p, q), (u, v) = a
    # kernel of a - alpha2: the row (p - a2, q) or (u, v - a2)
    if p - a2 or q:
        x, y = q, -(p - a2)
    else:
        x, y = v - a2, -u
    if not x:
        return None
    b = y / x
    return b, q / beta


# -- affine parametrization of adapted connections ------------------------------

def _lower_slots(r):
    return [(j, k) for j in range(r) for k in range(j)]


def _tail_slots(n):
    m = n.m
    return [(j, k, u) for j in range(n.r) for k in range(n.r) for u in range(m[j] - m[k])]


class _AdaptedSystem:
    """Affine map from free parameters to the constraints at infinity.

    Parameters are the strictly lower entries ``c_i`` of every finite
    ``(L Pi)^-1 A_i (L Pi) - W_i`` followed by the tail coefficients.
    """

    def __init__(self, n, points, flags, weights=None):
        self.n = n
        self.points = _check_points(points)
        self.flags = tuple(flags)
        if len(self.flags) != len(self.points) + 1:
            raise DimensionMismatch("need one flag per marked point, infinity last")
        if weights is not None and weights.n != len(self.flags):
            raise DimensionMismatch("need one weight row per marked point")
        self.weights = weights
        self.frames = [(f.frame(), invert_matrix(f.frame())) for f in self.flags]
        self.lower = _lower_slots(n.r)
        self.tail_slots = _tail_slots(n)
        self.size = len(self.points) * len(self.lower) + len(self.tail_slots)

    def build(self, x):
        r = self.n.r
        residues = []
        pos = 0
        for i in range(len(self.points)):
            t = [list(row) for row in (self.weights.matrix(i) if self.weights else zeros(r))]
            t = [[S(v) for v in row] for row in t]
            for j, k in self.lower:
                t[j][k] = x[pos]
                pos += 1
            b, b_inv = self.frames[i]
            residues.append(mat_mul(mat_mul(b, tuple(map(tuple, t))), b_inv))
        tail = [[[] for _ in range(r)] for _ in range(r)]
        for j, k, u in self.tail_slots:
            tail[j][k].append(x[pos])
            pos += 1
        tail = tuple(tuple(Poly(c) for c in row) for row in tail)
        cls = LogConnection if self.weights else _Meromorphic
        if cls is _Meromorphic:
            return ParabolicDifferential(self.n, self.points, tuple(residues), tail, self.flags)
        return LogConnection(self.n, self.points, tuple(residues), tail)

    def constraints(self, x):
        a = self.build(x)
        out = []
        m = self.n.m
        for j in range(self.n.r):
            for k in range(self.n.r):
                for q in range(m[k] - m[j]):
                    out.append(a.moment(q)[j][k])
        b, b_inv = self.frames[-1]
        t = mat_mul(mat_mul(b_inv, a.residue_at_infinity()), b)
        target = self.weights.alphas[-1] if self.weights else [0] * self.n.r
        for j in range(self.n.r):
            for k in range(j, self.n.r):
                out.append(t[j][k] - (S(target[j]) if j == k else ZERO))
        return out

    def linearize(self):
        zero = [ZERO] * self.size
        f0 = self.constraints(zero)
        cols = []
        for p in range(self.size):
            e = list(zero)
            e[p] = ONE
            cols.append([y - c for y, c in zip(self.constraints(e), f0)])
        rows = [[col[q] for col in cols] for q in range(len(f0))]
        return rows, [-c for c in f0]


def adapted_space_dimension(n, points, flags):
    """Dimension of the space of parabolic differentials for the given flags."""
    system = _AdaptedSystem(n, points, flags)
    rows, _ = system.linearize()
    return len(nullspace(rows, system.size))


def adapted_connections(n, points, flags, w):
    """Affine family of adapted residue data: (builder, particular, direction basis)."""
    if w.total + n.degree != 0:
        raise NoAdaptedConnection("degree and total weight do not cancel")
    system = _AdaptedSystem(n, points, flags, w)
    rows, rhs = system.linearize()
    try:
        particular, basis = solve_adapted_rows(rows, rhs, system.size)
    except InconsistentSystem as exc:
        raise NoAdaptedConnection("no connection adapted to these flags and weights") from exc
    return system.build, particular, basis


def solve_adapted_rows(rows, rhs, size):
    if not rows:
        return tuple([ZERO] * size), nullspace([], size)
    return solve_affine(rows, rhs)


def adapted_connection(n, points, flags, w, coefficients=None):
    """One adapted connection: the particular solution plus a combination of directions."""
    build, particular, basis = adapted_connections(n, points, flags, w)
    x = list(particular)
    for c, v in zip(coefficients or (), basis):
        x = [xi + S(c) * vi for xi, vi in zip(x, v)]
    a = build(x)
    if not validate_adapted(a, flags, w):
        raise NoAdaptedConnection("residue at infinity is not semisimple for this choice")
    return a


# -- gauge action --------------------------------------------------------------

def _as_aut(g, n):
    if isinstance(g, BundleAutomorphism):
        if g.splitting != n:
            raise NotAnAutomorphism("splitting type does not match the connection")
        return g
    return BundleAutomorphism.checked(n, g)


def gauge_transform(g, a):
    """``g A g^-1 - dg g^-1`` in residue-plus-tail form."""
    g = _as_aut(g, a.splitting)
    if not aut_membership(g.g, a.splitting):
        raise NotAnAutomorphism("matrix violates the automorphism constraints")
    g_inv = g.inverse().g
    residues = []
    tail = pmat_sub(pmat_mul(pmat_mul(g.g, a.tail), g_inv), pmat_mul(pmat_derivative(g.g), g_inv))
    for res, z in zip(a.residues, a.points):
        gz = g(z)
        new = conjugate_by(gz, res)
        residues.append(new)
        full = pmat_sub(pmat_mul(pmat_mul(g.g, pmat_const(res)), g_inv), pmat_const(new))
        quot = []
        for row in full:
            qrow = []
            for x in row:
                q, rem = x.divide_linear(z)
                assert not rem
                qrow.append(q)
            quot.append(tuple(qrow))
        tail = pmat_add(tail, tuple(quot))
    out = type(a)(a.splitting, a.points, tuple(residues), tail)
    assert out.satisfies_infinity_condition() or not a.satisfies_infinity_condition()
    return out


def transport_flags(g, a, flags):
    """Flags moved by ``g``: by ``g(z_i)`` at finite points and by its value at infinity."""
    g = _as_aut(g, a.splitting)
    if len(flags) != a.n:
        raise DimensionMismatch("need one flag per marked point, infinity last")
    out = [act_on_flag(g(z), f) for z, f in zip(a.points, flags[:-1])]
    out.append(act_on_flag(g.at_infinity(), flags[-1]))
    return tuple(out)


# -- Bruhat gauge --------------------------------------------------------------

def _project(flag, lam, coset):
    f = flag_from_frame(flag.frame(), lam)
    if f.coset != coset:
        raise AnchorsNotInCell("anchor flag does not project into the required cell")
    return f


def bruhat_gauge(a, flags, anchors, strong=False):
    """Normalize the projections of the anchor flags to the special flags.

    ``anchors`` are indices of finite marked points: the first plays the role
    of the origin, the rest are the points of G_1, ..., G_{s-1} in order.
    Returns ``(g, a', flags')``.
    """
    n = a.splitting
    anchors = tuple(int(i) for i in anchors)
    if len(flags) != a.n:
        raise DimensionMismatch("need one flag per marked point, infinity last")
    if len(anchors) != n.point_count + 1 or len(set(anchors)) != len(anchors):
        raise DimensionMismatch(f"need {n.point_count + 1} distinct anchors")
    if any(not 0 <= i < len(a.points) for i in anchors):
        raise DimensionMismatch("anchors must be finite marked points")
    comps = []
    for i, l in zip(anchors, component_groups(n)):
        lam, coset = component_cell(n, l)
        comps.append(_project(flags[i], lam, coset))
    cfg = FlagConfiguration(n, tuple(a.points[i] for i in anchors[1:]), tuple(comps),
                            a.points[anchors[0]])
    g, _ = normalize_configuration(cfg)
    new_flags = transport_flags(g, a, flags)
    if strong:
        if n.r != 2:
            raise NotRank2("the strong gauge is implemented in rank 2")
        large = CosetClass(largest_cell_permutation(2), Partition.complete(2))
        witness = next((i for i in range(a.n) if i not in anchors
                        and new_flags[i].coset == large and new_flags[i].L[1][0]), None)
        if witness is None:
            raise NoStrongWitness("every non-anchor flag has b = 0 or lies at infinity")
        d = BundleAutomorphism.constant(n, diag([new_flags[witness].L[1][0], ONE]))
        g = d * g
        new_flags = transport_flags(g, a, flags)
    return g, gauge_transform(g, a), new_flags


# -- Riemann-Hilbert gauge -----------------------------------------------------

def _infinity_taylor(a, order):
    """Taylor coefficients ``F_0, ..., F_order`` of the holomorphic part at infinity."""
    m = a.splitting.m
    r = len(m)
    moments = {}

    def moment(q):
        if q not in moments:
            moments[q] = a.moment(q)
        return moments[q]

    out = []
    for p in range(order + 1):
        rows = []
        for j in range(r):
            row = []
            for k in range(r):
                e = m[j] - m[k]
                x = ZERO
                u = e - 2 - p
                if u >= 0:
                    x = x - a.tail[j][k].coeff(u)
                q = p - e + 1
                if q >= 0:
                    x = x - moment(q)[j][k]
                row.append(x)
            rows.append(tuple(row))
        out.append(tuple(rows))
    return out


def _sylvester(left, right, rhs):
    """Solve ``left X - X right = rhs``."""
    r = len(left)
    rows, vec = [], []
    for j in range(r):
        for k in range(r):
            row = [ZERO] * (r * r)
            for t in range(r):
                row[t * r + k] = row[t * r + k] + left[j][t]
                row[j * r + t] = row[j * r + t] - right[t][k]
            rows.append(row)
            vec.append(rhs[j][k])
    try:
        x, basis = solve_affine(rows, vec)
    except InconsistentSystem as exc:
        raise Resonant("germ recursion step is singular") from exc
    if basis:
        raise Resonant("germ recursion step is singular")
    return tuple(tuple(x[j * r:(j + 1) * r]) for j in range(r))


def _eigenframe(a_inf, flag, alphas):
    """A frame ``C`` with ``a_inf C = C W`` realizing ``flag``."""
    r = len(a_inf)
    t = _frame_conjugate(flag, a_inf)
    w = diag(alphas)
    slots = _lower_slots(r)

    def residual(x):
        b = [[ONE if j == k else ZERO for k in range(r)] for j in range(r)]
        for (j, k), v in zip(slots, x):
            b[j][k] = v
        b = tuple(map(tuple, b))
        return b, mat_sub(mat_mul(t, b), mat_mul(b, w))

    zero = [ZERO] * len(slots)
    _, f0 = residual(zero)
    flat0 = [v for row in f0 for v in row]
    cols = []
    for p in range(len(slots)):
        e = list(zero)
        e[p] = ONE
        _, f = residual(e)
        cols.append([v - c for v, c in zip((v for row in f for v in row), flat0)])
    rows = [[col[q] for col in cols] for q in range(len(flat0))]
    try:
        x, _ = solve_adapted_rows(rows, [-c for c in flat0], len(slots))
    except InconsistentSystem as exc:
        raise NoAdaptedConnection("residue at infinity is not adapted to its flag") from exc
    b, _ = residual(x)
    return mat_mul(flag.frame(), b)


@dataclass(frozen=True)
class RHResult:
    g: BundleAutomorphism
    connection: LogConnection
    flags: tuple
    pi: tuple
    n_prime: tuple


def rh_gauge(a, flags, w):
    """Gauge ``a`` into a Fuchsian system normalized at infinity.

    Returns the automorphism, the new connection and flags, the class
    ``Pi_n`` of the normalized solution at infinity and ``N' = Ad(Pi_n^-1)(N)``.
    """
    n = a.splitting
    r = n.r
    if not validate_adapted(a, flags, w):
        raise NoAdaptedConnection("input connection is not adapted to the given data")
    a_inf = a.residue_at_infinity()
    alphas = w.alphas[-1]
    weight = diag(alphas)
    depth = n.span
    coeffs = [_eigenframe(a_inf, flags[-1], alphas)]
    taylor = _infinity_taylor(a, depth)
    for k in range(1, depth + 1):
        rhs = zeros(r)
        for t in range(k):
            rhs = mat_sub(rhs, mat_mul(taylor[t], coeffs[k - 1 - t]))
        left = mat_add(a_inf, mat_scale(identity(r), S(k)))
        coeffs.append(_sylvester(left, weight, rhs))
    try:
        _, pi_coset, _ = bruhat_decompose(invert_matrix(coeffs[0]), n.partition)
    except SingularMatrix as exc:
        raise Resonant("eigenframe at infinity is singular") from exc
    pi = invert_permutation(pi_coset.sigma)
    pi_inv = pi_coset.sigma
    # column k of Psi Pi_n^-1 is column pi_n^-1(k) of Psi
    psi = [tuple(tuple(c[j][pi_inv[k]] for k in range(r)) for j in range(r)) for c in coeffs]
    m = n.m
    rows_g = []
    for j in range(r):
        unknowns = [(l, t) for l in range(r) if m[l] <= m[j] for t in range(m[j] - m[l] + 1)]
        eqs, rhs = [], []
        for k in range(r):
            e = m[j] - m[k]
            for t in range(e + 1):
                eqs.append([psi[t - u][l][k] if t - u >= 0 else ZERO for l, u in unknowns])
                rhs.append(ONE if (t == e and j == k) else ZERO)
        try:
            sol, basis = solve_affine(eqs, rhs)
        except InconsistentSystem as exc:
            raise Resonant("normalization at infinity has no solution") from exc
        if basis:
            raise Resonant("normalization at infinity is not unique")
        row = [[ZERO] * (max(m[j] - m[l], 0) + 1) for l in range(r)]
        for (l, t), v in zip(unknowns, sol):
            # zeta^t in chart 1 is z^(m_j - m_l - t) in the affine chart
            row[l][m[j] - m[l] - t] = v
        rows_g.append(tuple(Poly(cs) if m[l] <= m[j] else ZERO_POLY for l, cs in enumerate(row)))
    g = BundleAutomorphism.checked(n, tuple(rows_g))
    out = gauge_transform(g, a)
    if not out.is_fuchsian():
        raise Resonant("normalized connection kept a holomorphic tail")
    n_prime = conjugate_by(permutation_matrix(pi_inv), diag(m))
    return RHResult(g, out, transport_flags(g, a, flags), pi, n_prime)


def rh_residue_sum(result, w):
    """``-Ad(Pi_n)(W_n + N')``, the expected sum of the finite residues."""
    pi_m = permutation_matrix(result.pi)
    return mat_scale(conjugate_by(pi_m, mat_add(w.matrix(w.n - 1), result.n_prime)), -ONE)


# -- accessory parameters ------------------------------------------------------

def accessory_equations(a, w, verbatim=False):
    """Residuals of the three linear relations on (b_i, c_i) in rank 2.

    They follow from ``sum_i A_i = -(diag(alpha_n2, alpha_n1) + N)``, the
    residue sum when the flag at infinity lies in the large cell. The middle
    relation reads ``2 sum beta_i b_i c_i = sum beta_i + m_1 - m_2`` with beta
    summed over all n points; ``verbatim=True`` uses ``1 + sum beta_i`` instead.
    """
    n = a.splitting
    if n.r != 2:
        raise NotRank2("accessory relations are stated in rank 2")
    if not a.is_fuchsian():
        raise NotInGauge("connection has a holomorphic tail")
    alphas = w.alphas
    bc = []
    for i, res in enumerate(a.residues):
        p = bruhat_parameters(res, *alphas[i])
        if p is None:
            raise NotInGauge("a flag lies outside the large cell")
        bc.append(p)
    betas = [S(w.beta(i)) for i in range(w.n)]
    s1 = sum((bt * c for bt, (b, c) in zip(betas, bc)), ZERO)
    s2 = sum((bt * b * c for bt, (b, c) in zip(betas, bc)), ZERO)
    s3 = sum((bt * b * b * c for bt, (b, c) in zip(betas, bc)), ZERO)
    sb = sum((bt * b for bt, (b, c) in zip(betas, bc)), ZERO)
    total_beta = sum(betas, ZERO)
    rhs = (ONE + total_beta) if verbatim else total_beta + (n.m[0] - n.m[1])
    return s1, 2 * s2 - rhs, s3 - sb


def accessory_check(a, w, verbatim=False):
    return not any(accessory_equations(a, w, verbatim))


# -- trivial twist in rank 2 ---------------------------------------------------

def moebius_normalize_trivial(vectors):
    """Matrix sending the lines of three vectors to 0, 1 and infinity.

    The line through ``(1, b)`` is the point ``b`` and ``(0, 1)`` is infinity.
    The result is scaled so its first nonzero entry is 1.
    """
    v1, v2, v3 = (tuple(S(x) for x in v) for v in vectors)
    if any(len(v) != 2 for v in (v1, v2, v3)):
        raise DimensionMismatch("flags are homogeneous 2-vectors")

    def cross(u, v):
        return u[0] * v[1] - u[1] * v[0]

    if any(not (v[0] or v[1]) for v in (v1, v2, v3)):
        raise CoincidentFlags("zero vector does not define a line")
    d13 = cross(v1, v3)
    if not d13 or not cross(v1, v2) or not cross(v2, v3):
        raise CoincidentFlags("the three lines must be distinct")
    s = cross(v2, v3) / d13
    t = cross(v1, v2) / d13
    m_inv = ((s * v1[0], t * v3[0]), (s * v1[1], t * v3[1]))
    m = invert_matrix(m_inv)
    lead = next(x for row in m for x in row if x)
    return tuple(tuple(x / lead for x in row) for row in m)
