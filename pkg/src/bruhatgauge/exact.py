"""Exact arithmetic over the Gaussian rationals Q(i).

Scalars, dense polynomials in one variable, and small dense matrices.
Matrices are plain tuples of row tuples; every function here returns new
values and never mutates its arguments.
"""

from fractions import Fraction
from numbers import Rational

from .errors import RepeatedPoint, SingularMatrix, ZeroPointWithVanishing, InconsistentSystem


def _frac(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


class Scalar:
    """A Gaussian rational ``re + im*i`` with exact rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, Scalar):
            if im:
                raise TypeError("imaginary part given twice")
            self.re, self.im = re.re, re.im
            return
        self.re = _frac(re)
        self.im = _frac(im)

    @classmethod
    def _make(cls, re, im):
        s = object.__new__(cls)
        s.re = re
        s.im = im
        return s

    @staticmethod
    def coerce(x):
        if isinstance(x, Scalar):
            return x
        if isinstance(x, complex):
            raise TypeError("floating point complex numbers are not exact")
        if isinstance(x, (list, tuple)) and len(x) == 2:
            return Scalar(x[0], x[1])
        return Scalar(x)

    def __add__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction)):
                return Scalar._make(self.re + other, self.im)
            return NotImplemented
        return Scalar._make(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction)):
                return Scalar._make(self.re - other, self.im)
            return NotImplemented
        return Scalar._make(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            return Scalar._make(other - self.re, -self.im)
        return NotImplemented

    def __neg__(self):
        return Scalar._make(-self.re, -self.im)

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction)):
                return Scalar._make(self.re * other, self.im * other)
            return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return Scalar._make(a * c, b)
        return Scalar._make(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def inverse(self):
        a, b = self.re, self.im
        if not b:
            if not a:
                raise ZeroDivisionError("division by zero scalar")
            return Scalar._make(1 / a, b)
        n = a * a + b * b
        return Scalar._make(a / n, -b / n)

    def __truediv__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction)):
                if not other:
                    raise ZeroDivisionError("division by zero scalar")
                return Scalar._make(self.re / other, self.im / other)
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return Scalar(other) * self.inverse()
        return NotImplemented

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out, base = ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self):
        return Scalar._make(self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return not self.im and self.re == other
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def is_real(self):
        return not self.im

    def __repr__(self):
        if not self.im:
            return f"Scalar({str(self.re)!r})"
        return f"Scalar({str(self.re)!r}, {str(self.im)!r})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


ZERO = Scalar._make(Fraction(0), Fraction(0))
ONE = Scalar._make(Fraction(1), Fraction(0))
I_UNIT = Scalar._make(Fraction(0), Fraction(1))

S = Scalar.coerce


# -- polynomials -------------------------------------------------------------

class Poly:
    """Dense polynomial with ascending Scalar coefficients and no trailing zeros."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [S(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def _raw(cls, cs):
        cs = list(cs)
        while cs and not cs[-1]:
            cs.pop()
        p = object.__new__(cls)
        p.coeffs = tuple(cs)
        return p

    @classmethod
    def const(cls, c):
        return cls._raw([S(c)])

    @classmethod
    def monomial(cls, degree, c=ONE):
        return cls._raw([ZERO] * degree + [S(c)])

    @property
    def degree(self):
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def coeff(self, k):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return ZERO

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, Scalar)):
            return self.coeffs == Poly.const(other).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def _lift(self, other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction, Scalar)):
            return Poly.const(other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly._raw([x + b[k] if k < len(b) else x for k, x in enumerate(a)])

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw([-c for c in self.coeffs])

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            c = S(other)
            return Poly._raw([x * c for x in self.coeffs])
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return ZERO_POLY
        out = [ZERO] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if y:
                    out[i + j] = out[i + j] + x * y
        return Poly._raw(out)

    __rmul__ = __mul__

    def __call__(self, z):
        z = S(z)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def derivative(self):
        return Poly._raw([c * k for k, c in enumerate(self.coeffs)][1:])

    def divide_linear(self, root):
        """Synthetic division by (z - root); returns (quotient, remainder)."""
        root = S(root)
        cs = self.coeffs
        if not cs:
            return ZERO_POLY, ZERO
        q = [ZERO] * (len(cs) - 1)
        acc = ZERO
        for k in range(len(cs) - 1, -1, -1):
            acc = acc * root + cs[k]
            if k:
                q[k - 1] = acc
        return Poly._raw(q), acc

    def __repr__(self):
        return f"Poly({[str(c) for c in self.coeffs]})"


ZERO_POLY = Poly._raw([])
ONE_POLY = Poly._raw([ONE])
Z_POLY = Poly._raw([ZERO, ONE])


def lagrange_polynomial(points, target_index, vanish_at_zero=False, origin=ZERO):
    """Lagrange basis polynomial equal to 1 at ``points[target_index]``.

    It vanishes at every other entry of ``points`` and, when
    ``vanish_at_zero`` is set, also at ``origin`` (0 unless given), which
    raises its degree by one.
    """
    pts = [S(p) for p in points]
    origin = S(origin)
    if len(set(pts)) != len(pts):
        raise RepeatedPoint("interpolation points must be pairwise distinct")
    if vanish_at_zero and origin in pts:
        raise ZeroPointWithVanishing("points must avoid the vanishing point")
    roots = [p for k, p in enumerate(pts) if k != target_index]
    if vanish_at_zero:
        roots.append(origin)
    target = pts[target_index]
    num = ONE_POLY
    den = ONE
    for q in roots:
        num = num * Poly._raw([-q, ONE])
        den = den * (target - q)
    return num * den.inverse()


# -- matrices ----------------------------------------------------------------

def matrix(rows):
    return tuple(tuple(S(x) for x in row) for row in rows)


def identity(r):
    return tuple(tuple(ONE if i == j else ZERO for j in range(r)) for i in range(r))


def zeros(r, c=None):
    c = r if c is None else c
    return tuple((ZERO,) * c for _ in range(r))


def diag(values):
    vals = [S(v) for v in values]
    r = len(vals)
    return tuple(tuple(vals[i] if i == j else ZERO for j in range(r)) for i in range(r))


def mat_mul(a, b):
    bt = tuple(zip(*b))
    out = []
    for row in a:
        new = []
        for col in bt:
            acc = ZERO
            for x, y in zip(row, col):
                if x and y:
                    acc = acc + x * y
            new.append(acc)
        out.append(tuple(new))
    return tuple(out)


def mat_add(a, b):
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_sub(a, b):
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(a, c):
    c = S(c)
    return tuple(tuple(x * c for x in row) for row in a)


def transpose(a):
    return tuple(tuple(col) for col in zip(*a))


def trace(a):
    acc = ZERO
    for i, row in enumerate(a):
        acc = acc + row[i]
    return acc


def is_zero_matrix(a):
    return not any(x for row in a for x in row)


def invert_matrix(m):
    """Exact inverse by Gauss-Jordan elimination; raises SingularMatrix."""
    r = len(m)
    work = [list(row) + [ONE if i == j else ZERO for j in range(r)] for i, row in enumerate(m)]
    for col in range(r):
        piv = next((i for i in range(col, r) if work[i][col]), None)
        if piv is None:
            raise SingularMatrix("matrix is singular")
        work[col], work[piv] = work[piv], work[col]
        inv = work[col][col].inverse()
        work[col] = [x * inv for x in work[col]]
        prow = work[col]
        for i in range(r):
            f = work[i][col]
            if i != col and f:
                work[i] = [x - f * y for x, y in zip(work[i], prow)]
    return tuple(tuple(row[r:]) for row in work)


def det(m):
    r = len(m)
    work = [list(row) for row in m]
    acc = ONE
    for col in range(r):
        piv = next((i for i in range(col, r) if work[i][col]), None)
        if piv is None:
            return ZERO
        if piv != col:
            work[col], work[piv] = work[piv], work[col]
            acc = -acc
        p = work[col][col]
        acc = acc * p
        pinv = p.inverse()
        for i in range(col + 1, r):
            f = work[i][col]
            if f:
                f = f * pinv
                work[i] = [x - f * y for x, y in zip(work[i], work[col])]
    return acc


def conjugate_by(g, a, g_inv=None):
    """Return Ad(g)(a) = g a g^-1."""
    if g_inv is None:
        g_inv = invert_matrix(g)
    return mat_mul(mat_mul(g, a), g_inv)


def permutation_matrix(perm):
    """Matrix sending e_k to e_perm[k] (0-based perm tuple)."""
    r = len(perm)
    rows = [[ZERO] * r for _ in range(r)]
    for k, p in enumerate(perm):
        rows[p][k] = ONE
    return tuple(tuple(row) for row in rows)


# -- linear systems ------------------------------------------------------------

def rref(rows):
    """Reduced row echelon form; returns (rows, pivot_columns)."""
    work = [list(r) for r in rows]
    if not work:
        return [], []
    ncols = len(work[0])
    pivots = []
    prow = 0
    for col in range(ncols):
        if prow >= len(work):
            break
        piv = next((i for i in range(prow, len(work)) if work[i][col]), None)
        if piv is None:
            continue
        work[prow], work[piv] = work[piv], work[prow]
        inv = work[prow][col].inverse()
        work[prow] = [x * inv for x in work[prow]]
        pr = work[prow]
        for i in range(len(work)):
            f = work[i][col]
            if i != prow and f:
                work[i] = [x - f * y if y else x for x, y in zip(work[i], pr)]
        pivots.append(col)
        prow += 1
    return work[:prow], pivots


def rank(rows):
    return len(rref(rows)[1])


def nullspace(rows, ncols):
    """Basis of {x : rows . x = 0} as a list of tuples."""
    red, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(tuple(v))
    return basis


def solve_affine(rows, rhs):
    """Solve rows . x = rhs; return (particular, nullspace basis).

    Raises InconsistentSystem when there is no solution.
    """
    ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [S(b)] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    if ncols in pivots:
        raise InconsistentSystem("linear system has no solution")
    x = [ZERO] * ncols
    for row, p in zip(red, pivots):
        x[p] = row[ncols]
    return tuple(x), nullspace([r[:ncols] for r in red], ncols)


# -- polynomial matrices -------------------------------------------------------

def pmat(rows):
    """Polynomial matrix from rows of Poly, scalars or ascending coefficient lists."""
    def lift(x):
        if isinstance(x, Poly):
            return x
        if isinstance(x, (list, tuple)):
            return Poly(x)
        return Poly.const(x)
    return tuple(tuple(lift(x) for x in row) for row in rows)


def pmat_const(m):
    return tuple(tuple(Poly._raw([x]) for x in row) for row in m)


def pmat_identity(r):
    return pmat_const(identity(r))


def pmat_mul(a, b):
    bt = tuple(zip(*b))
    out = []
    for row in a:
        new = []
        for col in bt:
            acc = ZERO_POLY
            for x, y in zip(row, col):
                if x and y:
                    acc = acc + x * y
            new.append(acc)
        out.append(tuple(new))
    return tuple(out)


def pmat_add(a, b):
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def pmat_sub(a, b):
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def pmat_scale(a, c):
    return tuple(tuple(x * c for x in row) for row in a)


def pmat_eval(a, z):
    z = S(z)
    return tuple(tuple(x(z) for x in row) for row in a)


def pmat_derivative(a):
    return tuple(tuple(x.derivative() for x in row) for row in a)


def pmat_degree(a):
    return max((x.degree for row in a for x in row), default=-1)


def pmat_coefficient(a, k):
    return tuple(tuple(x.coeff(k) for x in row) for row in a)


def pmat_is_zero(a):
    return not any(x for row in a for x in row)


def interpolate(xs, ys):
    """Newton interpolation through the points (xs[k], ys[k])."""
    xs = [S(x) for x in xs]
    coef = [S(y) for y in ys]
    n = len(xs)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    out = Poly.const(coef[-1]) if coef else ZERO_POLY
    for i in range(n - 2, -1, -1):
        out = out * Poly._raw([-xs[i], ONE]) + coef[i]
    return out


def pmat_det(a):
    """Determinant of a polynomial matrix, by evaluation and interpolation."""
    bound = sum(max((x.degree for x in row), default=0) for row in a)
    bound = max(bound, 0)
    xs = list(range(bound + 1))
    return interpolate(xs, [det(pmat_eval(a, x)) for x in xs])
