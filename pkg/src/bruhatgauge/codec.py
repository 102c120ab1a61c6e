"""JSON wire format.

A rational is the string ``"p/q"`` (``"p"`` when integral); a Gaussian
rational with nonzero imaginary part is ``[re, im]``. Matrices are row-major
arrays, polynomials ascending coefficient arrays. Permutations are 1-based:
``pi[k]`` is the row of the nonzero entry in column ``k``. Positions and
point indices are 1-based as well.
"""

from fractions import Fraction

from .automorphisms import SplittingType
from .exact import Poly, Scalar
from .weyl import CosetClass, Flag, Partition


class ParseError(ValueError):
    code = "ParseError"


# -- scalars -------------------------------------------------------------------

def _rational(x):
    if isinstance(x, bool):
        raise ParseError("booleans are not numbers")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad rational {x!r}") from exc
    if isinstance(x, float):
        raise ParseError("floating point numbers are not accepted; use \"p/q\" strings")
    raise ParseError(f"expected a rational, got {type(x).__name__}")


def decode_scalar(x):
    if isinstance(x, list):
        if len(x) != 2:
            raise ParseError("a complex scalar is [re, im]")
        return Scalar(_rational(x[0]), _rational(x[1]))
    return Scalar(_rational(x))


def encode_rational(q):
    return str(Fraction(q))


def encode_scalar(s):
    s = Scalar.coerce(s)
    if s.im:
        return [str(s.re), str(s.im)]
    return str(s.re)


def decode_rational(x):
    return _rational(x)


# -- arrays --------------------------------------------------------------------

def _list(x, what):
    if not isinstance(x, list):
        raise ParseError(f"{what} must be an array")
    return x


def decode_matrix(x, what="matrix"):
    rows = _list(x, what)
    if not rows:
        raise ParseError(f"{what} is empty")
    out = tuple(tuple(decode_scalar(v) for v in _list(row, what)) for row in rows)
    if any(len(row) != len(out) for row in out):
        raise ParseError(f"{what} must be square")
    return out


def encode_matrix(m):
    return [[encode_scalar(x) for x in row] for row in m]


def decode_poly(x):
    return Poly([decode_scalar(v) for v in _list(x, "polynomial")])


def encode_poly(p):
    return [encode_scalar(c) for c in p.coeffs]


def decode_pmatrix(x, what="polynomial matrix"):
    rows = _list(x, what)
    out = tuple(tuple(decode_poly(v) for v in _list(row, what)) for row in rows)
    if not out or any(len(row) != len(out) for row in out):
        raise ParseError(f"{what} must be square and nonempty")
    return out


def encode_pmatrix(m):
    return [[encode_poly(p) for p in row] for row in m]


def decode_points(x):
    return tuple(decode_scalar(v) for v in _list(x, "points"))


def decode_ints(x, what):
    vals = _list(x, what)
    if any(isinstance(v, bool) or not isinstance(v, int) for v in vals):
        raise ParseError(f"{what} must be integers")
    return tuple(vals)


# -- combinatorial data ---------------------------------------------------------

def decode_partition(x, r=None):
    if x is None:
        if r is None:
            raise ParseError("partition is required")
        return Partition.complete(r)
    return Partition(decode_ints(x, "partition"))


def decode_permutation(x, r):
    p = decode_ints(x, "pi")
    if sorted(p) != list(range(1, r + 1)):
        raise ParseError(f"pi must be a permutation of 1..{r}")
    return tuple(v - 1 for v in p)


def encode_permutation(p):
    return [v + 1 for v in p]


def decode_splitting(x):
    return SplittingType(decode_ints(x, "m"))


def decode_flag(x, partition=None):
    if not isinstance(x, dict):
        raise ParseError("a flag is an object with keys pi and L")
    L = decode_matrix(require(x, "L"), "L")
    r = len(L)
    lam = partition or decode_partition(x.get("partition"), r)
    return Flag(CosetClass(decode_permutation(require(x, "pi"), r), lam), L)


def encode_flag(f):
    return {"L": encode_matrix(f.L), "pi": encode_permutation(f.coset.sigma),
            "partition": list(f.partition.parts)}


def require(obj, key):
    if not isinstance(obj, dict):
        raise ParseError("input must be a JSON object")
    if key not in obj:
        raise ParseError(f"missing key {key!r}")
    return obj[key]
