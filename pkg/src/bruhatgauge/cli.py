"""Command-line front end: one subcommand per operation, JSON in and out.

Exit status is 0 on success, 1 for a mathematical error reported as
``{"error": code, "detail": message}`` and 2 for malformed input.
"""

import argparse
import json
import sys

from . import __version__
from .automorphisms import BundleAutomorphism, aut_basis, aut_membership, factor_automorphism
from .codec import (
    ParseError, decode_flag, decode_matrix, decode_partition, decode_permutation, decode_pmatrix,
    decode_points, decode_rational, decode_scalar, decode_splitting, decode_ints, encode_flag, encode_matrix,
    encode_permutation, encode_pmatrix, encode_poly, encode_scalar, require,
)
from .configurations import (
    FlagConfiguration, component_cell, component_groups, normalize_configuration,
)
from .connections import (
    LogConnection, ParabolicWeights, accessory_equations, adapted_space_dimension,
    bruhat_gauge, gauge_transform, moebius_normalize_trivial, rh_gauge, rh_residue_sum,
    transport_flags,
)
from .errors import BruhatError, InvalidConfiguration
from .weyl import CosetClass, Flag, bruhat_decompose, factor_unipotent

COMMANDS = {}


def command(name):
    def register(fn):
        COMMANDS[name] = fn
        return fn
    return register


# -- shared decoding -------------------------------------------------------------

def _connection(p):
    n = decode_splitting(require(p, "m"))
    points = decode_points(require(p, "points"))
    residues = tuple(decode_matrix(a, "residue") for a in require(p, "residues"))
    tail = decode_pmatrix(p["tail"], "tail") if p.get("tail") is not None else None
    return LogConnection(n, points, residues, tail)


def _flags(p, key="flags"):
    return tuple(decode_flag(f) for f in require(p, key))


def _weights(p):
    return ParabolicWeights(tuple(tuple(decode_rational(x) for x in row)
                                  for row in require(p, "weights")))


def _encode_connection(a):
    return {
        "m": list(a.splitting.m),
        "points": [encode_scalar(z) for z in a.points],
        "residues": [encode_matrix(x) for x in a.residues],
        "tail": encode_pmatrix(a.tail),
        "residue_at_infinity": encode_matrix(a.residue_at_infinity()),
    }


# -- weyl_bruhat -----------------------------------------------------------------

@command("bruhat")
def _bruhat(p):
    g = decode_matrix(require(p, "matrix"))
    lam = decode_partition(p.get("partition"), len(g))
    L, coset, P = bruhat_decompose(g, lam)
    return {"L": encode_matrix(L), "pi": encode_permutation(coset.sigma), "P": encode_matrix(P),
            "partition": list(lam.parts)}


@command("factor-unipotent")
def _factor_unipotent(p):
    c = decode_matrix(require(p, "matrix"))
    lam = decode_partition(p.get("partition"), len(c))
    coset = CosetClass(decode_permutation(require(p, "pi"), len(c)), lam)
    a, b = factor_unipotent(c, lam, coset)
    return {"A": encode_matrix(a), "B": encode_matrix(b)}


# -- bundle_aut ------------------------------------------------------------------

@command("aut-check")
def _aut_check(p):
    n = decode_splitting(require(p, "m"))
    return {"automorphism": aut_membership(decode_pmatrix(require(p, "g")), n)}


def _basis_json(basis):
    groups = []
    for elems in basis.groups:
        groups.append([{"point": None if e.point is None else e.point + 1,
                        "position": [e.position[0] + 1, e.position[1] + 1],
                        "poly": encode_poly(e.poly)} for e in elems])
    return groups


@command("aut-basis")
def _aut_basis(p):
    n = decode_splitting(require(p, "m"))
    basis = aut_basis(n, decode_points(require(p, "points")))
    return {"groups": _basis_json(basis), "count": len(basis)}


@command("aut-factor")
def _aut_factor(p):
    n = decode_splitting(require(p, "m"))
    basis = aut_basis(n, decode_points(require(p, "points")))
    fac = factor_automorphism(decode_pmatrix(require(p, "g")), basis)
    return {"coeffs": [[encode_scalar(c) for c in cs] for cs in fac.coeffs],
            "u": encode_matrix(fac.u), "d": encode_matrix(fac.d)}


# -- flag_config -----------------------------------------------------------------

@command("normalize-flags")
def _normalize_flags(p):
    n = decode_splitting(require(p, "m"))
    points = decode_points(require(p, "points"))
    comps = require(p, "components")
    if not isinstance(comps, list) or len(comps) != n.point_count + 1:
        raise ParseError(f"expected {n.point_count + 1} components")
    flags = []
    for raw, l in zip(comps, component_groups(n)):
        lam, coset = component_cell(n, l)
        L = decode_matrix(require(raw, "L"), "L")
        if "pi" in raw:
            given = CosetClass(decode_permutation(raw["pi"], len(L)), lam)
            if given != coset:
                raise InvalidConfiguration(f"component of group {l} lies in the wrong cell")
        flags.append(Flag(coset, L))
    cfg = FlagConfiguration(n, points, tuple(flags))
    g, out = normalize_configuration(cfg)
    return {"g": encode_pmatrix(g.g), "normalized": out.is_special()}


# -- connections -----------------------------------------------------------------

@command("gauge-transform")
def _gauge_transform(p):
    a = _connection(p)
    g = BundleAutomorphism.checked(a.splitting, decode_pmatrix(require(p, "g")))
    out = {"connection": _encode_connection(gauge_transform(g, a))}
    if "flags" in p:
        out["flags"] = [encode_flag(f) for f in transport_flags(g, a, _flags(p))]
    return out


@command("bruhat-gauge")
def _bruhat_gauge(p):
    a = _connection(p)
    anchors = tuple(i - 1 for i in decode_ints(require(p, "anchors"), "anchors"))
    g, a2, flags = bruhat_gauge(a, _flags(p), anchors, strong=bool(p.get("strong", False)))
    return {"g": encode_pmatrix(g.g), "connection": _encode_connection(a2),
            "flags": [encode_flag(f) for f in flags]}


@command("rh-gauge")
def _rh_gauge(p):
    a = _connection(p)
    w = _weights(p)
    res = rh_gauge(a, _flags(p), w)
    return {"g": encode_pmatrix(res.g.g), "connection": _encode_connection(res.connection),
            "flags": [encode_flag(f) for f in res.flags], "pi": encode_permutation(res.pi),
            "n_prime": encode_matrix(res.n_prime),
            "residue_sum": encode_matrix(rh_residue_sum(res, w)),
            "fuchsian": res.connection.is_fuchsian()}


@command("dim-adapted")
def _dim_adapted(p):
    n = decode_splitting(require(p, "m"))
    return {"dim": adapted_space_dimension(n, decode_points(require(p, "points")), _flags(p))}


@command("check-accessory")
def _check_accessory(p):
    a = _connection(p)
    residuals = accessory_equations(a, _weights(p), verbatim=bool(p.get("verbatim", False)))
    return {"accessory": not any(residuals), "residuals": [encode_scalar(x) for x in residuals]}


@command("moebius")
def _moebius(p):
    vecs = require(p, "flags")
    if not isinstance(vecs, list) or len(vecs) != 3:
        raise ParseError("moebius expects three homogeneous 2-vectors")
    m = moebius_normalize_trivial([[decode_scalar(x) for x in v] for v in vecs])
    return {"matrix": encode_matrix(m)}


# -- driver ----------------------------------------------------------------------

def run_command(name, payload):
    """Run one request; returns (exit_code, response)."""
    try:
        return 0, COMMANDS[name](payload)
    except ParseError as exc:
        return 2, {"error": "ParseError", "detail": str(exc)}
    except BruhatError as exc:
        return 1, {"error": exc.code, "detail": str(exc)}
    except (TypeError, AttributeError, KeyError, IndexError) as exc:
        return 2, {"error": "ParseError", "detail": f"malformed input: {exc}"}


def dumps(obj, pretty=False):
    if pretty:
        return json.dumps(obj, sort_keys=True, indent=2)
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def build_parser():
    parser = argparse.ArgumentParser(prog="bruhatgauge", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--input", metavar="FILE", help="read JSON from FILE instead of stdin")
        sp.add_argument("--batch", action="store_true", help="input is an array of requests")
        sp.add_argument("--pretty", action="store_true", help="indent the output")
    return parser


def main(argv=None, stdin=None, stdout=None):
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        if args.input:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        else:
            text = stdin.read()
        payload = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        stdout.write(dumps({"error": "ParseError", "detail": str(exc)}, args.pretty) + "\n")
        return 2
    if args.batch:
        if not isinstance(payload, list):
            stdout.write(dumps({"error": "ParseError", "detail": "--batch expects an array"},
                               args.pretty) + "\n")
            return 2
        results = [run_command(args.command, item) for item in payload]
        stdout.write(dumps([r for _, r in results], args.pretty) + "\n")
        return max((code for code, _ in results), default=0)
    code, result = run_command(args.command, payload)
    stdout.write(dumps(result, args.pretty) + "\n")
    return code


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
