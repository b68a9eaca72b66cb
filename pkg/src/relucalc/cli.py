"""Command line: ``relucalc build ...`` and ``relucalc verify ...``.

Exit codes: 0 pass, 1 bound or certificate failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import analysis as an
from . import constructors as cs
from .io import NetworkParseError, load_network, report_to_json, save_network, write_report
from .network import NetworkError, metrics

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

BUILD_KINDS = ("product", "sin-product", "sin-sum", "square", "sawtooth", "periodic")
VERIFY_KINDS = ("error", "trace", "pieces", "certify", "growth")
TARGETS = ("product", "sin-product", "sin-sum", "periodic", "identity", "square", "sawtooth")


class UsageError(Exception):
    pass


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _target_flags(p, d_default=None):
    p.add_argument("--d", type=_positive_int, default=d_default)
    p.add_argument("--eps", type=float)
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--kappa", type=float, default=1.0)
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--samples", type=_positive_int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="relucalc", description="Build and verify explicit ReLU networks.")
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build a network and check its closed-form bounds")
    b.add_argument("kind", choices=BUILD_KINDS)
    _target_flags(b)
    b.add_argument("--N", type=int, help="depth/precision parameter for square, sawtooth")
    b.add_argument("--R", type=float, help="radius for square (default: base network on [0, 1])")
    b.add_argument("--downsized", action="store_true", help="product: quarter the parameter size")
    b.add_argument("--out", required=True)

    v = sub.add_parser("verify", help="measure errors, trace pieces, certify, check growth")
    v.add_argument("kind", choices=VERIFY_KINDS)
    v.add_argument("--net", required=True)
    v.add_argument("--target", choices=TARGETS)
    _target_flags(v)
    v.add_argument("--N", type=int)
    v.add_argument("--R", type=float)
    v.add_argument("--segment", help="comma separated coordinates of p followed by q")
    return parser


def _box(args, a_default, b_default):
    a = a_default if args.a is None else args.a
    b = b_default if args.b is None else args.b
    if b < a:
        raise UsageError("need b >= a")
    return a, b


def _need(args, *names):
    for n in names:
        if getattr(args, n) is None:
            raise UsageError(f"--{n} is required here")


def _spec(args, family, a, b):
    return cs.TargetSpec(family, args.d, a, b, args.gamma, args.beta, args.kappa, args.phi)


def _sin(phi):
    return lambda x: math.sin(x + phi)


def _sawtooth_target(B, n):
    return an.TargetFunction(kind="callable", fn=lambda X: cs.edgy(2.0 ** (n + 1) * X[:, 0] / B))


def _build(args):
    kind = args.kind
    if kind == "product":
        _need(args, "d", "eps")
        a, b = _box(args, -2.0, 2.0)
        spec = _spec(args, "product", a, b)
        if args.downsized:
            net, rep = cs.build("downsized", d=args.d, eps=args.eps, a=a, b=b, gamma=args.gamma, beta=args.beta)
        else:
            eps, R = cs._downsized_inputs(args.eps, a, b)
            if eps != args.eps:
                raise UsageError("--eps must lie in (0, 1) unless --downsized is given")
            net, rep = cs.build("dprod", d=args.d, eps=eps, R=R, gamma=args.gamma, beta=args.beta)
        target, box = an.TargetFunction(spec), (a, b)
    elif kind in ("sin-product", "sin-sum"):
        _need(args, "d", "eps")
        a, b = _box(args, 0.0, 7.0)
        family = kind.replace("-", "_")
        spec = _spec(args, family, a, b)
        net, rep = cs.build(family, spec=spec, eps=args.eps)
        target, box = an.TargetFunction(spec), (a, b)
    elif kind == "square":
        _need(args, "N")
        if args.N < 1:
            raise UsageError("--N must be >= 1")
        if args.R is None or args.R == 1:
            net, rep = cs.build("square_base", N=args.N)
            box = (0.0, 1.0)
        else:
            net, rep = cs.build("square", N=args.N, R=args.R)
            box = (-args.R, args.R)
        target = an.TargetFunction(kind="square")
    elif kind == "sawtooth":
        _need(args, "N")
        if args.N < 0:
            raise UsageError("--N must be >= 0")
        B = 1.0 if args.b is None else args.b
        net, rep = cs.build("sawtooth", B=B, n=args.N)
        rep.claimed_error_bound = 0.0
        rep.anchors["error"] = "f = edgy(2^(n+1) x / B) on [-B, B]"
        target, box = _sawtooth_target(B, args.N), (-B, B)
    else:  # periodic
        _need(args, "eps")
        a, b = _box(args, -3.0, 3.0)
        R = max(abs(a), abs(b), 1e-300)
        net, rep = cs.build("scaled_periodic", g=_sin(args.phi), R=R, gamma=args.gamma,
                            beta=args.beta, eps=args.eps)
        args.d = 1
        spec = cs.TargetSpec("periodic_generic", 1, a, b, args.gamma, args.beta, 1.0, args.phi)
        target, box = an.TargetFunction(spec), (a, b)
    err = an.max_error_on_box(net, target, box[0], box[1], args.samples, args.seed)
    if rep.claimed_error_bound is not None:
        rep.measured_error = err
        if kind == "sawtooth":
            rep.claimed_error_bound = 1e-12
    save_network(net, args.out)
    doc = {
        "command": "build",
        "construction": rep.construction,
        "params": rep.params,
        "metrics": metrics(net),
        "box": list(box),
        "samples": args.samples,
        "seed": args.seed,
        "measured_error": err,
        "bounds": [vars_bound(x) for x in rep.bounds()],
        "notes": rep.notes,
        "passed": rep.passed,
    }
    if args.report:
        write_report(doc, args.report, rep.bounds())
    print(report_to_json({"passed": rep.passed, "failing": rep.failing(), "measured_error": err,
                          "param_count": rep.measured_param, "length": rep.measured_length,
                          "size_norm": rep.measured_size}), end="")
    if not rep.passed:
        print("bound check failed: " + ", ".join(rep.failing()), file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def vars_bound(bound):
    return {"name": bound.name, "measured": bound.measured, "claimed": bound.claimed,
            "relation": bound.relation, "pass": bound.passed, "anchor": bound.anchor}


def _target_for_verify(args, net):
    t = args.target
    d = net.in_dim
    if args.d is not None and args.d != d and t in ("product", "sin-product", "sin-sum"):
        raise UsageError(f"--d {args.d} does not match the network input dimension {d}")
    args.d = d
    if t is None:
        raise UsageError("--target is required here")
    if t == "identity":
        return an.TargetFunction(kind="identity"), (-1.0, 1.0)
    if t == "square":
        return an.TargetFunction(kind="square"), (0.0, 1.0)
    if t == "sawtooth":
        B = 1.0 if args.b is None else args.b
        return _sawtooth_target(B, args.N or 0), (-B, B)
    if t == "periodic":
        a, b = _box(args, -3.0, 3.0)
        spec = cs.TargetSpec("periodic_generic", 1, a, b, args.gamma, args.beta, args.kappa, args.phi)
        return an.TargetFunction(spec), (a, b)
    if t == "product":
        a, b = _box(args, -2.0, 2.0)
        return an.TargetFunction(_spec(args, "product", a, b)), (a, b)
    a, b = _box(args, 0.0, 7.0)
    return an.TargetFunction(_spec(args, t.replace("-", "_"), a, b)), (a, b)


def _segment(args, d):
    if args.segment is None:
        raise UsageError("--segment is required here")
    try:
        vals = [float(v) for v in args.segment.split(",")]
    except ValueError:
        raise UsageError("--segment must be comma separated numbers") from None
    if len(vals) != 2 * d:
        raise UsageError(f"--segment needs {2 * d} numbers for a {d}-input network")
    return np.array(vals[:d]), np.array(vals[d:])


def _verify(args):
    net = load_network(args.net)
    kind = args.kind
    doc = {"command": "verify", "kind": kind, "net": metrics(net), "seed": args.seed}
    code = EXIT_OK
    if kind == "error":
        target, (a, b) = _target_for_verify(args, net)
        if args.a is not None:
            a = args.a
        if args.b is not None:
            b = args.b
        err = an.max_error_on_box(net, target, a, b, args.samples, args.seed)
        doc.update(box=[a, b], samples=args.samples, max_error=err)
        summary = {"max_error": err}
        if args.eps is not None:
            doc["eps"] = args.eps
            summary["passed"] = doc["passed"] = err <= args.eps + cs.SLACK
            code = EXIT_OK if doc["passed"] else EXIT_FAIL
    elif kind in ("trace", "pieces"):
        p, q = _segment(args, net.in_dim)
        tr = an.exact_line_trace(net, p, q)
        n = an.count_pieces(tr)
        doc.update(p=p, q=q, pieces=n)
        if kind == "trace":
            doc.update(breakpoints=tr.breakpoints, slopes=tr.slopes, intercepts=tr.intercepts)
        m = metrics(net)
        doc["piece_bound"] = an.piece_bound(m.param_count, m.hidden_length)
        summary = {"pieces": n}
    elif kind == "certify":
        if args.target not in ("sin-product", "sin-sum"):
            raise UsageError("certify needs --target sin-product or sin-sum")
        _need(args, "eps")
        target, (a, b) = _target_for_verify(args, net)
        spec = target.spec
        W = (an.oscillation_witnesses_product(spec) if spec.family == "sin_product"
             else an.oscillation_witnesses_sum(spec))
        cert = an.shallow_incapacity_certificate(net, W, args.eps)
        doc.update(certificate=cert, witnesses=W.S, eps=args.eps)
        summary = {"certified": cert.certified, "pieces": cert.pieces, "needed": cert.needed,
                   "violating_point": cert.violating_point, "error_at_point": cert.error_at_point}
        code = EXIT_OK if cert.certified else EXIT_FAIL
    else:  # growth
        a = -1.0 if args.a is None else args.a
        b = 1.0 if args.b is None else args.b
        res = an.growth_bound_check(net, a, b, args.samples, args.seed)
        doc.update(box=[a, b], growth=res)
        summary = {"passed": res.passed, "measured": res.measured, "bound": res.bound}
        code = EXIT_OK if res.passed else EXIT_FAIL
    if args.report:
        write_report(doc, args.report, [])
    print(report_to_json(summary), end="")
    return code


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    try:
        return _build(args) if args.command == "build" else _verify(args)
    except (UsageError, cs.ContractError, NetworkParseError) as exc:
        print(f"relucalc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NetworkError, OSError) as exc:
        print(f"relucalc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
