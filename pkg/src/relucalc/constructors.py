"""Explicit ReLU network constructions and size-reduction transforms.

Every constructor returns a plain :class:`Network`.  The closed-form claims
attached to each construction are produced separately by :func:`report`, so
a claim depends only on the inputs and never on how the network came out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .network import (
    Network,
    NetworkError,
    affine_net,
    compose,
    compose_chain,
    identity_net,
    metrics,
    parallelize,
)

SLACK = 1e-12


class ContractError(ValueError):
    """A constructor was called outside its stated parameter range."""


def ceil_log2(x: float) -> int:
    """Exact ceil(log2 x) for x > 0, computed from the binary exponent."""
    if not x > 0:
        raise ValueError("ceil_log2 needs a positive argument")
    m, e = math.frexp(x)
    return e - 1 if m == 0.5 else e


def edgy(x):
    """2-periodic hat: distance from x to the nearest even integer."""
    x = np.asarray(x, dtype=np.float64)
    return np.abs(x - 2.0 * np.round(x / 2.0))


# --------------------------------------------------------------------------
# target description shared with the analysis module

@dataclass(frozen=True)
class TargetSpec:
    family: str
    d: int
    a: float = 0.0
    b: float = 1.0
    gamma: float = 1.0
    beta: float = 1.0
    kappa: float = 1.0
    phi: float = 0.0

    def __post_init__(self):
        if self.family not in ("product", "sin_product", "sin_sum", "periodic_generic"):
            raise ContractError(f"unknown target family {self.family!r}")
        if self.d < 1:
            raise ContractError("d must be positive")
        if self.b < self.a:
            raise ContractError("need b >= a")
        if self.gamma <= 0:
            raise ContractError("gamma must be positive")
        if self.family in ("product", "sin_product") and self.gamma > 1:
            raise ContractError("gamma must lie in (0, 1]")
        if self.beta < 1:
            raise ContractError("beta must be >= 1")
        if self.kappa <= 0:
            raise ContractError("kappa must be positive")


# --------------------------------------------------------------------------
# basic building blocks

def scaling_net(beta: float, w: int, n: int) -> Network:
    """Realizes x -> (w*beta)^n x with hidden width 2w."""
    if not beta > 0:
        raise ContractError("beta must be positive")
    if w < 1 or n < 1:
        raise ContractError("w and n must be positive integers")
    W1 = np.tile([[1.0], [-1.0]], (w, 1))
    W2 = np.tile([beta, -beta], w).reshape(1, -1)
    layers = [(W1, np.zeros(2 * w))]
    layers += [(W1 @ W2, np.zeros(2 * w))] * (n - 1)
    layers.append((W2, np.zeros(1)))
    return Network(layers)


def signed_scaling_net(beta: float, L: int) -> Network:
    """Realizes x -> beta x with L+1 layers of width 2 and entries of size <= 2."""
    if beta == 0:
        raise ContractError("beta must be nonzero")
    if L < 0:
        raise ContractError("L must be nonnegative")
    if abs(beta) > 2.0 ** L:
        raise ContractError(f"L={L} is too small for |beta|={abs(beta)}: need L >= log2|beta|")
    if L == 0:
        return affine_net([[beta]])
    sign = affine_net([[math.copysign(1.0, beta)]])
    return compose(sign, scaling_net(abs(beta) ** (1.0 / L), 1, L))


def sawtooth_net(B: float, n: int) -> Network:
    """Realizes edgy(2^(n+1) x / B) on [-B, B]; zero outside when n >= 1."""
    if not B > 0:
        raise ContractError("B must be positive")
    if n < 0:
        raise ContractError("n must be nonnegative")
    s = 2.0 / B
    f = Network([
        (np.array([[s], [s], [-s], [-s]]), np.array([0.0, -1.0, 0.0, -1.0])),
        (np.array([[1.0, -2.0, 1.0, -2.0]]), np.zeros(1)),
    ])
    g = Network([
        (np.ones((4, 1)), np.array([0.0, 0.0, -0.5, -0.5])),
        (np.array([[1.0, 1.0, -2.0, -2.0]]), np.zeros(1)),
    ])
    for _ in range(n):
        f = compose(g, f)
    return f


def square_net_base(N: int) -> Network:
    """Dyadic interpolant of x^2 on [0, 1] at level N; equals ReLU outside [0, 1].

    Three channels per hidden layer carry the pieces of the current tent
    iterate, the fourth carries the running interpolant.
    """
    if N < 1:
        raise ContractError("N must be >= 1")
    layers = [(np.ones((4, 1)), np.array([0.0, -0.5, -1.0, 0.0]))]
    for s in range(1, N):
        q = 4.0 ** -s
        W = np.array([
            [2.0, -4.0, 2.0, 0.0],
            [2.0, -4.0, 2.0, 0.0],
            [2.0, -4.0, 2.0, 0.0],
            [-2.0 * q, 4.0 * q, -2.0 * q, 1.0],
        ])
        layers.append((W, np.array([0.0, -0.5, -1.0, 0.0])))
    q = 4.0 ** -N
    layers.append((np.array([[-2.0 * q, 4.0 * q, -2.0 * q, 1.0]]), np.zeros(1)))
    return Network(layers)


def square_net(N: int, R: float) -> Network:
    """Approximates x^2 on [-R, R] with error R^2 4^(-N-1)."""
    if not R > 1:
        raise ContractError("R must exceed 1")
    n = ceil_log2(R)
    g1 = Network([
        (np.array([[1.0 / R], [-1.0 / R]]), np.zeros(2)),
        (np.array([[1.0, 1.0]]), np.zeros(1)),
    ])
    g3 = scaling_net(R ** (2.0 / n), 1, n)
    I1 = identity_net(1)
    return compose_chain(g3, I1, square_net_base(N), I1, g1)


def product2_net(N: int, R: float) -> Network:
    """Approximates xy on [-R, R]^2 through ((x+y)^2 - x^2 - y^2) / 2."""
    if not R > 1:
        raise ContractError("R must exceed 1")
    g1 = affine_net([[1.0, 1.0], [1.0, 0.0], [0.0, 1.0]])
    g3 = affine_net([[0.5, -0.5, -0.5]])
    I3 = identity_net(3)
    squares = parallelize([square_net(N, 2.0 * R)] * 3)
    return compose_chain(g3, I3, squares, I3, g1)


def pairwise_product_net(d: int, N: int, R: float) -> Network:
    """(x1..x2d) -> approximately (x1 x2, ..., x_{2d-1} x_{2d})."""
    if d < 1:
        raise ContractError("d must be positive")
    one = product2_net(N, R)
    return one if d == 1 else parallelize([one] * d)


def printed_tree_stage_precisions(d: int, eps: float, R: float) -> list:
    """Stage precisions from the original closed form (kept for comparison only).

    They ignore that stage i works on numbers of size R^(2^(i-1)), so for
    R > 1 and d >= 2 the tree can miss its error target.
    """
    lr = math.log2(R)
    le = math.log2(eps)
    return [
        math.ceil((8 * d - 5 * i) / 4 + (2 ** (d - 1) - 2 ** (i - 1) + 1) * lr - 0.5 * le + 0.5)
        for i in range(1, d + 1)
    ]


def tree_stage_precisions(d: int, eps: float, R: float) -> list:
    """Precision of pairwise stage i; each stage then contributes at most eps/d.

    Stage i multiplies numbers of size R_i = R^(2^(i-1)), its error carries a
    factor R_i^2, and the later stages amplify it by R^(2^d - 2^i).
    """
    lr = math.log2(R)
    le = math.log2(eps)
    return [
        math.ceil((8 * d - 5 * i) / 4 + 2 ** (d - 1) * lr - 0.5 * le + 0.5)
        for i in range(1, d + 1)
    ]


def tree_product_net(d: int, eps: float, R: float) -> Network:
    """Approximates the product of 2^d numbers in [-R, R] by a binary tree of pairwise stages."""
    if d < 1:
        raise ContractError("d must be positive")
    if not 0 < eps < 1:
        raise ContractError("eps must lie in (0, 1)")
    if not R > 1:
        raise ContractError("R must exceed 1")
    Ns = tree_stage_precisions(d, eps, R)
    f = pairwise_product_net(2 ** (d - 1), Ns[0], R)
    for i in range(2, d + 1):
        h = pairwise_product_net(2 ** (d - i), Ns[i - 1], R ** (2 ** (i - 1)))
        f = compose_chain(h, identity_net(2 ** (d - i + 1)), f)
    return f


def dprod_net(d: int, eps: float, R: float, gamma: float = 1.0, beta: float = 1.0) -> Network:
    """Approximates gamma beta^d x1...xd on [-R, R]^d with error eps and size <= 4."""
    _check_dprod(d, eps, R, gamma, beta)
    if d == 1:
        gb = gamma * beta
        return signed_scaling_net(gb, max(0, ceil_log2(gb)))
    k = ceil_log2(d)
    D = 2 ** k
    W = np.zeros((D, d))
    W[0, 0] = gamma
    for i in range(1, d):
        W[i, i] = 1.0
    bias = np.zeros(D)
    bias[d:] = 1.0
    g1 = affine_net(W, bias)
    g2 = tree_product_net(k, eps * beta ** -d, R)
    g3 = signed_scaling_net(beta ** d, d * ceil_log2(beta))
    return compose_chain(g3, identity_net(1), g2, identity_net(D), g1)


def _check_dprod(d, eps, R, gamma, beta):
    if d < 1:
        raise ContractError("d must be positive")
    if not 0 < eps < 1:
        raise ContractError("eps must lie in (0, 1)")
    if not R > 1:
        raise ContractError("R must exceed 1")
    if not 0 < gamma <= 1:
        raise ContractError("gamma must lie in (0, 1]")
    if not beta >= 1:
        raise ContractError("beta must be >= 1")


def _downsized_inputs(eps, a, b):
    R = max(abs(a), abs(b))
    if R <= 1:
        R = 2.0
    return min(eps, 0.5), float(R)


def downsized_product_M(d, eps, a, b, beta) -> float:
    terms = [1.0, math.log2(1.0 / eps), ceil_log2(beta)]
    for v in (a, b):
        if v != 0:
            terms.append(ceil_log2(abs(v)))
    return float(max(terms))


def downsized_product_net(d: int, eps: float, a: float, b: float,
                          gamma: float = 1.0, beta: float = 1.0) -> Network:
    """Product approximation on [a, b]^d with every parameter of size at most 1."""
    if b < a:
        raise ContractError("need b >= a")
    if not eps > 0:
        raise ContractError("eps must be positive")
    e, R = _downsized_inputs(eps, a, b)
    return quarter_size(dprod_net(d, e, R, gamma, beta))


# --------------------------------------------------------------------------
# trade-off transforms

def _require_scalar(net: Network):
    if net.out_dim != 1:
        raise NetworkError(f"transform needs scalar output, got {net.out_dim}")


def downscale_outputs(net: Network) -> Network:
    """Weights halved, bias of layer k scaled by 2^-k; realizes 2^-L f."""
    _require_scalar(net)
    return Network([(W / 2.0, b * 2.0 ** -(k + 1)) for k, (W, b) in enumerate(net.layers)])


def halve_size(net: Network) -> Network:
    _require_scalar(net)
    L = net.length
    return compose_chain(scaling_net(1.0, 2, L), identity_net(1), downscale_outputs(net))


def quarter_size(net: Network) -> Network:
    return halve_size(halve_size(net))


def extend_to_depth(net: Network, L: int) -> Network:
    _require_scalar(net)
    if L <= net.length:
        raise NetworkError(f"target length {L} must exceed current length {net.length}")
    I1 = identity_net(1)
    return compose_chain(*([I1] * (L - net.length)), net)


# --------------------------------------------------------------------------
# periodic approximators

def single_hat_net(a: float, c: float, n: int, N: int, C: float) -> Network:
    """2pi-periodic hat of height 2c/(C(N+1)) on [a, a + 4pi/(N+1)], zero for |x| >= 2^n pi."""
    if n < 2:
        raise ContractError("single hat needs n >= 2")
    aa = a - (N - 1) * math.pi / (N + 1)
    bb = (N - 1) / (N + 1)
    cc = c / C
    g1 = Network([
        (np.array([[1.0], [-1.0]]), np.array([-aa / 2, aa / 2])),
        (np.array([[1.0, -1.0]]), np.array([-aa / 2])),
    ])
    g2 = sawtooth_net(2.0 ** n * math.pi, n - 1)
    g3 = Network([(np.array([[1.0]]), np.array([-bb])), (np.array([[cc]]), np.zeros(1))])
    I1 = identity_net(1)
    return compose_chain(compose(g3, I1), g2, I1, g1)


def _hat_amplitudes(g: Callable, N: int):
    nodes = 2.0 * np.arange(1, N + 1) * math.pi / (N + 1)
    g0 = float(g(0.0))
    amps = np.array([float(g(c)) - g0 for c in nodes])
    return g0, amps


def hat_sum_net(a_list, c_list, shift: float, n: int, N: int, C: float) -> Network:
    """shift + sum of N periodic hats starting at a_list with heights c_list."""
    if len(a_list) != N or len(c_list) != N:
        raise ContractError("need N hat positions and heights")
    hats = parallelize([single_hat_net(a, c, n, N, C) for a, c in zip(a_list, c_list)])
    nn = max(1, ceil_log2(C))
    w = math.ceil(((N + 1) / 2) ** (1.0 / nn))
    beta = (C * (N + 1) / 2) ** (1.0 / nn) / w
    g1 = affine_net(np.ones((N, 1)))
    g2 = affine_net(np.ones((1, N)))
    g3 = scaling_net(beta, w, nn)
    g4 = affine_net([[1.0]], [shift])
    IN = identity_net(N)
    return compose_chain(g4, identity_net(1), g3, g2, compose(IN, hats), IN, g1)


def periodic_effective_C(g: Callable, N: int, C: float) -> float:
    _, amps = _hat_amplitudes(g, N)
    return max(C, float(np.max(np.abs(amps))) if N else 0.0)


def _check_periodic(eps, N, C):
    if not 0 < eps < 1:
        raise ContractError("eps must lie in (0, 1)")
    if N < 1:
        raise ContractError("N must be positive")
    if C < 1:
        raise ContractError("C must be >= 1")
    if eps * (N + 1) < 2 * math.pi * (1 - 1e-15):
        raise ContractError("need eps (N + 1) >= 2 pi")


def periodic_lipschitz_net(g: Callable, n: int, N: int, C: float, eps: float) -> Network:
    """Approximates a 1-Lipschitz 2pi-periodic g on [-2^n pi, 2^n pi]; g(0) outside."""
    _check_periodic(eps, N, C)
    if n < 1:
        raise ContractError("n must be positive")
    if n == 1:
        return flat_periodic_net(g, N, eps)
    g0, amps = _hat_amplitudes(g, N)
    Ce = max(C, float(np.max(np.abs(amps))))
    starts = 2.0 * np.arange(0, N) * math.pi / (N + 1)
    return hat_sum_net(starts, amps, g0, n, N, Ce)


def flat_periodic_net(g: Callable, N: int, eps: float) -> Network:
    """Six-layer interpolant of g on [-2pi, 2pi], constant g(0) outside."""
    if not 0 < eps < 1:
        raise ContractError("eps must lie in (0, 1)")
    if eps * (N + 1) < 2 * math.pi * (1 - 1e-15):
        raise ContractError("need eps (N + 1) >= 2 pi")
    return _flat_interpolant(g, N)


def _flat_interpolant(g: Callable, N: int) -> Network:
    # no accuracy contract here: the layout is the same for every N >= 1
    M = 2 * N + 2
    h = 4 * math.pi / M
    xi = np.arange(M + 1) * h - 2 * math.pi
    gv = np.array([float(g(x)) for x in xi])
    up = np.append(np.diff(gv), 0.0) / h
    down = np.insert(np.diff(gv), 0, 0.0) / h
    alpha = up - down
    g0 = float(g(0.0))
    g1 = Network([
        (np.full((M + 1, 1), 0.25), -xi / 4),
        (alpha.reshape(1, -1), np.array([g0 / 4])),
    ])
    g2 = signed_scaling_net(4.0, 2)
    I1 = identity_net(1)
    return compose_chain(compose(g2, I1), g1, I1)


def scaled_periodic_net(g: Callable, R: float, gamma: float, beta: float, eps: float) -> Network:
    """Approximates x -> g(gamma beta x) on [-R, R]."""
    if not R > 0:
        raise ContractError("R must be positive")
    if not 0 < gamma <= 1 or beta < 1:
        raise ContractError("need gamma in (0, 1] and beta >= 1")
    if not 0 < eps < 1:
        raise ContractError("eps must lie in (0, 1)")
    R = max(R, 2.0)
    n = ceil_log2(beta * R)
    N = math.ceil(2 * math.pi / eps) - 1
    gb = gamma * beta
    g1 = signed_scaling_net(gb, max(0, ceil_log2(gb)))
    g2 = periodic_lipschitz_net(g, n, N, 6.0, eps)
    return compose_chain(g2, identity_net(1), g1)


def _phase_sin(phi):
    return lambda x: math.sin(x + phi)


def _check_sin(spec: TargetSpec, eps: float, family: str):
    if spec.family != family:
        raise ContractError(f"expected a {family} target")
    if not 0 < eps < spec.kappa:
        raise ContractError("need 0 < eps < kappa")


def _kappa_stage(kappa: float, net: Network, min_L: int) -> Network:
    L = max(min_L, ceil_log2(kappa))
    return compose_chain(signed_scaling_net(kappa, L), identity_net(1), net)


def sin_of_product_net(spec: TargetSpec, eps: float) -> Network:
    """kappa sin(gamma beta^d prod x_i + phi) on [a, b]^d, all parameters of size <= 1."""
    _check_sin(spec, eps, "sin_product")
    d, gamma, beta = spec.d, spec.gamma, spec.beta
    e = eps / spec.kappa
    g = _phase_sin(spec.phi)
    R = max(2.0, abs(spec.a), abs(spec.b))
    if d == 1:
        inner = scaled_periodic_net(g, R, gamma, beta, e)
    else:
        n = math.ceil(d * math.log2(beta * R)) - 1
        N = math.ceil(4 * math.pi / e) - 1
        g1 = dprod_net(d, e / 2, R, gamma, beta)
        g2 = periodic_lipschitz_net(g, n, N, 6.0, e / 2)
        inner = compose_chain(g2, identity_net(1), g1)
    return quarter_size(_kappa_stage(spec.kappa, inner, 1))


def sin_of_sum_net(spec: TargetSpec, eps: float) -> Network:
    """kappa sin(gamma 2^d sum x_i + phi) on [a, b]^d, all parameters of size <= 1."""
    _check_sin(spec, eps, "sin_sum")
    d, gamma = spec.d, spec.gamma
    e = eps / spec.kappa
    g = _phase_sin(spec.phi)
    R = max(2.0, abs(spec.a), abs(spec.b))
    if d == 1:
        bp = max(1.0, 2 * gamma)
        inner = scaled_periodic_net(g, R, 2 * gamma / bp, bp, e)
    else:
        n = 2 * d * ceil_log2(max(1.0, gamma) * R)
        N = math.ceil(2 * math.pi / e) - 1
        g1 = affine_net(np.ones((1, d)))
        g2 = signed_scaling_net(gamma * 2.0 ** d, d + max(0, ceil_log2(max(1.0, gamma))))
        g3 = periodic_lipschitz_net(g, n, N, 6.0, e)
        inner = compose_chain(g3, identity_net(1), compose(g2, g1))
    return halve_size(_kappa_stage(spec.kappa, inner, 1))


# --------------------------------------------------------------------------
# bound reports

@dataclass
class Bound:
    name: str
    measured: float
    claimed: float
    anchor: str
    relation: str = "<="

    @property
    def passed(self) -> bool:
        if self.relation == "==":
            return self.measured == self.claimed
        return self.measured <= self.claimed + SLACK


@dataclass
class BoundReport:
    construction: str
    params: dict
    claimed_param_bound: Optional[float] = None
    claimed_length_bound: Optional[float] = None
    claimed_size_bound: Optional[float] = None
    claimed_error_bound: Optional[float] = None
    measured_param: int = 0
    measured_length: int = 0
    measured_size: float = 0.0
    measured_error: Optional[float] = None
    anchors: dict = field(default_factory=dict)
    extra: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def bounds(self) -> list:
        out = []
        for key, measured in (("param", self.measured_param), ("length", self.measured_length),
                              ("size", self.measured_size), ("error", self.measured_error)):
            claimed = getattr(self, f"claimed_{key}_bound")
            if claimed is None or measured is None:
                continue
            rel = "==" if self.anchors.get(key, "").lstrip().startswith("=") else "<="
            out.append(Bound(key, measured, claimed, self.anchors.get(key, ""), rel))
        return out + list(self.extra)

    @property
    def flags(self) -> dict:
        return {b.name: b.passed for b in self.bounds()}

    @property
    def passed(self) -> bool:
        return all(self.flags.values())

    def failing(self) -> list:
        return [name for name, ok in self.flags.items() if not ok]


def _lg(x):
    return math.log2(x)


def _claims(kind: str, p: dict, net: Network) -> dict:
    """Closed-form claims as {key: (value, anchor)} plus extra structural checks."""
    m = metrics(net)
    dims = m.dims
    c, extra = {}, []
    if kind == "scaling":
        beta, w, n = p["beta"], p["w"], p["n"]
        c["param"] = ((4 * n - 4) * w * w + (2 * n + 4) * w + 1, "= (4n-4)w^2 + (2n+4)w + 1")
        c["size"] = (max(1.0, beta), "= max(1, beta)")
        c["length"] = (n + 1, "= n + 1")
    elif kind == "signed_scaling":
        L = p["L"]
        c["param"] = (6 * max(L, 1) + 1, "P <= 6 max(L, 1) + 1")
        c["size"] = (2.0, "S <= 2")
        c["length"] = (L + 1, "= L + 1")
    elif kind == "sawtooth":
        B, n = p["B"], p["n"]
        c["length"] = (n + 2, "= n + 2")
        c["size"] = (max(2.0 / B, 2.0), "S <= max(2/B, 2)")
    elif kind == "square_base":
        N = p["N"]
        c["length"] = (N + 1, "= N + 1")
        c["size"] = (4.0, "S <= 4")
        c["error"] = (4.0 ** (-N - 1), "sup_[0,1] |x^2 - f| <= 4^(-N-1)")
        extra.append(Bound("dims", float(dims == (1,) + (4,) * N + (1,)), 1.0,
                           "dims = (1, 4, ..., 4, 1)", "=="))
    elif kind == "square":
        N, R = p["N"], p["R"]
        c["length"] = (N + ceil_log2(R) + 4, "= N + ceil(log2 R) + 4")
        c["size"] = (4.0, "S <= 4")
        c["error"] = (R * R * 4.0 ** (-N - 1), "sup_[-R,R] |x^2 - f| <= R^2 4^(-N-1)")
    elif kind == "product2":
        N, R = p["N"], p["R"]
        c["length"] = (N + ceil_log2(R) + 7, "= N + ceil(log2 R) + 7")
        c["size"] = (4.0, "S <= 4")
        c["error"] = (3 * R * R * 2.0 ** (-2 * N - 1), "sup |xy - f| <= 3 R^2 2^(-2N-1)")
    elif kind == "pairwise":
        d, N, R = p["d"], p["N"], p["R"]
        r = ceil_log2(R)
        c["param"] = (234 * d * d + 49 * d + N * (144 * d * d + 12 * d) + r * (36 * d * d + 6 * d),
                      "P <= 234d^2 + 49d + N(144d^2 + 12d) + ceil(log2 R)(36d^2 + 6d)")
        c["length"] = (N + r + 7, "= N + ceil(log2 R) + 7")
        c["size"] = (4.0, "S <= 4")
        c["error"] = (3 * R * R * math.sqrt(d) * 2.0 ** (-2 * N - 1),
                      "euclidean error <= 3 R^2 sqrt(d) 2^(-2N-1)")
    elif kind == "tree":
        d, eps, R = p["d"], p["eps"], p["R"]
        r = ceil_log2(R)
        c["param"] = (2.0 ** (3 * d + 10) + 2.0 ** (3 * d + 8) * r - 2.0 ** (2 * d + 7) * _lg(eps),
                      "P <= 2^(3d+10) + 2^(3d+8) ceil(log2 R) - 2^(2d+7) log2(eps)")
        c["length"] = (d * 2.0 ** (d + 2) + d * 2.0 ** d * r - d * _lg(eps) / 2,
                       "L <= d 2^(d+2) + d 2^d ceil(log2 R) - d log2(eps) / 2")
        c["size"] = (4.0, "S <= 4")
        c["error"] = (eps, "sup error <= eps")
        extra.append(Bound("first_hidden_width", dims[1], 3 * 2 ** d, "l_1 = 3 2^d", "=="))
        extra.append(Bound("last_hidden_width", dims[-2], 6, "l_H = 6", "=="))
    elif kind == "dprod":
        d, eps, R, beta = p["d"], p["eps"], p["R"], p["beta"]
        r = ceil_log2(R)
        rb = ceil_log2(beta)
        c["param"] = (8203 * d ** 3 + 2048 * d ** 3 * r - 512 * d * d * _lg(eps) + 514 * d ** 3 * _lg(beta),
                      "P <= 8203 d^3 + 2048 d^3 ceil(log2 R) - 512 d^2 log2(eps) + 514 d^3 log2(beta)")
        c["length"] = (8 * d * d + 2 * d * d * r + d * _lg(1 / eps) + d * d * rb + 2,
                       "L <= 8d^2 + 2d^2 ceil(log2 R) + d log2(1/eps) + d^2 ceil(log2 beta) + 2")
        c["size"] = (4.0, "S <= 4")
        c["error"] = (eps, "sup error <= eps")
        if d > 1:
            extra.append(Bound("last_hidden_width", dims[-2], 2, "l_H = 2", "=="))
    elif kind == "downsized":
        d, eps, a, b, beta = p["d"], p["eps"], p["a"], p["b"], p["beta"]
        M = downsized_product_M(d, eps, a, b, beta)
        c["param"] = (12143 * d ** 3 * M, "P <= 12143 d^3 M")
        c["length"] = (59 * d * d * M, "L <= 59 d^2 M")
        c["size"] = (1.0, "S <= 1")
        c["error"] = (eps, "sup error <= eps")
    elif kind in ("halve", "quarter"):
        src = p["source"]
        ms = metrics(src)
        L, P, S, lH = ms.length, ms.param_count, ms.size_norm, ms.dims[-2]
        if kind == "halve":
            c["length"] = (2 * L + 1, "= 2L + 1")
            c["param"] = (P + lH + 20 * L, "P <= P_f + l_H(f) + 20 L")
            c["size"] = (max(1.0, S / 2), "S <= max(1, S_f / 2)")
        else:
            c["length"] = (4 * L + 3, "= 4L + 3")
            c["param"] = (P + lH + 60 * L + 24, "P <= P_f + l_H(f) + 60 L + 24")
            c["size"] = (max(1.0, S / 4), "S <= max(1, S_f / 4)")
    elif kind == "extend":
        src, L = p["source"], p["L"]
        c["length"] = (L, "= L")
        c["size"] = (max(1.0, metrics(src).size_norm), "= max(1, S_f)")
        extra.append(Bound("out_size", m.out_size, 1.0, "out size = 1", "=="))
    elif kind == "periodic":
        n, N, eps = p["n"], p["N"], p["eps"]
        C = max(p["C"], p.get("C_eff", p["C"]))
        c["length"] = (n + _lg(C) + 9, "L <= n + log2(C) + 9")
        c["param"] = ((24 + 18 * n + 5 * _lg(C)) * N * N, "P <= (24 + 18n + 5 log2 C) N^2")
        c["size"] = (2.0, "S <= 2")
        c["error"] = (eps, "sup_[-2^n pi, 2^n pi] error <= eps")
        extra.append(Bound("first_width", dims[1], 2 * N, "l_1 <= 2N"))
        extra.append(Bound("last_hidden_width", dims[-2], 2, "l_H = 2", "=="))
    elif kind == "flat_periodic":
        N, eps = p["N"], p["eps"]
        c["length"] = (6, "= 6")
        c["param"] = (4 * N * N, "P <= 4 N^2")
        c["size"] = (2.0, "S <= 2")
        c["error"] = (eps, "sup_[-2pi, 2pi] error <= eps")
        extra.append(Bound("dims", float(dims == (1, 2, 2 * N + 3, 2, 2, 2, 1)), 1.0,
                           "dims = (1, 2, 2N+3, 2, 2, 2, 1)", "=="))
    elif kind == "scaled_periodic":
        R, beta, eps = p["R"], p["beta"], p["eps"]
        mx = max(1, ceil_log2(beta), ceil_log2(R))
        c["length"] = (16 * mx, "L <= 16 max(1, ceil(log2 beta), ceil(log2 R))")
        c["param"] = (4584 * mx * eps ** -2, "P <= 4584 max(1, ceil(log2 R), ceil(log2 beta)) eps^-2")
        c["size"] = (2.0, "S <= 2")
        c["error"] = (eps, "sup_[-R,R] |g(gamma beta x) - f| <= eps")
        extra.append(Bound("last_hidden_width", dims[-2], 2, "l_H = 2", "=="))
    elif kind == "sin_product":
        s, eps = p["spec"], p["eps"]
        cc = sin_product_constant(s)
        c["length"] = (cc * s.d ** 2 / eps, "L <= c d^2 / eps, c = 13968 ceil(log2 max(2,|a|,|b|,beta)) max(1,kappa^3)")
        c["param"] = (cc * s.d ** 3 / eps ** 2, "P <= c d^3 / eps^2, c = 13968 ceil(log2 max(2,|a|,|b|,beta)) max(1,kappa^3)")
        c["size"] = (1.0, "S <= 1")
        c["error"] = (eps, "sup_[a,b]^d error <= eps")
    elif kind == "sin_sum":
        s, eps = p["spec"], p["eps"]
        cc = sin_sum_constant(s)
        c["length"] = (cc * s.d, "L <= c d, c = 4634 max(kappa^3,1) ceil(log2(max(1,gamma) max(2,|a|,|b|)))")
        c["param"] = (cc * s.d ** 2 / eps ** 2, "P <= c d^2 / eps^2, c = 4634 max(kappa^3,1) ceil(log2(max(1,gamma) max(2,|a|,|b|)))")
        c["size"] = (1.0, "S <= 1")
        c["error"] = (eps, "sup_[a,b]^d error <= eps")
    elif kind == "identity":
        d = p["d"]
        c["param"] = (4 * d * d + 3 * d, "= 4d^2 + 3d")
        c["size"] = (1.0, "= 1")
        c["length"] = (2, "= 2")
    else:
        raise ValueError(f"no claims known for {kind!r}")
    return c, extra


def sin_product_constant(s: TargetSpec) -> float:
    return 13968 * ceil_log2(max(2.0, abs(s.a), abs(s.b), s.beta)) * max(1.0, s.kappa ** 3)


def sin_sum_constant(s: TargetSpec) -> float:
    return 4634 * max(s.kappa ** 3, 1.0) * ceil_log2(max(1.0, s.gamma) * max(2.0, abs(s.a), abs(s.b)))


def report(kind: str, net: Network, **params) -> BoundReport:
    """Compare the metrics of ``net`` with the closed-form claims for ``kind``."""
    claims, extra = _claims(kind, params, net)
    m = metrics(net)
    shown = {k: v for k, v in params.items() if k != "source"}
    rep = BoundReport(construction=kind, params=shown, measured_param=m.param_count,
                      measured_length=m.length, measured_size=m.size_norm, extra=extra)
    for key, (value, anchor) in claims.items():
        setattr(rep, f"claimed_{key}_bound", float(value))
        rep.anchors[key] = anchor
    if kind == "pairwise":
        rep.notes.append("parameter claim is treated as an upper bound; the direct count can be smaller")
    if kind == "periodic":
        Ce = params.get("C_eff")
        if Ce is not None and Ce > params["C"]:
            rep.notes.append(f"hat heights exceed C; effective C = {Ce!r}")
    return rep


# name -> (builder, report kind, parameter adapter)
def build(kind: str, **params):
    """Build a construction by name and return ``(net, report)``."""
    if kind == "scaling":
        net = scaling_net(params["beta"], params["w"], params["n"])
    elif kind == "signed_scaling":
        net = signed_scaling_net(params["beta"], params["L"])
    elif kind == "sawtooth":
        net = sawtooth_net(params["B"], params["n"])
    elif kind == "square_base":
        net = square_net_base(params["N"])
    elif kind == "square":
        net = square_net(params["N"], params["R"])
    elif kind == "product2":
        net = product2_net(params["N"], params["R"])
    elif kind == "pairwise":
        net = pairwise_product_net(params["d"], params["N"], params["R"])
    elif kind == "tree":
        net = tree_product_net(params["d"], params["eps"], params["R"])
    elif kind == "dprod":
        params.setdefault("gamma", 1.0)
        params.setdefault("beta", 1.0)
        net = dprod_net(params["d"], params["eps"], params["R"], params["gamma"], params["beta"])
    elif kind == "downsized":
        params.setdefault("gamma", 1.0)
        params.setdefault("beta", 1.0)
        net = downsized_product_net(params["d"], params["eps"], params["a"], params["b"],
                                    params["gamma"], params["beta"])
    elif kind == "periodic":
        net = periodic_lipschitz_net(params["g"], params["n"], params["N"], params["C"], params["eps"])
        params["C_eff"] = periodic_effective_C(params["g"], params["N"], params["C"])
    elif kind == "flat_periodic":
        net = flat_periodic_net(params["g"], params["N"], params["eps"])
    elif kind == "scaled_periodic":
        net = scaled_periodic_net(params["g"], params["R"], params["gamma"], params["beta"], params["eps"])
    elif kind == "sin_product":
        net = sin_of_product_net(params["spec"], params["eps"])
    elif kind == "sin_sum":
        net = sin_of_sum_net(params["spec"], params["eps"])
    elif kind == "identity":
        net = identity_net(params["d"])
    else:
        raise ValueError(f"unknown construction {kind!r}")
    shown = {k: v for k, v in params.items() if not callable(v)}
    return net, report(kind, net, **shown)
