"""Exact piece tracing along segments, lower-bound formulas, oscillation
witnesses, shallow-incapacity certificates, reference targets and sampled
error measurement."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.stats import qmc

from .constructors import ContractError, TargetSpec
from .network import Network, NetworkError, metrics, realize

BREAK_TOL = 1e-12
COEF_TOL = 1e-10
KINK_TOL = 1e-7


# --------------------------------------------------------------------------
# exact tracing

@dataclass
class PwlTrace:
    p: np.ndarray
    q: np.ndarray
    breakpoints: np.ndarray   # t_0 = 0 < ... < t_m = 1
    slopes: np.ndarray
    intercepts: np.ndarray

    def __len__(self):
        return len(self.slopes)

    def __call__(self, t):
        t = np.asarray(t, dtype=np.float64)
        i = np.clip(np.searchsorted(self.breakpoints, t, side="right") - 1, 0, len(self.slopes) - 1)
        return self.slopes[i] * t + self.intercepts[i]

    def point(self, t):
        return self.p + np.multiply.outer(t, self.q - self.p)


class _TooManyPieces(Exception):
    pass


def _close(a, b, tol):
    return np.all(np.abs(a - b) <= tol * np.maximum(1.0, np.maximum(np.abs(a), np.abs(b))), axis=1)


def _coalesce(T, A, B, tol=None):
    if len(A) < 2:
        return T, A, B
    if tol is None:
        same = np.all(A[1:] == A[:-1], axis=1) & np.all(B[1:] == B[:-1], axis=1)
    else:
        same = _close(A[1:], A[:-1], tol) & _close(B[1:], B[:-1], tol)
    if not same.any():
        return T, A, B
    keep = np.concatenate([[True], ~same])
    Tk = np.concatenate([T[:-1][keep], T[-1:]])
    return Tk, A[keep], B[keep]


def _propagate(net: Network, p, q, t0, t1, budget):
    T = np.array([t0, t1])
    A = (q - p)[None, :]
    B = p[None, :]
    last = net.length - 1
    for k, (W, b) in enumerate(net.layers):
        A = A @ W.T
        B = B @ W.T + b
        if k == last:
            break
        with np.errstate(divide="ignore", invalid="ignore"):
            tc = -B / A
        lo = T[:-1, None]
        hi = T[1:, None]
        inside = (A != 0) & (tc > lo + BREAK_TOL) & (tc < hi - BREAK_TOL)
        if inside.any():
            newT = np.unique(np.concatenate([T, tc[inside]]))
            keep = np.concatenate([[True], np.diff(newT) > BREAK_TOL])
            newT = newT[keep]
            newT[-1] = T[-1]
            mid = 0.5 * (newT[:-1] + newT[1:])
            parent = np.clip(np.searchsorted(T, mid, side="right") - 1, 0, len(T) - 2)
            A = A[parent]
            B = B[parent]
            T = newT
        if (len(T) - 1) * A.shape[1] > budget and t1 - t0 > 1e-6:
            raise _TooManyPieces
        mid = 0.5 * (T[:-1] + T[1:])
        on = (A * mid[:, None] + B) > 0
        A = np.where(on, A, 0.0)
        B = np.where(on, B, 0.0)
        T, A, B = _coalesce(T, A, B)
    return T, A[:, 0], B[:, 0]


def exact_line_trace(net: Network, p, q, budget: int = 4_000_000) -> PwlTrace:
    """Exact affine pieces of t -> net(p + t (q - p)) on [0, 1] for a scalar-output net."""
    p = np.asarray(p, dtype=np.float64).reshape(-1)
    q = np.asarray(q, dtype=np.float64).reshape(-1)
    if net.out_dim != 1:
        raise NetworkError("tracing needs a scalar-output network")
    if p.shape[0] != net.in_dim or q.shape[0] != net.in_dim:
        raise NetworkError(f"segment endpoints must have length {net.in_dim}")
    if np.array_equal(p, q):
        raise NetworkError("segment has zero length")
    Ts, As, Bs = [], [], []
    stack = [(0.0, 1.0)]
    while stack:
        t0, t1 = stack.pop()
        try:
            T, A, B = _propagate(net, p, q, t0, t1, budget)
        except _TooManyPieces:
            m = 0.5 * (t0 + t1)
            stack.append((m, t1))
            stack.append((t0, m))
            continue
        Ts.append(T[:-1])
        As.append(A)
        Bs.append(B)
    T = np.concatenate(Ts + [np.array([1.0])])
    A = np.concatenate(As)[:, None]
    B = np.concatenate(Bs)[:, None]
    T, A, B = _coalesce(T, A, B, COEF_TOL)
    return PwlTrace(p, q, T, A[:, 0].copy(), B[:, 0].copy())


def count_pieces(trace: PwlTrace) -> int:
    return len(trace.slopes)


def sampled_kinks(values, rel_tol: float = KINK_TOL) -> int:
    """Kinks seen by second differences on a uniform grid; adjacent flags count once."""
    f = np.asarray(values, dtype=np.float64)
    if f.size < 3:
        return 0
    dd = np.abs(f[:-2] - 2 * f[1:-1] + f[2:])
    flag = dd > rel_tol * np.maximum(1.0, np.abs(f[1:-1]))
    if not flag.any():
        return 0
    starts = flag & ~np.concatenate([[False], flag[:-1]])
    return int(starts.sum())


def sampled_pieces(net: Network, p, q, samples: int = 100_000) -> int:
    t = np.linspace(0.0, 1.0, samples)
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    vals = realize(net, p + np.outer(t, q - p))[:, 0]
    return sampled_kinks(vals) + 1


# --------------------------------------------------------------------------
# lower-bound formulas

def piece_bound(P: int, H: int) -> float:
    e = max(1, H)
    return (P / e) ** e


def product_lower_bound(d: int, L: int, eps: float) -> float:
    if d < 1 or L < 1:
        raise ContractError("d and L must be positive")
    if not 0 < eps < 2 ** d:
        raise ContractError("eps must lie in (0, 2^d)")
    return ((2 ** d - eps) / (2 * d)) ** (1.0 / L)


def shallow_param_requirement(d: int, H: int) -> float:
    """Parameters any H-hidden-layer net needs to reach 2^d pieces along a line."""
    return H * 2.0 ** (d / H)


@dataclass
class GrowthResult:
    passed: bool
    measured: float
    bound: float


def growth_bound(net: Network, a: float, b: float) -> float:
    m = metrics(net)
    log_b = (math.log(net.in_dim) + m.length * math.log(m.param_count * max(m.size_norm, 1.0))
             + math.log(max(abs(a), abs(b), 1.0)))
    return math.exp(log_b) if log_b < 700 else math.inf


def growth_bound_check(net: Network, a: float, b: float, samples: int = 10_000, seed: int = 0) -> GrowthResult:
    X = box_samples(net.in_dim, a, b, samples, seed)
    Y = realize(net, X)
    measured = float(np.max(np.abs(Y))) if Y.size else 0.0
    bound = growth_bound(net, a, b)
    return GrowthResult(measured <= bound, measured, bound)


# --------------------------------------------------------------------------
# targets and bumps

def _one_sided_f(x, delta):
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = np.exp(-delta / x[pos])
    return out


def bump_one_sided(x, delta: float):
    """Smooth step: 0 for x <= 0, 1 for x >= delta."""
    f = _one_sided_f(x, delta)
    return f / (f + _one_sided_f(delta - np.asarray(x, dtype=np.float64), delta))


def bump_two_sided(x, a: float, b: float, delta: float):
    """Smooth bump: 1 on [a, b], 0 outside (a - delta, b + delta)."""
    x = np.asarray(x, dtype=np.float64)
    return np.where(x < a, bump_one_sided(x - a + delta, delta), bump_one_sided(b - x + delta, delta))


def bump_d(X, a: float, b: float, delta: float):
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    return np.prod(bump_two_sided(X, a, b, delta), axis=1)


@dataclass
class TargetFunction:
    """Reference target: a family from :class:`TargetSpec` or a named helper.

    ``kind`` is ``"spec"`` (use ``spec``), ``"identity"`` (first coordinate),
    ``"square"`` (first coordinate squared) or ``"callable"`` (``fn`` maps an
    ``(n, d)`` batch to ``n`` values).  With ``delta`` set, the value is
    multiplied by a smooth bump equal to 1 on ``[a, b]^d``.
    """
    spec: Optional[TargetSpec] = None
    kind: str = "spec"
    fn: Optional[Callable] = None
    delta: Optional[float] = None

    @property
    def d(self) -> Optional[int]:
        return self.spec.d if self.spec is not None else None

    def __call__(self, X):
        return eval_target(self, X)


def _base_value(t: TargetFunction, X):
    if t.kind == "identity":
        return X[:, 0]
    if t.kind == "square":
        return X[:, 0] ** 2
    if t.kind == "callable":
        return np.asarray(t.fn(X), dtype=np.float64).reshape(-1)
    s = t.spec
    if s is None:
        raise ContractError("spec target without a TargetSpec")
    if s.family == "product":
        return s.gamma * s.beta ** s.d * np.prod(X, axis=1)
    if s.family == "sin_product":
        return s.kappa * np.sin(s.gamma * s.beta ** s.d * np.prod(X, axis=1) + s.phi)
    if s.family == "sin_sum":
        return s.kappa * np.sin(s.gamma * 2.0 ** s.d * np.sum(X, axis=1) + s.phi)
    # periodic_generic: one-dimensional scaled sine in the first coordinate
    return s.kappa * np.sin(s.gamma * s.beta * X[:, 0] + s.phi)


def eval_target(target: TargetFunction, x):
    X = np.asarray(x, dtype=np.float64)
    single = X.ndim <= 1
    X = np.atleast_2d(X) if not single else X.reshape(1, -1)
    if target.spec is not None and target.kind == "spec" and X.shape[1] != target.spec.d:
        raise NetworkError(f"target expects {target.spec.d} coordinates, got {X.shape[1]}")
    v = _base_value(target, X)
    if target.delta is not None:
        s = target.spec
        v = v * bump_d(X, s.a, s.b, target.delta)
    return float(v[0]) if single else v


# --------------------------------------------------------------------------
# sampled error measurement

def _threads() -> int:
    try:
        n = int(os.environ.get("RELU_CALC_THREADS", "0"))
    except ValueError:
        n = 0
    return n if n > 0 else (os.cpu_count() or 1)


def box_samples(d: int, a: float, b: float, samples: int, seed: int = 0) -> np.ndarray:
    """Deterministic Halton points in [a, b]^d; ``seed`` skips ahead in the sequence."""
    if samples <= 0:
        return np.empty((0, d))
    h = qmc.Halton(d, scramble=False)
    h.fast_forward(seed + 1)  # the first Halton point is the origin corner
    return a + (b - a) * h.random(samples)


def box_corners(d: int, a: float, b: float, seed: int = 0, cap_dim: int = 12, subsample: int = 4096) -> np.ndarray:
    if d <= cap_dim:
        bits = (np.arange(2 ** d)[:, None] >> np.arange(d)) & 1
    else:
        bits = np.random.default_rng(seed).integers(0, 2, size=(subsample, d))
    return np.where(bits == 1, b, a).astype(np.float64)


def _abs_err(net, target, X):
    if X.shape[0] == 0:
        return np.empty(0)
    y = realize(net, X)
    y = y[:, 0] if y.ndim == 2 else y
    return np.abs(y - eval_target(target, X))


def max_error_on_points(net: Network, target: TargetFunction, X, chunk: int = 50_000) -> float:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != net.in_dim:
        raise NetworkError(f"points must have shape (n, {net.in_dim})")
    parts = [X[i:i + chunk] for i in range(0, X.shape[0], chunk)]
    workers = min(_threads(), max(1, len(parts)))
    if workers == 1:
        errs = [np.max(_abs_err(net, target, P), initial=0.0) for P in parts]
    else:
        with ThreadPoolExecutor(workers) as ex:
            errs = list(ex.map(lambda P: np.max(_abs_err(net, target, P), initial=0.0), parts))
    return float(max(errs, default=0.0))


def max_error_on_box(net: Network, target: TargetFunction, a: float, b: float,
                     samples: int, seed: int = 0, corners: bool = True) -> float:
    """Max |net - target| over Halton samples in [a, b]^d plus the box corners."""
    d = net.in_dim
    X = box_samples(d, a, b, samples, seed)
    err = max_error_on_points(net, target, X)
    if corners:
        err = max(err, max_error_on_points(net, target, box_corners(d, a, b, seed)))
    return err


def max_error_on_grid(net: Network, target: TargetFunction, a: float, b: float, points_per_axis: int) -> float:
    d = net.in_dim
    axis = np.linspace(a, b, points_per_axis)
    grids = np.meshgrid(*([axis] * d), indexing="ij")
    X = np.stack([g.ravel() for g in grids], axis=1)
    return max_error_on_points(net, target, X)


# --------------------------------------------------------------------------
# oscillation witnesses and certificates

@dataclass
class WitnessSequence:
    d: int
    points: np.ndarray
    values: np.ndarray
    step: np.ndarray
    kappa: float
    spec: TargetSpec

    @property
    def S(self) -> int:
        return len(self.points)


def witness_count(d: int) -> int:
    if d == 1:
        return 1
    if d == 2:
        return 3
    return 2 ** (d + 1) + 1


def _phase_start(K: float, phi: float, lo: float, nu: float) -> float:
    """Smallest alpha >= lo with K alpha + phi = pi/2 + m pi for an integer m."""
    m = math.ceil((K * lo + phi - math.pi / 2) / math.pi) if K > 0 else \
        math.floor((K * lo + phi - math.pi / 2) / math.pi)
    alpha = (math.pi / 2 - phi + m * math.pi) / K
    # rounding guard: keep alpha in [lo, lo + nu)
    while alpha < lo:
        m += 1 if K > 0 else -1
        alpha = (math.pi / 2 - phi + m * math.pi) / K
    while alpha - nu >= lo:
        m -= 1 if K > 0 else -1
        alpha = (math.pi / 2 - phi + m * math.pi) / K
    return alpha


def oscillation_witnesses_product(spec: TargetSpec) -> WitnessSequence:
    if spec.family != "sin_product":
        raise ContractError("need a sin_product target")
    d, a, b, g, be = spec.d, spec.a, spec.b, spec.gamma, spec.beta
    if b - a < 2 * math.pi / (g * be):
        raise ContractError("need b - a >= 2 pi / (gamma beta)")
    c = a if be * abs(a) >= 3 else 3.0 / be
    K = g * be ** d * c ** (d - 1)
    nu = math.pi / abs(K)
    alpha = _phase_start(K, spec.phi, a, nu)
    S = witness_count(d)
    pts = np.full((S, d), c, dtype=np.float64)
    pts[:, 0] = alpha + np.arange(S) * nu
    step = np.zeros(d)
    step[0] = nu
    return _finish_witnesses(spec, pts, step)


def oscillation_witnesses_sum(spec: TargetSpec) -> WitnessSequence:
    if spec.family != "sin_sum":
        raise ContractError("need a sin_sum target")
    d, a, b, g = spec.d, spec.a, spec.b, spec.gamma
    if b - a < math.pi / g:
        raise ContractError("need b - a >= pi / gamma")
    K = g * 2.0 ** d * d
    nu = math.pi / K
    alpha = _phase_start(K, spec.phi, a, nu)
    S = witness_count(d)
    pts = np.repeat((alpha + np.arange(S) * nu)[:, None], d, axis=1)
    return _finish_witnesses(spec, pts, np.full(d, nu))


def _finish_witnesses(spec, pts, step):
    if np.any(pts < spec.a) or np.any(pts > spec.b):
        raise ContractError("witness points left the box")
    vals = eval_target(TargetFunction(spec), pts)
    return WitnessSequence(spec.d, pts, vals, step, spec.kappa, spec)


@dataclass
class Certificate:
    pieces: int
    needed: int
    certified: bool
    violating_point: Optional[np.ndarray] = None
    error_at_point: Optional[float] = None
    method: str = ""
    notes: list = field(default_factory=list)


def shallow_incapacity_certificate(net: Network, witnesses: WitnessSequence, eps: float) -> Certificate:
    """Certify that ``net`` misses the witness target by more than ``eps`` somewhere.

    Fewer than 2^d affine pieces along the witness line force some witness
    triple into a single piece, and an affine function cannot follow the
    alternation +k, -k, +k there to within eps < k.
    """
    d = witnesses.d
    if d < 3:
        raise ContractError("certificates are supported for d >= 3")
    if not 0 < eps < witnesses.kappa:
        raise ContractError("need 0 < eps < kappa")
    if net.out_dim != 1 or net.in_dim != d:
        raise NetworkError("network shape does not match the witnesses")
    V = witnesses.points
    tr = exact_line_trace(net, V[0], V[-1])
    pieces = count_pieces(tr)
    needed = 2 ** d
    cert = Certificate(pieces, needed, False)
    if pieces >= needed:
        cert.notes.append("enough pieces along the witness line; nothing certified")
        return cert
    target = TargetFunction(witnesses.spec)
    S = len(V)
    tw = np.arange(S) / (S - 1)
    inner = tr.breakpoints[1:-1]
    for k in range(1, S - 1):
        lo, hi = tw[k - 1], tw[k + 1]
        if np.any((inner > lo) & (inner < hi)):
            continue
        trip = V[k - 1:k + 2]
        err = np.abs(realize(net, trip)[:, 0] - eval_target(target, trip))
        j = int(np.argmax(err))
        if err[j] > eps:
            cert.certified = True
            cert.violating_point = trip[j].copy()
            cert.error_at_point = float(err[j])
            cert.method = f"witness triple {k}..{k + 2}"
            return cert
    # fallback: witnesses and midpoints between consecutive breakpoints
    mids = 0.5 * (tr.breakpoints[:-1] + tr.breakpoints[1:])
    cand = np.concatenate([V, tr.point(mids)])
    err = np.abs(realize(net, cand)[:, 0] - eval_target(target, cand))
    j = int(np.argmax(err))
    if err[j] > eps:
        cert.certified = True
        cert.violating_point = cand[j].copy()
        cert.error_at_point = float(err[j])
        cert.method = "fallback scan"
    else:
        cert.notes.append("no violating point found")
    return cert


def lipschitz_chain_bound(lipschitz, errors) -> float:
    """Error bound for a chain of stages: sum_i (prod_{j>i} L_j) eps_i."""
    total = 0.0
    n = len(errors)
    for i in range(n):
        total += float(np.prod(lipschitz[i + 1:])) * errors[i]
    return total
