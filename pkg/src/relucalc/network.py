"""Fully connected ReLU networks and the calculus on them.

A network is an ordered tuple of affine layers ``(W, b)``.  The realization
applies ``max(., 0)`` after every layer except the last one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import block_diag


class NetworkError(ValueError):
    """Raised for malformed networks or incompatible calculus operations."""


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=np.float64, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Network:
    layers: tuple

    def __init__(self, layers):
        if len(layers) < 1:
            raise NetworkError("a network needs at least one layer")
        fixed = []
        for k, (W, b) in enumerate(layers):
            W = _frozen(W)
            b = _frozen(b).reshape(-1)
            if W.ndim != 2:
                raise NetworkError(f"layer {k + 1}: weights must be a matrix")
            if W.shape[0] < 1 or W.shape[1] < 1:
                raise NetworkError(f"layer {k + 1}: empty dimension {W.shape}")
            if b.shape[0] != W.shape[0]:
                raise NetworkError(
                    f"layer {k + 1}: bias length {b.shape[0]} != rows {W.shape[0]}")
            if not (np.all(np.isfinite(W)) and np.all(np.isfinite(b))):
                raise NetworkError(f"layer {k + 1}: non-finite entry")
            if fixed and fixed[-1][0].shape[0] != W.shape[1]:
                raise NetworkError(
                    f"layer {k + 1}: expects {W.shape[1]} inputs, "
                    f"previous layer has {fixed[-1][0].shape[0]} outputs")
            fixed.append((W, b))
        object.__setattr__(self, "layers", tuple(fixed))

    @property
    def length(self) -> int:
        return len(self.layers)

    @property
    def dims(self) -> tuple:
        return (self.layers[0][0].shape[1],) + tuple(W.shape[0] for W, _ in self.layers)

    @property
    def in_dim(self) -> int:
        return self.layers[0][0].shape[1]

    @property
    def out_dim(self) -> int:
        return self.layers[-1][0].shape[0]

    def __call__(self, x):
        return realize(self, x)

    def __eq__(self, other):
        if not isinstance(other, Network) or self.length != other.length:
            return False
        return all(np.array_equal(W1, W2) and np.array_equal(b1, b2)
                   for (W1, b1), (W2, b2) in zip(self.layers, other.layers))

    def __hash__(self):
        return hash(tuple((W.tobytes(), b.tobytes()) for W, b in self.layers))

    def __repr__(self):
        return f"Network(dims={self.dims})"


@dataclass(frozen=True)
class Metrics:
    param_count: int
    length: int
    hidden_length: int
    dims: tuple
    size_norm: float
    in_size: float
    out_size: float
    ent: float


def _layer_size(layer) -> float:
    W, b = layer
    return float(max(np.max(np.abs(W)), np.max(np.abs(b))))


def param_count(net: Network) -> int:
    dims = net.dims
    return int(sum(dims[k] * (dims[k - 1] + 1) for k in range(1, len(dims))))


def size_norm(net: Network) -> float:
    return max(_layer_size(layer) for layer in net.layers)


def boundary_size(net: Network, r: int) -> float:
    """Size of layer ``r*H + 1`` (1-based): the first layer for r=0, the last for r=1."""
    if r not in (0, 1):
        raise ValueError("r must be 0 or 1")
    H = net.length - 1
    return _layer_size(net.layers[r * H])


def ent(net: Network) -> float:
    S = size_norm(net)
    log_s = math.log(S) if S > 0 else 0.0
    return max(1.0, log_s) * param_count(net)


def metrics(net: Network) -> Metrics:
    return Metrics(
        param_count=param_count(net),
        length=net.length,
        hidden_length=net.length - 1,
        dims=net.dims,
        size_norm=size_norm(net),
        in_size=boundary_size(net, 0),
        out_size=boundary_size(net, 1),
        ent=ent(net),
    )


def _ordered_affine(W, b, X):
    # column by column accumulation; zero blocks add exact zeros, so a
    # block-diagonal layer reproduces each block bit for bit
    acc = np.zeros((X.shape[0], W.shape[0]))
    for j in range(W.shape[1]):
        acc += X[:, j:j + 1] * W[:, j]
    return acc + b


def realize(net: Network, x, ordered: bool = False, chunk: int = 65536) -> np.ndarray:
    """Evaluate the network.

    ``x`` may be a single point of length ``l_0`` or a batch of shape
    ``(n, l_0)``; the output has the matching shape.  With ``ordered=True`` the
    matrix products use a fixed summation order instead of BLAS.
    """
    X = np.asarray(x, dtype=np.float64)
    single = X.ndim <= 1
    if single:
        X = X.reshape(1, -1)
    if X.ndim != 2 or X.shape[1] != net.in_dim:
        raise NetworkError(f"input has shape {np.shape(x)}, network expects {net.in_dim} inputs")
    out = np.empty((X.shape[0], net.out_dim))
    last = net.length - 1
    for start in range(0, X.shape[0], chunk):
        Y = X[start:start + chunk]
        for k, (W, b) in enumerate(net.layers):
            Y = _ordered_affine(W, b, Y) if ordered else Y @ W.T + b
            if k < last:
                np.maximum(Y, 0.0, out=Y)
        out[start:start + chunk] = Y
    return out[0] if single else out


def affine_net(W, b=None) -> Network:
    W = np.atleast_2d(np.asarray(W, dtype=np.float64))
    if b is None:
        b = np.zeros(W.shape[0])
    return Network([(W, b)])


def compose(outer: Network, inner: Network) -> Network:
    """The network ``outer • inner``: last layer of inner fused into first of outer."""
    if outer.in_dim != inner.out_dim:
        raise NetworkError(
            f"cannot compose: outer takes {outer.in_dim} inputs, inner gives {inner.out_dim}")
    W1, b1 = outer.layers[0]
    WL, bL = inner.layers[-1]
    middle = (W1 @ WL, W1 @ bL + b1)
    return Network(list(inner.layers[:-1]) + [middle] + list(outer.layers[1:]))


def compose_chain(*nets: Network) -> Network:
    """``nets[0] • nets[1] • ... • nets[-1]``."""
    if not nets:
        raise NetworkError("nothing to compose")
    result = nets[-1]
    for net in reversed(nets[:-1]):
        result = compose(net, result)
    return result


def parallelize(nets: Sequence[Network]) -> Network:
    nets = list(nets)
    if not nets:
        raise NetworkError("parallelization needs at least one network")
    L = nets[0].length
    if any(n.length != L for n in nets):
        raise NetworkError(f"cannot parallelize lengths {[n.length for n in nets]}")
    layers = []
    for k in range(L):
        W = block_diag(*[n.layers[k][0] for n in nets])
        b = np.concatenate([n.layers[k][1] for n in nets])
        layers.append((W, b))
    return Network(layers)


_ID1 = ((np.array([[1.0], [-1.0]]), np.zeros(2)), (np.array([[1.0, -1.0]]), np.zeros(1)))


def identity_net(d: int) -> Network:
    """Width ``2d`` network with realization the identity on R^d."""
    if d < 1:
        raise NetworkError("identity dimension must be positive")
    one = Network(_ID1)
    return one if d == 1 else parallelize([one] * d)


def compose_via_identity(outer: Network, inner: Network) -> Network:
    """``outer • I_k • inner`` with ``k`` the connecting dimension."""
    return compose_chain(outer, identity_net(inner.out_dim), inner)
