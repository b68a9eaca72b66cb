"""Explicit ReLU network constructions, their bound checks, and piece counting."""

from .network import (
    Metrics,
    Network,
    NetworkError,
    affine_net,
    boundary_size,
    compose,
    compose_chain,
    identity_net,
    metrics,
    parallelize,
    param_count,
    realize,
    size_norm,
)

__version__ = "0.1.0"
