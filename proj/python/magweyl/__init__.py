"""Magnetic Weyl calculus on nilpotent Lie groups."""

import json

import numpy as np

from . import _magweyl
from ._magweyl import (
    AbelianHasNoQuotient,
    Algebra,
    BadGridSpec,
    ClassTooLarge,
    ConfigError,
    Context,
    DegreeTooHigh,
    Error,
    FieldsDiffer,
    Grid,
    JacobiViolation,
    NotNilpotent,
    Potential,
    ShapeError,
    WrongClass,
    kernel_norm,
    known_suites,
    symbol_norm,
    symplectic_fourier,
)

__all__ = [
    "AbelianHasNoQuotient", "Algebra", "BadGridSpec", "ClassTooLarge", "ConfigError",
    "Context", "DegreeTooHigh", "Error", "FieldsDiffer", "Grid", "JacobiViolation",
    "NotNilpotent", "Potential", "ShapeError", "WrongClass", "kernel_from_symbol",
    "kernel_norm", "known_suites", "moyal", "run_suites", "sample_symbol",
    "symbol_from_kernel", "symbol_norm", "symplectic_fourier",
]


def _shape(grid):
    return (grid.n,) * (2 * grid.dim)


def sample_symbol(grid, fn):
    """Evaluates fn(X, xi) on the phase-space grid. X and xi are lists of
    broadcast coordinate arrays."""
    x = np.asarray(grid.nodes())
    xi = np.asarray(grid.dual_nodes())
    axes = np.meshgrid(*([x] * grid.dim + [xi] * grid.dim), indexing="ij")
    out = fn(axes[: grid.dim], axes[grid.dim:])
    return np.broadcast_to(np.asarray(out, dtype=np.complex128), _shape(grid)).copy()


def kernel_from_symbol(ctx, a):
    return ctx.kernel_from_symbol(a)


def symbol_from_kernel(ctx, k):
    return ctx.symbol_from_kernel(k)


def moyal(ctx, a, b):
    return ctx.moyal(a, b)


def run_suites(config, suites=(), base_dir="."):
    """Runs named suites for a config dict or JSON string, returns the report dict."""
    text = config if isinstance(config, str) else json.dumps(config)
    return json.loads(_magweyl.run_suites(text, list(suites), str(base_dir)))
