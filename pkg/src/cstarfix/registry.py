"""Named built-in spaces, operators, penalty functions, and combiners.

The CLI resolves config names through these tables; library users can call
the factories directly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import algebra as alg
from .contractions import (
    FFunction,
    OperatorSpec,
    PhiFunction,
    square_first_combiner,
    sum_combiner,
)
from .spaces import Box, Domain, Interval, ValuedDistance

__all__ = [
    "NamedSpace",
    "SPACES",
    "OPERATORS",
    "PHIS",
    "COMBINERS",
    "get_space",
    "get_operator",
    "get_phi",
    "get_combiner",
]


@dataclass(frozen=True)
class NamedSpace:
    distance: ValuedDistance
    domain: Domain


def _max_unit_interval() -> NamedSpace:
    fn = lambda s, t: alg._raw("scalar", np.asarray(max(s, t), dtype=float))
    return NamedSpace(
        ValuedDistance("scalar", 1, fn, "partial", label="max_unit_interval"),
        Interval(0.0, 1.0),
    )


def _shifted_max_matrix() -> NamedSpace:
    eye = np.eye(2)
    fn = lambda s, t: alg.matrix(max(1.0 + s, 1.0 + t) * eye)
    return NamedSpace(
        ValuedDistance("matrix", 2, fn, "partial", label="shifted_max_matrix"),
        Interval(0.0, 1.0),
    )


def _absdiff_pair() -> NamedSpace:
    fn = lambda x, y: alg._raw("vector", np.array([abs(x - y), abs(x - y)]))
    return NamedSpace(
        ValuedDistance("vector", 2, fn, "partial", label="absdiff_pair"),
        Interval(0.0, 1.0),
    )


def _sum_premetric() -> NamedSpace:
    # fails the self-distance-zero metric axiom for x > 0; kept as a
    # premetric so the solver can still run on it
    fn = lambda x, y: alg._raw("vector", np.array([0.0, x + y]))
    return NamedSpace(
        ValuedDistance("vector", 2, fn, "premetric", label="sum_premetric"),
        Interval(0.0, 1.0),
    )


def _diag_absdiff_matrix() -> NamedSpace:
    def fn(a, b):
        return alg.matrix(np.diag([abs(a[0] - b[0]), abs(a[1] - b[1])]))

    return NamedSpace(
        ValuedDistance("matrix", 2, fn, "metric", label="diag_absdiff_matrix"),
        Box([Interval(-1.0, 1.0), Interval(-1.0, 1.0)]),
    )


SPACES = {
    "max_unit_interval": _max_unit_interval,
    "shifted_max_matrix": _shifted_max_matrix,
    "absdiff_pair": _absdiff_pair,
    "sum_premetric": _sum_premetric,
    "diag_absdiff_matrix": _diag_absdiff_matrix,
}


def _scale_map(factor: float, label: str) -> OperatorSpec:
    def fn(x):
        if isinstance(x, np.ndarray):
            return factor * x
        return factor * x

    return OperatorSpec(fn, label)


OPERATORS = {
    "halving": lambda: _scale_map(0.5, "halving"),
    "quartering": lambda: _scale_map(0.25, "quartering"),
    "identity": lambda: OperatorSpec(lambda x: x, "identity"),
}


def _coordinate_pair_phi() -> PhiFunction:
    return PhiFunction(
        lambda x: alg._raw("vector", np.array([x, x], dtype=float)), "coordinate_pair"
    )


def _spread_matrix_phi() -> PhiFunction:
    def fn(x):
        s = 2.0 * abs(x[0] - x[1])
        return alg.matrix(np.diag([s, s]))

    return PhiFunction(fn, "spread_matrix")


def _self_max_phi() -> PhiFunction:
    return PhiFunction(
        lambda x: alg._raw("scalar", np.asarray(x, dtype=float)), "self_max"
    )


PHIS = {
    "coordinate_pair": _coordinate_pair_phi,
    "spread_matrix": _spread_matrix_phi,
    "self_max": _self_max_phi,
    "zero_scalar": lambda: PhiFunction(lambda x: alg.scalar(0.0), "zero"),
    "zero_pair": lambda: PhiFunction(lambda x: alg.vector([0.0, 0.0]), "zero"),
}

COMBINERS = {
    "sum": sum_combiner,
    "square_first": square_first_combiner,
}


def _lookup(table: dict, name: str, what: str):
    try:
        return table[name]()
    except KeyError:
        known = ", ".join(sorted(table))
        raise KeyError(f"unknown {what} {name!r}; known: {known}") from None


def get_space(name: str) -> NamedSpace:
    return _lookup(SPACES, name, "space")


def get_operator(name: str) -> OperatorSpec:
    return _lookup(OPERATORS, name, "operator")


def get_phi(name: str) -> PhiFunction:
    return _lookup(PHIS, name, "phi")


def get_combiner(name: str) -> FFunction:
    return _lookup(COMBINERS, name, "combiner")
