"""Fixed-point problems posed directly on a partial metric space.

Each corollary family states its hypothesis in the partial metric p itself.
Problems reduce to the combined-contraction machinery through the induced
metric, the self-distance penalty phi(x) = p(x,x), and the sum combiner;
the hypothesis is nevertheless verified in p directly, and an exact
per-sample identity ties the two views together.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import algebra as alg
from .algebra import AlgebraElement, OrderTolerance
from .contractions import (
    ContractionSpec,
    FFunction,
    OperatorSpec,
    PhiFunction,
    VerificationResult,
    sum_combiner,
)
from .solver import ConvergenceCertificate, SolveConfig, picard_solve
from .spaces import Domain, ValuedDistance, induced_metric

__all__ = [
    "PartialProblem",
    "PartialSolveResult",
    "reduce_problem",
    "verify_corollary_hypothesis",
    "solve_partial",
]

# corollary names accepted in configs, mapped onto contraction families
COROLLARY_FAMILIES = {
    "banach": "plain",
    "graphic": "graphic",
    "weak": "weak",
    "kannan": "kannan",
    "reich": "reich",
    "chatterjea": "chatterjea",
}


@dataclass(frozen=True)
class PartialProblem:
    p: ValuedDistance
    T: OperatorSpec
    spec: ContractionSpec

    def __post_init__(self):
        if self.p.flavor != "partial":
            raise ValueError("partial problem requires a partial-metric flavor")


def reduce_problem(
    problem: PartialProblem,
) -> tuple[ValuedDistance, PhiFunction, FFunction, ContractionSpec]:
    """Induced metric, self-distance penalty, sum combiner, same constants."""
    p = problem.p
    d = induced_metric(p)
    phi = PhiFunction(lambda x: p(x, x), label="self-distance", lsc_assumed=True)
    return d, phi, sum_combiner(), problem.spec


def corollary_sides(
    problem: PartialProblem, x, y=None
) -> tuple[AlgebraElement, AlgebraElement]:
    """Both sides of the corollary inequality, stated directly in p."""
    p, T, spec = problem.p, problem.T, problem.spec
    fam = spec.family
    if fam == "graphic":
        Tx = T(x)
        return p(T(Tx), Tx), alg.scale(spec.k, p(Tx, x))
    Tx, Ty = T(x), T(y)
    lhs = p(Tx, Ty)
    if fam == "plain":
        rhs = alg.scale(spec.k, p(x, y))
    elif fam == "weak":
        relax = alg.sub(p(y, Tx), alg.scale(0.5, alg.add(p(y, y), p(Tx, Tx))))
        rhs = alg.add(alg.scale(spec.k, p(x, y)), alg.scale(spec.alpha, relax))
    elif fam == "kannan":
        rhs = alg.scale(spec.k, alg.add(p(x, Tx), p(y, Ty)))
    elif fam == "reich":
        rhs = alg.add(
            alg.add(alg.scale(spec.alpha, p(x, y)), alg.scale(spec.beta, p(x, Tx))),
            alg.scale(spec.gamma, p(y, Ty)),
        )
    elif fam == "chatterjea":
        rhs = alg.scale(spec.k, alg.add(p(x, Ty), p(y, Tx)))
    else:
        raise ValueError(f"unknown family {fam!r}")
    return lhs, rhs


def _point_repr(x):
    if isinstance(x, np.ndarray):
        return [float(v) for v in x]
    return float(x)


def verify_corollary_hypothesis(
    problem: PartialProblem,
    domain: Domain,
    sample_count: int = 1000,
    seed: int = 0,
    tol: OrderTolerance | None = None,
) -> VerificationResult:
    """Sample the corollary inequality in p; certificate or first counterexample."""
    rng = np.random.default_rng(seed)
    single_point = problem.spec.family == "graphic"
    max_slack = 0.0
    for idx in range(sample_count):
        x = domain.sample(rng)
        y = None if single_point else domain.sample(rng)
        lhs, rhs = corollary_sides(problem, x, y)
        if not alg.leq(lhs, rhs, tol):
            ce = {
                "index": idx,
                "x": _point_repr(x),
                "lhs": alg.element_to_dict(lhs),
                "rhs": alg.element_to_dict(rhs),
            }
            if y is not None:
                ce["y"] = _point_repr(y)
            return VerificationResult(
                inequality=f"partial-{problem.spec.family}",
                certified=False,
                seed=seed,
                sample_count=sample_count,
                max_slack_norm=max_slack,
                spec=problem.spec,
                counterexample=ce,
            )
        max_slack = max(max_slack, alg.norm(alg.sub(rhs, lhs)))
    return VerificationResult(
        inequality=f"partial-{problem.spec.family}",
        certified=True,
        seed=seed,
        sample_count=sample_count,
        max_slack_norm=max_slack,
        spec=problem.spec,
    )


@dataclass
class PartialSolveResult:
    certificate: ConvergenceCertificate
    self_distance_norm: float
    certified: bool

    def to_dict(self) -> dict:
        return {
            "certificate": self.certificate.to_dict(),
            "self_distance_norm": self.self_distance_norm,
            "certified": self.certified,
        }


def solve_partial(problem: PartialProblem, cfg: SolveConfig) -> PartialSolveResult:
    """Run the reduction through the Picard solver and additionally certify
    a vanishing self-distance p(u,u) at the solution."""
    d, phi, F, spec = reduce_problem(problem)
    cert = picard_solve(problem.T, d, phi, F, spec, cfg)
    self_norm = alg.norm(problem.p(cert.z, cert.z))
    return PartialSolveResult(
        certificate=cert,
        self_distance_norm=self_norm,
        certified=cert.converged and self_norm <= cfg.tol,
    )
