"""Contraction families and their sampled verification.

Six families are supported: the plain combined contraction, its graphic
(orbit-only) variant, the weak variant with a relaxation term, and the
Kannan, Reich, and Chatterjea forms. A verification run either certifies
the family inequality over a seeded sample or returns the first
counterexample; runs are deterministic given (seed, sample_count).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Literal, Optional

import numpy as np

from . import algebra as alg
from .algebra import AlgebraElement, OrderTolerance
from .spaces import AxiomCheck, AxiomReport, Domain, ValuedDistance

Family = Literal["plain", "graphic", "weak", "kannan", "reich", "chatterjea"]

__all__ = [
    "FFunction",
    "PhiFunction",
    "OperatorSpec",
    "ContractionSpec",
    "InvalidSpecError",
    "VerificationResult",
    "sum_combiner",
    "square_first_combiner",
    "zero_phi",
    "check_F_axioms",
    "verify_contraction",
    "effective_rate",
]


class InvalidSpecError(ValueError):
    """Contraction constants outside their validity range."""


@dataclass(frozen=True)
class FFunction:
    """Combiner of a distance value and two penalty values, positives to positives."""

    fn: Callable[[AlgebraElement, AlgebraElement, AlgebraElement], AlgebraElement]
    label: str

    def __call__(self, a, b, c) -> AlgebraElement:
        return self.fn(a, b, c)


@dataclass(frozen=True)
class PhiFunction:
    """Pointwise penalty into the positive cone; zeros mark target points."""

    fn: Callable[[object], AlgebraElement]
    label: str
    lsc_assumed: bool = True

    def __call__(self, x) -> AlgebraElement:
        return self.fn(x)


@dataclass(frozen=True)
class OperatorSpec:
    """The self-map under study."""

    fn: Callable[[object], object]
    label: str

    def __call__(self, x):
        return self.fn(x)


def sum_combiner() -> FFunction:
    return FFunction(lambda a, b, c: alg.add(alg.add(a, b), c), "sum")


def square_first_combiner() -> FFunction:
    """First argument squared plus the other two. Fails the dominance axiom
    for small positive first arguments; kept as a built-in to exercise that."""
    return FFunction(lambda a, b, c: alg.add(alg.add(alg.mul(a, a), b), c), "square-first")


def zero_phi(kind: alg.Kind, n: int = 1) -> PhiFunction:
    z = alg.zero(kind, n)
    return PhiFunction(lambda x: z, "zero")


@dataclass(frozen=True)
class ContractionSpec:
    family: Family
    k: Optional[float] = None
    alpha: Optional[float] = None
    beta: Optional[float] = None
    gamma: Optional[float] = None

    def __post_init__(self):
        f = self.family
        if f in ("plain", "graphic"):
            if self.k is None or not 0 < self.k < 1:
                raise InvalidSpecError(f"{f} requires k in (0,1), got {self.k}")
        elif f == "weak":
            if self.k is None or not 0 < self.k < 1:
                raise InvalidSpecError(f"weak requires k in (0,1), got {self.k}")
            if self.alpha is None or self.alpha < 0:
                raise InvalidSpecError(f"weak requires alpha >= 0, got {self.alpha}")
        elif f in ("kannan", "chatterjea"):
            if self.k is None or not 0 < self.k < 0.5:
                raise InvalidSpecError(f"{f} requires k in (0,1/2), got {self.k}")
        elif f == "reich":
            a, b, g = self.alpha, self.beta, self.gamma
            if a is None or b is None or g is None or min(a, b, g) < 0:
                raise InvalidSpecError("reich requires alpha, beta, gamma >= 0")
            if a + b + g >= 1:
                raise InvalidSpecError(
                    f"reich requires alpha+beta+gamma < 1, got {a + b + g}"
                )
        else:
            raise InvalidSpecError(f"unknown family {f!r}")

    def to_dict(self) -> dict:
        d = {"family": self.family}
        for name in ("k", "alpha", "beta", "gamma"):
            v = getattr(self, name)
            if v is not None:
                d[name] = v
        return d

    @staticmethod
    def from_dict(d: dict) -> "ContractionSpec":
        family = d.get("family")
        aliases = {"banach": "plain", "fphi": "plain"}
        family = aliases.get(family, family)
        return ContractionSpec(
            family=family,
            k=d.get("k"),
            alpha=d.get("alpha"),
            beta=d.get("beta"),
            gamma=d.get("gamma"),
        )


def effective_rate(spec: ContractionSpec) -> float:
    """Per-step geometric factor implied by the family constants."""
    if spec.family == "kannan":
        return spec.k / (1.0 - spec.k)
    if spec.family == "reich":
        return (spec.alpha + spec.gamma) / (1.0 - spec.beta)
    return spec.k


def _sample_positive(kind: alg.Kind, n: int, rng: np.random.Generator) -> AlgebraElement:
    if kind == "scalar":
        return alg.scalar(abs(rng.normal()))
    if kind == "vector":
        return alg.vector(np.abs(rng.normal(size=n)))
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return alg.matrix((g @ g.conj().T) / n)


def check_F_axioms(
    F: FFunction,
    kind: alg.Kind,
    n: int = 2,
    sample_count: int = 500,
    seed: int = 0,
    tol: OrderTolerance | None = None,
) -> AxiomReport:
    """Sampled check of the combiner axioms.

    Dominance is tested as the pair of order inequalities a <= F(a,b,c) and
    b <= F(a,b,c), which is what downstream arguments actually use; a
    max of non-comparable elements is not defined. Zero preservation is
    evaluated exactly at theta; continuity is probed by an empirical
    perturbation modulus.
    """
    rng = np.random.default_rng(seed)
    theta = alg.zero(kind, n)
    report = AxiomReport(label=f"F-axioms({F.label})", seed=seed)

    # boundary probes (a, theta, theta) sharpen dominance detection at
    # small positive first arguments, then random positive triples
    triples = []
    for _ in range(max(4, sample_count // 50)):
        a = _sample_positive(kind, n, rng)
        nrm = alg.norm(a)
        if nrm > 0:
            triples.append((alg.scale(0.5 / nrm, a), theta, theta))
    while len(triples) < sample_count:
        triples.append(tuple(_sample_positive(kind, n, rng) for _ in range(3)))

    witness = None
    for a, b, c in triples:
        out = F(a, b, c)
        if not (alg.leq(a, out, tol) and alg.leq(b, out, tol)):
            witness = {
                "points": {},
                "inputs": [alg.element_to_dict(v) for v in (a, b, c)],
                "offending": alg.element_to_dict(out),
            }
            break
    report.checks.append(
        AxiomCheck(
            "dominance",
            "fail" if witness else "pass",
            len(triples),
            witness,
        )
    )

    at_zero = F(theta, theta, theta)
    zero_ok = alg.norm(at_zero) <= alg._resolve_eps(at_zero, tol)
    report.checks.append(
        AxiomCheck(
            "zero-preservation",
            "pass" if zero_ok else "fail",
            1,
            None if zero_ok else {"points": {}, "offending": alg.element_to_dict(at_zero)},
        )
    )

    # empirical continuity modulus: output change per unit input change
    h = 1e-6
    modulus = 0.0
    finite = True
    for a, b, c in triples[: min(100, len(triples))]:
        da, db, dc = (alg.scale(h, _sample_positive(kind, n, rng)) for _ in range(3))
        out0 = F(a, b, c)
        out1 = F(alg.add(a, da), alg.add(b, db), alg.add(c, dc))
        delta_in = max(alg.norm(da), alg.norm(db), alg.norm(dc))
        if delta_in == 0:
            continue
        ratio = alg.norm(alg.sub(out1, out0)) / delta_in
        if not np.isfinite(ratio):
            finite = False
            break
        modulus = max(modulus, ratio)
    check = AxiomCheck("continuity", "pass" if finite else "fail", min(100, len(triples)))
    check.witness = None if finite else {"points": {}, "offending": alg.element_to_dict(out1)}
    report.checks.append(check)
    report.continuity_modulus = modulus
    return report


@dataclass
class VerificationResult:
    """Outcome of a sampled inequality run: certificate or first counterexample."""

    inequality: str
    certified: bool
    seed: int
    sample_count: int
    max_slack_norm: float
    spec: ContractionSpec
    counterexample: Optional[dict] = None

    def to_dict(self) -> dict:
        d = {
            "inequality": self.inequality,
            "certified": self.certified,
            "seed": self.seed,
            "sample_count": self.sample_count,
            "max_slack_norm": self.max_slack_norm,
            "spec": self.spec.to_dict(),
        }
        if self.counterexample is not None:
            d["counterexample"] = self.counterexample
        return d


def _point_repr(x):
    if isinstance(x, np.ndarray):
        return [float(v) for v in x]
    return float(x)


def inequality_sides(
    spec: ContractionSpec,
    T: OperatorSpec,
    d: ValuedDistance,
    phi: PhiFunction,
    F: FFunction,
    x,
    y=None,
) -> tuple[AlgebraElement, AlgebraElement]:
    """Both sides of the family inequality at a sampled point or pair."""
    theta = alg.zero(d.kind, d.n)
    fam = spec.family
    if fam == "graphic":
        Tx = T(x)
        TTx = T(Tx)
        lhs = F(d(TTx, Tx), phi(TTx), phi(Tx))
        rhs = alg.scale(spec.k, F(d(Tx, x), phi(Tx), phi(x)))
        return lhs, rhs
    Tx, Ty = T(x), T(y)
    lhs = F(d(Tx, Ty), phi(Tx), phi(Ty))
    if fam == "plain":
        rhs = alg.scale(spec.k, F(d(x, y), phi(x), phi(y)))
    elif fam == "weak":
        relax = alg.sub(F(d(y, Tx), phi(y), phi(Tx)), F(theta, phi(y), phi(Tx)))
        rhs = alg.add(
            alg.scale(spec.k, F(d(x, y), phi(x), phi(y))), alg.scale(spec.alpha, relax)
        )
    elif fam == "kannan":
        rhs = alg.scale(
            spec.k, alg.add(F(d(Tx, x), phi(Tx), phi(x)), F(d(Ty, y), phi(Ty), phi(y)))
        )
    elif fam == "reich":
        rhs = alg.add(
            alg.add(
                alg.scale(spec.alpha, F(d(x, y), phi(x), phi(y))),
                alg.scale(spec.beta, F(d(x, Tx), phi(x), phi(Tx))),
            ),
            alg.scale(spec.gamma, F(d(y, Ty), phi(y), phi(Ty))),
        )
    elif fam == "chatterjea":
        rhs = alg.scale(
            spec.k,
            alg.add(
                alg.sub(F(d(x, Ty), phi(x), phi(Ty)), F(theta, phi(x), phi(Ty))),
                F(d(y, Tx), phi(y), phi(Tx)),
            ),
        )
    else:
        raise InvalidSpecError(f"unknown family {fam!r}")
    return lhs, rhs


def verify_contraction(
    spec: ContractionSpec,
    T: OperatorSpec,
    d: ValuedDistance,
    phi: PhiFunction,
    F: FFunction,
    domain: Domain,
    sample_count: int = 1000,
    seed: int = 0,
    tol: OrderTolerance | None = None,
) -> VerificationResult:
    """Certify the family inequality over a seeded sample, or produce the
    first counterexample (lowest sample index wins)."""
    rng = np.random.default_rng(seed)
    single_point = spec.family == "graphic"

    samples = []
    if single_point:
        samples = [(domain.sample(rng), None) for _ in range(sample_count)]
    else:
        n_uniform = sample_count
        if spec.family == "weak":
            # stratify: the relaxation term vanishes near y = Tx, which is
            # where the inequality binds
            n_uniform = sample_count - sample_count // 2
        for _ in range(n_uniform):
            samples.append((domain.sample(rng), domain.sample(rng)))
        while len(samples) < sample_count:
            x = domain.sample(rng)
            y = _jitter_toward(T(x), domain, rng)
            samples.append((x, y))

    max_slack = 0.0
    for idx, (x, y) in enumerate(samples):
        lhs, rhs = inequality_sides(spec, T, d, phi, F, x, y)
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
                inequality=spec.family,
                certified=False,
                seed=seed,
                sample_count=sample_count,
                max_slack_norm=max_slack,
                spec=spec,
                counterexample=ce,
            )
        max_slack = max(max_slack, alg.norm(alg.sub(rhs, lhs)))
    return VerificationResult(
        inequality=spec.family,
        certified=True,
        seed=seed,
        sample_count=sample_count,
        max_slack_norm=max_slack,
        spec=spec,
    )


def _jitter_toward(target, domain: Domain, rng: np.random.Generator):
    """A domain point near the target, for stratified weak-family sampling."""
    fresh = domain.sample(rng)
    t = np.asarray(target, dtype=float)
    f = np.asarray(fresh, dtype=float)
    mixed = t + 0.05 * (f - t)
    if domain.contains(mixed):
        return float(mixed) if mixed.ndim == 0 else mixed
    return fresh
