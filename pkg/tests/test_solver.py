import json

import numpy as np
import pytest

from cstarfix import algebra as alg
from cstarfix.contractions import (
    ContractionSpec,
    OperatorSpec,
    square_first_combiner,
    sum_combiner,
    zero_phi,
)
from cstarfix.registry import get_combiner, get_operator, get_phi, get_space
from cstarfix.solver import (
    OrbitEscapeError,
    SolveConfig,
    SolverError,
    bound_audit,
    certify_phi_fixed_point,
    picard_solve,
    uniqueness_probe,
)
from cstarfix.spaces import Interval, ValuedDistance


def sum_premetric_problem():
    space = get_space("sum_premetric")
    return dict(
        T=get_operator("halving"),
        d=space.distance,
        phi=get_phi("coordinate_pair"),
        F=sum_combiner(),
        spec=ContractionSpec("plain", k=0.5),
        domain=space.domain,
    )


def abs_metric():
    return ValuedDistance("scalar", 1, lambda x, y: alg.scalar(abs(x - y)), "metric")


class TestPicardSolve:
    def test_halving_orbit_reaches_zero(self):
        prob = sum_premetric_problem()
        cert = picard_solve(
            prob["T"], prob["d"], prob["phi"], prob["F"], prob["spec"],
            SolveConfig(x0=1.0, tol=1e-10, domain=prob["domain"]),
        )
        assert cert.converged
        assert cert.iterations <= 64
        assert cert.residual_fixed <= 1e-10
        assert cert.residual_phi <= 1e-10
        assert abs(cert.z) <= 1e-10

    def test_paired_coordinates_reach_origin(self):
        space = get_space("diag_absdiff_matrix")
        cert = picard_solve(
            get_operator("halving"),
            space.distance,
            get_phi("spread_matrix"),
            square_first_combiner(),
            ContractionSpec("weak", k=0.5, alpha=4.0),
            SolveConfig(x0=np.array([1.0, 1.0]), tol=1e-10, domain=space.domain),
        )
        assert cert.converged
        assert np.max(np.abs(cert.z)) <= 1e-9

    def test_identity_on_premetric_never_converges(self):
        prob = sum_premetric_problem()
        cert = picard_solve(
            get_operator("identity"), prob["d"], prob["phi"], prob["F"], prob["spec"],
            SolveConfig(x0=0.3, tol=1e-10, max_iter=50),
        )
        # d(0.3, 0.3) = (0, 0.6): the step criterion never fires
        assert not cert.converged
        assert cert.residual_phi == pytest.approx(0.3)

    def test_stalled_orbit_with_nonzero_penalty_fails(self):
        # identity on a genuine metric halts immediately with zero step and
        # zero fixed-point residual, but a nonzero penalty blocks success
        phi = get_phi("self_max")
        cert = picard_solve(
            get_operator("identity"), abs_metric(), phi, sum_combiner(),
            ContractionSpec("plain", k=0.5), SolveConfig(x0=0.3, tol=1e-10),
        )
        assert cert.iterations == 1
        assert cert.residual_fixed == 0.0
        assert cert.residual_phi == pytest.approx(0.3)
        assert not cert.converged

    def test_step_norms_decay_geometrically(self):
        prob = sum_premetric_problem()
        cert = picard_solve(
            prob["T"], prob["d"], prob["phi"], prob["F"], prob["spec"],
            SolveConfig(x0=1.0, tol=1e-12),
        )
        r = cert.rate_used
        for a, b, na, nb in zip(
            cert.step_norms, cert.step_norms[1:],
            cert.recorded_indices, cert.recorded_indices[1:],
        ):
            if nb == na + 1:
                assert b <= r * a + 1e-12

    def test_bounds_decay_by_exact_rate(self):
        prob = sum_premetric_problem()
        cert = picard_solve(
            prob["T"], prob["d"], prob["phi"], prob["F"], prob["spec"],
            SolveConfig(x0=1.0, tol=1e-12),
        )
        for a, b, na, nb in zip(
            cert.apriori_bounds, cert.apriori_bounds[1:],
            cert.recorded_indices, cert.recorded_indices[1:],
        ):
            if nb == na + 1:
                assert b == cert.rate_used * a  # exact by construction

    def test_phi_residual_decays_with_envelope(self):
        prob = sum_premetric_problem()
        cert = picard_solve(
            prob["T"], prob["d"], prob["phi"], prob["F"], prob["spec"],
            SolveConfig(x0=1.0, tol=1e-12),
        )
        # envelope at n for the penalty is k^n * ||F0|| = bound * (1 - r)
        for q, b in zip(cert.phi_residuals, cert.apriori_bounds):
            assert q <= b * (1 - cert.rate_used) + 1e-12

    def test_certificate_replay_is_identical(self):
        prob = sum_premetric_problem()
        cfg = SolveConfig(x0=0.77, tol=1e-10)
        runs = [
            picard_solve(prob["T"], prob["d"], prob["phi"], prob["F"], prob["spec"], cfg)
            for _ in range(2)
        ]
        payloads = [json.dumps(c.to_dict(), sort_keys=True) for c in runs]
        assert payloads[0] == payloads[1]

    def test_orbit_escape_detected(self):
        prob = sum_premetric_problem()
        grower = OperatorSpec(lambda x: 2.0 * x + 0.1, "grower")
        with pytest.raises(OrbitEscapeError) as exc:
            picard_solve(
                grower, prob["d"], prob["phi"], prob["F"], prob["spec"],
                SolveConfig(x0=0.9, tol=1e-10, domain=Interval(0.0, 1.0)),
            )
        assert exc.value.index >= 0

    def test_csv_trace_columns(self):
        prob = sum_premetric_problem()
        cert = picard_solve(
            prob["T"], prob["d"], prob["phi"], prob["F"], prob["spec"],
            SolveConfig(x0=1.0, tol=1e-10),
        )
        lines = cert.to_csv().strip().splitlines()
        assert lines[0] == "n,step_norm,apriori_bound,phi_residual"
        assert len(lines) == len(cert.recorded_indices) + 1

    def test_bad_config_rejected(self):
        with pytest.raises(ValueError):
            SolveConfig(x0=0.0, tol=0.0)
        with pytest.raises(ValueError):
            SolveConfig(x0=0.0, max_iter=0)


class TestCertify:
    def test_origin_is_phi_fixed(self):
        prob = sum_premetric_problem()
        res = certify_phi_fixed_point(0.0, prob["T"], prob["d"], prob["phi"])
        assert res["is_fixed"] and res["is_phi_zero"]

    def test_half_is_not_fixed(self):
        prob = sum_premetric_problem()
        res = certify_phi_fixed_point(0.5, prob["T"], prob["d"], prob["phi"])
        assert not res["is_fixed"]
        assert res["residual_fixed"] == pytest.approx(0.75)  # (0, 0.5 + 0.25)

    def test_phi_zero_alone(self):
        prob = sum_premetric_problem()
        res = certify_phi_fixed_point(0.0, get_operator("identity"), prob["d"], prob["phi"])
        assert res["is_phi_zero"]


class TestBoundAudit:
    def test_halving_orbit_respects_bounds(self):
        prob = sum_premetric_problem()
        cert = picard_solve(
            prob["T"], prob["d"], prob["phi"], prob["F"], prob["spec"],
            SolveConfig(x0=1.0, tol=1e-10),
        )
        audit = bound_audit(cert, prob["d"])
        assert audit["passed"]
        assert audit["max_violation"] <= 1e-9

    def test_first_bound_value(self):
        # F0 = F(d(1/2,1), phi(1/2), phi(1)) = (3/2, 3), norm 3, rate 1/2:
        # bound at n=0 is 3 / (1 - 1/2) = 6
        prob = sum_premetric_problem()
        cert = picard_solve(
            prob["T"], prob["d"], prob["phi"], prob["F"], prob["spec"],
            SolveConfig(x0=1.0, tol=1e-10),
        )
        assert cert.apriori_bounds[0] == pytest.approx(6.0)

    def test_kannan_orbit_audit(self):
        cert = picard_solve(
            get_operator("quartering"),
            abs_metric(),
            zero_phi("scalar"),
            sum_combiner(),
            ContractionSpec("kannan", k=1 / 3),
            SolveConfig(x0=1.0, tol=1e-10),
        )
        assert cert.rate_used == pytest.approx(0.5)
        audit = bound_audit(cert, abs_metric())
        assert audit["passed"]

    def test_audit_requires_convergence(self):
        prob = sum_premetric_problem()
        cert = picard_solve(
            get_operator("identity"), prob["d"], prob["phi"], prob["F"], prob["spec"],
            SolveConfig(x0=0.5, tol=1e-10),
        )
        with pytest.raises(SolverError):
            bound_audit(cert, prob["d"])


class TestUniquenessProbe:
    def test_halving_limits_agree(self):
        prob = sum_premetric_problem()
        report = uniqueness_probe(
            prob["T"], prob["d"], prob["phi"], prob["F"], prob["spec"],
            starts=[0.0, 0.3, 1.0],
            cfg=SolveConfig(x0=0.0, tol=1e-10),
        )
        assert report["all_below_tol"]
        assert len(report["pairwise"]) == 3

    def test_matrix_problem_corner_starts(self):
        space = get_space("diag_absdiff_matrix")
        report = uniqueness_probe(
            get_operator("halving"),
            space.distance,
            get_phi("spread_matrix"),
            square_first_combiner(),
            ContractionSpec("weak", k=0.5, alpha=4.0),
            starts=[np.array(c, dtype=float) for c in
                    [(1, 1), (-1, 1), (1, -1), (-1, -1)]],
            cfg=SolveConfig(x0=np.zeros(2), tol=1e-10),
        )
        assert report["all_below_tol"]
        for z in report["limits"]:
            assert np.max(np.abs(z)) <= 1e-9

    def test_single_start_rejected(self):
        prob = sum_premetric_problem()
        with pytest.raises(ValueError):
            uniqueness_probe(
                prob["T"], prob["d"], prob["phi"], prob["F"], prob["spec"],
                starts=[0.5],
                cfg=SolveConfig(x0=0.5),
            )
