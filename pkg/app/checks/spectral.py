"""Checks on scattering data and on the forward/inverse round trip."""

import numpy as np

from app.checks.base_check import BaseCheck, CheckResult, ProblemInstance, reference_instance
from app.config import settings
from app.data.models import MediumProfile, Potential, Rectangle
from app.engine.inverse import round_trip
from app.engine.spectral import c12_values, find_eigenvalues, spectral_singularities

ASYMPTOTE_HEIGHTS = (10.0, 100.0, 1000.0)
MIN_FIRST_ORDER = 0.2


def first_order_weight(potential: Potential) -> float:
    """|Σ q_α/α|, which sets the 1/λ term of C12 at large |λ|."""
    return abs(sum(q / (k + 1) for k, q in enumerate(potential.harmonics)))


class ZeroPotentialCheck(BaseCheck):
    def get_name(self) -> str:
        return "zero_potential"

    def get_description(self) -> str:
        return "q = 0 gives C12 = -(β+1)/2, no eigenvalues and the exact singularity list"

    def execute(self, instances: list[ProblemInstance], rng: np.random.Generator) -> CheckResult:
        betas = sorted({i.medium.beta for i in instances} | {2.0})
        worst = 0.0
        problems = []
        for beta in betas:
            ctx = ProblemInstance(potential=Potential(), medium=MediumProfile(beta=beta)).context()
            lams = rng.uniform(-3, 3, 16) + 1j * rng.uniform(settings.root_strip, 3, 16)
            values, _ = c12_values(ctx, lams)
            worst = max(worst, float(np.max(np.abs(values + (beta + 1) / 2))))

            region = Rectangle(re_min=-3, re_max=3, im_min=settings.root_strip, im_max=3)
            report = find_eigenvalues(ctx, region)
            if report.eigenvalues:
                problems.append(f"beta={beta}: spurious eigenvalues")

            expected = sorted(
                [n / 2 for n in range(1, 5)] + [n / (2 * beta) for n in range(1, 5)]
            )
            listed = [s.value for s in spectral_singularities(ctx.medium, 4)]
            if listed != expected:
                problems.append(f"beta={beta}: singularity list mismatch")
        if worst > 1e-14:
            problems.append(f"C12 deviates by {worst:.3e}")
        return CheckResult(
            success=not problems,
            data={"max_c12_error": worst, "betas": betas},
            error="; ".join(problems) or None,
        )


class AsymptoteCheck(BaseCheck):
    def get_name(self) -> str:
        return "asymptote"

    def get_description(self) -> str:
        return "|C12(it) + (β+1)/2| decreases like K/t with K stable to a factor of 2"

    def execute(self, instances: list[ProblemInstance], rng: np.random.Generator) -> CheckResult:
        cases = [reference_instance()]
        cases += [i for i in instances if first_order_weight(i.potential) >= MIN_FIRST_ORDER]
        heights = np.array(ASYMPTOTE_HEIGHTS)
        worst_spread = 1.0
        problems = []
        for case in cases:
            ctx = case.context()
            values, _ = c12_values(ctx, 1j * heights)
            gaps = np.abs(values + (ctx.medium.beta + 1) / 2)
            if np.any(np.diff(gaps) >= 0):
                problems.append(f"gap not decreasing for {case.potential.harmonics[:2]}")
                continue
            k = gaps * heights
            worst_spread = max(worst_spread, float(k.max() / k.min()))
        if worst_spread > 2:
            problems.append(f"K varies by a factor {worst_spread:.2f}")
        return CheckResult(
            success=not problems,
            data={"cases": len(cases), "worst_k_spread": worst_spread},
            error="; ".join(problems) or None,
        )


class RoundTripCheck(BaseCheck):
    def get_name(self) -> str:
        return "round_trip"

    def get_description(self) -> str:
        return "Forward map followed by the inverse procedure recovers (q, β)"

    def execute(self, instances: list[ProblemInstance], rng: np.random.Generator) -> CheckResult:
        reports = [round_trip(i.potential, i.medium, i.order) for i in instances]
        failed = [k for k, r in enumerate(reports) if not r.passed]
        finished = [r for r in reports if r.error is None]
        return CheckResult(
            success=not failed,
            data={
                "instances": len(reports),
                "max_q_error": max((r.q_error for r in finished), default=0.0),
                "max_beta_error": max((r.beta_error for r in finished), default=0.0),
                "max_vtable_error": max((r.vtable_error for r in finished), default=0.0),
            },
            error=f"instances {failed} failed" if failed else None,
        )
