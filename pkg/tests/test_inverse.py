import numpy as np
import pytest

from app.config import settings
from app.data.models import C12Sample, MediumProfile, Potential, SpectralData
from app.engine.inverse import (
    extrapolate_c12,
    forward_spectral_data,
    recover_beta,
    refine_beta,
    round_trip,
    solve_inverse,
)
from app.engine.series import build_vtable
from app.errors import NonPositiveBeta, NonRealAsymptote
from tests.conftest import random_potential

HAND_DIAGONAL = (-1, -0.5, -1 / 12)


def asymptote_data(limit: complex, diagonal=HAND_DIAGONAL) -> SpectralData:
    return SpectralData(normalizing_numbers=diagonal, c12_asymptote=limit)


@pytest.mark.parametrize("limit,beta", [(-1.5, 2.0), (-0.75, 0.5)])
def test_beta_from_asymptote(limit, beta):
    assert recover_beta(asymptote_data(limit)) == pytest.approx(beta, abs=1e-15)


def test_non_real_asymptote_is_rejected():
    with pytest.raises(NonRealAsymptote):
        recover_beta(asymptote_data(-1.5 + 1e-3j))


def test_positive_asymptote_gives_non_positive_beta():
    with pytest.raises(NonPositiveBeta):
        recover_beta(asymptote_data(1.0))


def test_hand_inverse():
    result = solve_inverse(asymptote_data(-1.5))
    assert result.beta == 2.0
    assert np.max(np.abs(result.potential.padded(3) - [1, 0, 0])) <= 1e-14
    assert result.vtable.get(1, 2) == pytest.approx(0.5, abs=1e-15)


def test_zero_data_gives_zero_potential():
    result = solve_inverse(asymptote_data(-0.75, diagonal=(0, 0, 0, 0)))
    assert result.beta == 0.5
    assert not np.any(result.potential.padded(4))


def test_quadratic_extrapolation_is_exact_on_quadratics():
    def model(t):
        return -1.25 + 0.3j / t - 0.8 / t**2

    samples = [C12Sample(im_lambda=t, value=model(t)) for t in (50.0, 100.0, 200.0)]
    limit, diagnostics = extrapolate_c12(samples)
    assert limit == pytest.approx(-1.25, abs=1e-12)
    assert diagnostics["extrapolation_spread"] > 0


def test_beta_from_samples_without_refinement(monkeypatch):
    monkeypatch.setattr(settings, "refine_beta", False)
    data = forward_spectral_data(Potential(harmonics=(1,)), MediumProfile(beta=2.0))
    result = solve_inverse(data)
    assert abs(result.beta - 2.0) <= 1e-6
    assert "beta_refinement_shift" not in result.diagnostics


def test_refined_beta_matches_samples():
    potential, medium = Potential(harmonics=(0.5 - 0.5j, 0.25j)), MediumProfile(beta=3.0)
    data = forward_spectral_data(potential, medium, 24)
    table = build_vtable(potential, 24)
    assert refine_beta(table, data.c12_samples, 2.99) == pytest.approx(3.0, abs=1e-8)


def test_round_trip_of_reference_potential():
    report = round_trip(Potential(harmonics=(1,)), MediumProfile(beta=2.0), 24)
    assert report.passed
    assert report.q_error <= 1e-10
    assert report.beta_error <= 1e-6


def test_round_trip_of_zero_potential():
    report = round_trip(Potential(), MediumProfile(beta=0.5))
    assert report.passed
    assert report.q_error <= 1e-12
    assert report.beta_error <= 1e-12
    assert report.vtable_error == 0


def test_round_trip_on_random_instances(rng):
    failures = []
    for _ in range(50):
        potential = random_potential(rng)
        beta = float(rng.choice([0.5, 2.0, 3.0]))
        report = round_trip(potential, MediumProfile(beta=beta))
        if not report.passed:
            failures.append((potential.harmonics, beta, report))
    assert failures == []


def test_round_trip_folds_errors(monkeypatch):
    monkeypatch.setattr(settings, "asymptote_heights", [50.0, 100.0])
    report = round_trip(Potential(harmonics=(1,)), MediumProfile(beta=2.0))
    assert not report.passed
    assert report.error.startswith("ValidationError")
