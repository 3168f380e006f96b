import json

import numpy as np
import pytest

from app.checks.base_check import reference_instance
from app.checks.derivative import IDENTITY_POINTS, sweep_for_eigenvalue
from app.checks.resolvent import resolvent_residual
from app.config import settings
from app.data.documents import SpectrumReportDocument, dump_document
from app.data.models import MediumProfile, Rectangle, ResolventQuery
from app.engine import spectral
from app.engine.spectral import (
    c12,
    c12_derivative_check,
    c12_derivative_identity,
    c12_grid,
    c12_values,
    default_region,
    find_eigenvalues,
    refine_zero,
    residue_at_singularity,
    resolvent_kernel,
    scattering_coeffs,
    spectral_singularities,
)
from app.errors import DegenerateBasis, NearPole, NonConvergence
from tests.conftest import make_context


@pytest.mark.parametrize("beta,expected", [(2.0, -1.5), (0.5, -0.75)])
def test_free_c12_is_constant(beta, expected):
    ctx = make_context((), beta=beta)
    for lam in (0.3 + 0.2j, -1.7 + 2.5j, 10j):
        assert abs(c12(ctx, lam) - expected) <= 1e-14


def test_free_combination_coefficients(free_context):
    coeffs = scattering_coeffs(free_context, 0.5 + 1j)
    assert coeffs.combo_a == pytest.approx(-0.5, abs=1e-14)
    assert coeffs.combo_b == pytest.approx(1.5, abs=1e-14)


def test_coefficient_relations(reference_context):
    lam = 0.6 + 0.45j
    coeffs = scattering_coeffs(reference_context, lam)
    mirrored = scattering_coeffs(reference_context, -lam)
    assert coeffs.c21 == -coeffs.c12 / 2.0
    assert abs(coeffs.c22 - mirrored.c11 / 2.0) <= 1e-12 * abs(coeffs.c22)
    assert abs(coeffs.combo_b + coeffs.c12) <= 1e-12 * abs(coeffs.c12)
    assert abs(coeffs.left_a - coeffs.c22) <= 1e-12 * abs(coeffs.c22)
    assert abs(coeffs.left_b - coeffs.c21) <= 1e-12 * abs(coeffs.c21)


def test_c12_tends_to_its_limit(reference_context):
    gap = abs(c12(reference_context, 10j) + 1.5)
    assert 0 < gap < 0.1


def test_c12_rejects_tiny_lambda(reference_context):
    with pytest.raises(DegenerateBasis):
        scattering_coeffs(reference_context, 1e-12j)


def test_analytic_c12_derivative(reference_context):
    lam, h = 0.9 + 0.35j, 1e-6
    _, exact = c12_values(reference_context, np.asarray(lam))
    approx = (c12(reference_context, lam + h) - c12(reference_context, lam - h)) / (2 * h)
    assert abs(complex(exact) - approx) <= 1e-7 * abs(approx)


def test_c12_grid_layout(reference_context):
    rect = Rectangle(re_min=-1, re_max=1, im_min=0.5, im_max=1.5)
    rows = c12_grid(reference_context, rect, 4, 3)
    assert rows.shape == (12, 4)
    assert rows[0, 0] == -1 and rows[0, 1] == 0.5
    assert rows[-1, 0] == 1 and rows[-1, 1] == 1.5
    assert complex(rows[5, 2], rows[5, 3]) == pytest.approx(
        c12(reference_context, complex(rows[5, 0], rows[5, 1])), abs=1e-14
    )
    with pytest.raises(ValueError):
        c12_grid(reference_context, rect, 1, 3)


def test_default_region(reference_context):
    region = default_region(reference_context)
    assert region.re_min == -13 and region.re_max == 13
    assert region.im_min == settings.root_strip
    assert region.im_max == pytest.approx(20.0)


def test_free_problem_has_no_eigenvalues(free_context):
    report = find_eigenvalues(free_context, cutoff=2)
    assert report.eigenvalues == []
    assert report.total_winding == 0
    assert [s.value for s in report.singularities] == [0.25, 0.5, 0.5, 1.0]


def test_search_region_must_clear_real_axis(free_context):
    with pytest.raises(ValueError):
        find_eigenvalues(free_context, Rectangle(re_min=-1, re_max=1, im_min=0, im_max=1))


def test_singularities_with_ties():
    entries = spectral_singularities(MediumProfile(beta=2.0), 2)
    assert [(s.value, s.family, s.n) for s in entries] == [
        (0.25, "n/(2beta)", 1),
        (0.5, "n/(2beta)", 2),
        (0.5, "n/2", 1),
        (1.0, "n/2", 2),
    ]


def test_singularities_without_ties():
    entries = spectral_singularities(MediumProfile(beta=3.0), 1)
    assert [s.value for s in entries] == pytest.approx([1 / 6, 0.5])
    with pytest.raises(ValueError):
        spectral_singularities(MediumProfile(beta=3.0), 0)


def test_free_resolvent_kernel(free_context):
    value = resolvent_kernel(free_context, ResolventQuery(x=1, t=-1, lam=1j))
    assert value == pytest.approx(np.exp(-3) / 3, abs=1e-14)


def test_resolvent_kernel_is_symmetric(reference_context):
    lam = 0.4 + 0.8j
    a = resolvent_kernel(reference_context, ResolventQuery(x=0.7, t=-0.3, lam=lam))
    b = resolvent_kernel(reference_context, ResolventQuery(x=-0.3, t=0.7, lam=lam))
    assert a == b


def test_lower_sector_uses_negated_lambda(free_context):
    lower = resolvent_kernel(free_context, ResolventQuery.at(1, -1, -1j))
    assert lower == pytest.approx(np.exp(-3) / 3, abs=1e-14)


def test_resolvent_inverts_the_operator():
    assert resolvent_residual(reference_instance()) <= 1e-4


def test_resolvent_near_pole(reference_context, monkeypatch):
    monkeypatch.setattr(settings, "near_pole_wronskian", 1e6)
    with pytest.raises(NearPole):
        resolvent_kernel(reference_context, ResolventQuery(x=0, t=0, lam=1j))


@pytest.mark.parametrize("lam", IDENTITY_POINTS)
def test_finite_interval_derivative_identity(reference_context, lam):
    check = c12_derivative_identity(reference_context, lam)
    assert check.relative_error <= 1e-4


def test_derivative_check_needs_a_zero(free_context):
    with pytest.raises(ValueError):
        c12_derivative_check(free_context, 0.5 + 0.5j)
    with pytest.raises(ValueError):
        c12_derivative_check(free_context, 0.5 - 0.5j)


def test_residue_limit_is_removable(reference_context):
    estimate = residue_at_singularity(reference_context, 1, 0.0, 0.0)
    assert abs(estimate.limit_est) <= 1e-3 * max(1.0, abs(estimate.formula))
    assert len(estimate.samples) == len(settings.residue_deltas)


def test_residue_limit_at_coincident_singularity(reference_context):
    # n/2 = 1 is also 4/(2β) here
    estimate = residue_at_singularity(reference_context, 2, 0.0, 0.0, deltas=[1e-4, 5e-5, 2.5e-5])
    assert abs(estimate.limit_est) <= 1e-3 * max(1.0, abs(estimate.formula))


def test_residue_formula_is_rank_one(reference_context):
    points = [(0.2, -0.4), (0.9, 0.1)]
    f = {
        (x, t): residue_at_singularity(reference_context, 2, x, t).formula
        for x in (0.2, 0.9)
        for t in (-0.4, 0.1)
    }
    (x1, t1), (x2, t2) = points
    assert f[(x1, t1)] * f[(x2, t2)] == pytest.approx(f[(x1, t2)] * f[(x2, t1)], rel=1e-12)


def test_residue_formula_vanishes_with_diagonal_entry():
    ctx = make_context((0, 1), beta=2.0, order=12)
    assert ctx.vtable.get(1, 1) == 0
    estimate = residue_at_singularity(ctx, 1, 0.3, 0.1)
    assert estimate.formula == 0


NEAR_REAL_ZERO = 2.7416 + 0.00565j
SWEEP_BOX = Rectangle(re_min=-4, re_max=4, im_min=1e-3, im_max=4)


@pytest.fixture(scope="module")
def strong_context():
    return make_context((16j,), beta=2.0, order=32)


@pytest.fixture(scope="module")
def strong_report(strong_context):
    return find_eigenvalues(strong_context, SWEEP_BOX)


@pytest.fixture(scope="module")
def near_real_zero(strong_report):
    upper = [e.value for e in strong_report.eigenvalues if e.sector == "S0"]
    return min(upper, key=lambda z: abs(z - NEAR_REAL_ZERO))


def test_eigenvalue_search_locates_near_real_zero(strong_context, strong_report, near_real_zero):
    upper = [e for e in strong_report.eigenvalues if e.sector == "S0"]
    lower = [e for e in strong_report.eigenvalues if e.sector == "S1"]
    assert strong_report.total_winding == sum(e.multiplicity for e in upper)
    assert len(lower) == len(upper)
    for e in upper:
        assert any(m.value == -e.value for m in lower)
        assert abs(c12(strong_context, e.value)) <= settings.root_tolerance
        assert strong_report.search_region.contains(e.value, 1e-9)
    assert abs(near_real_zero - NEAR_REAL_ZERO) <= 1e-3


def test_near_real_zero_is_stable_under_longer_table(near_real_zero):
    longer = make_context((16j,), beta=2.0, order=40)
    shifted, _ = refine_zero(longer, near_real_zero, settings.root_tolerance)
    assert abs(shifted - near_real_zero) <= 1e-6


def test_derivative_identity_at_near_real_zero(strong_context, near_real_zero):
    check = c12_derivative_check(strong_context, near_real_zero)
    assert check.half_width > 1000
    assert check.relative_error <= 1e-4
    assert check.endpoint_decay <= 1e-6
    assert check.quadrature_error <= 1e-4 * abs(check.rhs)


def test_sweep_returns_a_located_eigenvalue():
    found = sweep_for_eigenvalue()
    assert found is not None
    ctx, zero, _ = found
    assert zero.imag > 0
    assert abs(c12(ctx, zero)) <= settings.root_tolerance


def test_newton_stops_once_it_leaves_its_cell(free_context, monkeypatch):
    calls = []

    def flat(ctx, lams):
        calls.append(lams)
        return np.asarray(1.0 + 0j), np.asarray(1e-12 + 0j)

    monkeypatch.setattr(spectral, "c12_values", flat)
    cell = Rectangle(re_min=0, re_max=1, im_min=0.5, im_max=1)
    with pytest.raises(NonConvergence):
        refine_zero(free_context, cell.center, 1e-10, bounds=cell)
    assert len(calls) == 1


def test_newton_stops_on_non_finite_values(free_context, monkeypatch):
    calls = []

    def overflowing(ctx, lams):
        calls.append(lams)
        return np.asarray(complex(np.nan, 0.0)), np.asarray(1.0 + 0j)

    monkeypatch.setattr(spectral, "c12_values", overflowing)
    with pytest.raises(NonConvergence):
        refine_zero(free_context, 0.5 + 0.5j, 1e-10)
    assert len(calls) == 1


def test_unrefinable_cell_is_split_until_it_is_tiny(reference_context, monkeypatch):
    cells = []

    def refuse(ctx, start, tol_root, max_iterations=None, bounds=None):
        cells.append(bounds)
        raise NonConvergence("refused")

    monkeypatch.setattr(spectral, "refine_zero", refuse)
    monkeypatch.setattr(spectral, "_winding", lambda ctx, rect: 1)
    monkeypatch.setattr(settings, "min_cell_size", 1e-2)
    with pytest.raises(NonConvergence, match="no zero refined"):
        find_eigenvalues(reference_context, Rectangle(re_min=0, re_max=1, im_min=0.5, im_max=1))
    assert max(cells[-1].width, cells[-1].height) < 1e-2
    assert max(cells[0].width, cells[0].height) == 1


def test_table_order_changes_c12_little(reference_context):
    longer = make_context((1,), beta=2.0, order=reference_context.vtable.A + 8)
    lam = 0.8 + 0.6j
    assert abs(c12(longer, lam) - c12(reference_context, lam)) <= 1e-10


def test_report_document_lists_operator_eigenvalues(strong_report):
    document = SpectrumReportDocument.from_report(strong_report)
    assert len(document.eigenvalues) == len(strong_report.eigenvalues)
    for entry in document.eigenvalues:
        zeta = complex(entry.re, entry.im)
        assert entry.energy.value() == pytest.approx(zeta**2, rel=1e-12)
    payload = json.loads(dump_document(document))
    assert set(payload["eigenvalues"][0]["energy"]) == {"re", "im"}
