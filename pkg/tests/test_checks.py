import numpy as np
import pytest

from app.checks.base_check import BaseCheck, CheckResult, reference_instance
from app.checks import derivative
from app.checks.closed_form import ClosedFormCheck
from app.checks.derivative import DerivativeIdentityCheck
from app.checks.registry import default_checks, register_checks
from app.checks.series import HandTableCheck, TableEquivalenceCheck, TruncationCheck
from app.errors import NonConvergence
from app.validation_runner import ValidationRunner, sample_instances


class ExplodingCheck(BaseCheck):
    def get_name(self) -> str:
        return "exploding"

    def get_description(self) -> str:
        return "Always raises"

    def execute(self, instances, rng) -> CheckResult:
        raise RuntimeError("boom")


def test_registry_has_unique_names():
    names = [c.get_name() for c in default_checks()]
    assert len(names) == len(set(names))
    assert names[0] == "truncation"


def test_registry_rejects_duplicates():
    with pytest.raises(ValueError):
        register_checks([HandTableCheck(), HandTableCheck()])


def test_run_folds_exceptions():
    result = ExplodingCheck().run([], np.random.default_rng(0))
    assert not result.success
    assert result.error == "RuntimeError: boom"
    assert result.metadata["exception_type"] == "RuntimeError"


def test_table_checks_pass():
    rng = np.random.default_rng(1)
    instances = [reference_instance()]
    assert HandTableCheck().run(instances, rng).success
    assert TableEquivalenceCheck().run(instances, rng).success
    assert ClosedFormCheck().run(instances, rng).success


def test_truncation_check_flags_short_tables():
    short = reference_instance().model_copy(update={"order": 4})
    result = TruncationCheck().run([short], np.random.default_rng(0))
    assert not result.success
    assert result.data["worst_ratio"] > 1e-8


def test_sampled_instances_are_reproducible():
    a = sample_instances(np.random.default_rng(5), 6)
    b = sample_instances(np.random.default_rng(5), 6)
    assert a == b
    assert all(1 <= i.potential.N <= 4 and i.potential.max_abs() <= 1 for i in a)
    assert {i.medium.beta for i in a} <= {0.5, 2.0, 3.0}


def test_runner_report_is_deterministic():
    def render():
        checks = [HandTableCheck(), TableEquivalenceCheck(), TruncationCheck()]
        return ValidationRunner(11, checks=checks).run().render()

    first = render()
    assert first == render()
    assert first.startswith("seed=11 truncation=default")
    assert first.rstrip().endswith("overall: PASS")


def test_runner_reports_progress():
    updates = []
    ValidationRunner(2, checks=[HandTableCheck()], on_progress=updates.append).run()
    assert updates[-1].complete
    assert [u.phase for u in updates] == ["sampling", "checking", "complete"]
    assert updates[1].details == {"asserts": HandTableCheck().get_description()}


def test_derivative_check_runs_at_a_located_eigenvalue():
    result = DerivativeIdentityCheck().run([reference_instance()], np.random.default_rng(0))
    assert result.success, result.error
    assert result.metadata["mode"] == "eigenvalue"
    assert result.data["relative_error"] <= 1e-4


def test_derivative_check_falls_back_only_without_zeros(monkeypatch):
    monkeypatch.setattr(derivative, "sweep_for_eigenvalue", lambda: None)
    result = DerivativeIdentityCheck().run([reference_instance()], np.random.default_rng(0))
    assert result.success
    assert result.metadata["mode"] == "identity"


def test_derivative_check_fails_when_the_search_fails(monkeypatch):
    def failing(ctx, region):
        raise NonConvergence("no zero refined")

    monkeypatch.setattr(derivative, "find_eigenvalues", failing)
    result = DerivativeIdentityCheck().run([reference_instance()], np.random.default_rng(0))
    assert not result.success
    assert result.metadata["exception_type"] == "NonConvergence"
