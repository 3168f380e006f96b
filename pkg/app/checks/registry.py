from app.checks.base_check import BaseCheck
from app.checks.closed_form import ClosedFormCheck
from app.checks.derivative import DerivativeIdentityCheck
from app.checks.resolvent import ResidueCheck, ResolventIdentityCheck
from app.checks.series import HandTableCheck, TableEquivalenceCheck, TruncationCheck
from app.checks.solutions import OdeResidualCheck, ProportionalityCheck, WronskianCheck
from app.checks.spectral import AsymptoteCheck, RoundTripCheck, ZeroPotentialCheck


def default_checks() -> list[BaseCheck]:
    """All validation suites in report order."""
    return [
        TruncationCheck(),
        HandTableCheck(),
        TableEquivalenceCheck(),
        OdeResidualCheck(),
        WronskianCheck(),
        ProportionalityCheck(),
        ZeroPotentialCheck(),
        AsymptoteCheck(),
        DerivativeIdentityCheck(),
        ResidueCheck(),
        ResolventIdentityCheck(),
        RoundTripCheck(),
        ClosedFormCheck(),
    ]


def register_checks(checks: list[BaseCheck]) -> dict[str, BaseCheck]:
    """
    Builds the name → check lookup.

    Args:
        checks: Check instances to register

    Returns:
        Mapping from suite name to check

    Raises:
        ValueError: If two checks share a name
    """
    check_map: dict[str, BaseCheck] = {}
    for check in checks:
        name = check.get_name()
        if name in check_map:
            raise ValueError(f"duplicate check name {name!r}")
        check_map[name] = check
    return check_map
