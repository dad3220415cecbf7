"""Report data models shared by validation, the pipeline and the selftest.

These are plain dataclasses; document models that are parsed from JSON live in
:mod:`equichain.pydantic_models`.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional


@dataclass
class Violation:
    """One failed identity together with the element that witnesses it.

    Attributes:
        identity: Name of the violated identity (e.g. ``"homotopy"``).
        degree: Degree of the witness element.
        witness: Printable form of the witness element.
        detail: Optional description of the mismatch.
    """

    identity: str
    degree: int
    witness: str
    detail: str = ""

    def __post_init__(self):
        if not self.identity:
            raise ValueError("identity is required")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "identity": self.identity,
            "degree": self.degree,
            "witness": self.witness,
            "detail": self.detail,
        }


@dataclass
class ValidationReport:
    """Outcome of sampling the identities of a reduction or document."""

    name: str
    checked: int = 0
    max_degree: Optional[int] = None
    violations: List[Violation] = field(default_factory=list)

    def __post_init__(self):
        if self.checked < 0:
            raise ValueError(f"checked must be non-negative, got: {self.checked}")

    @property
    def ok(self) -> bool:
        return not self.violations

    def violated(self) -> List[str]:
        """Names of violated identities, in first-seen order."""
        seen: List[str] = []
        for violation in self.violations:
            if violation.identity not in seen:
                seen.append(violation.identity)
        return seen

    def add(self, violation: Violation) -> None:
        self.violations.append(violation)

    def merge(self, other: "ValidationReport", prefix: str = "") -> None:
        self.checked += other.checked
        for violation in other.violations:
            identity = f"{prefix}{violation.identity}" if prefix else violation.identity
            self.violations.append(
                Violation(identity, violation.degree, violation.witness, violation.detail)
            )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "ok": self.ok,
            "checked": self.checked,
            "max_degree": self.max_degree,
            "violations": [v.to_dict() for v in self.violations],
        }


@dataclass
class CheckResult:
    """Result of one named selftest check."""

    name: str
    ok: bool
    checked: int = 0
    detail: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "ok": self.ok,
            "checked": self.checked,
            "detail": self.detail,
        }


@dataclass
class SelftestReport:
    """All selftest checks for one (seed, max_degree) run."""

    seed: int
    max_degree: int
    checks: List[CheckResult] = field(default_factory=list)

    def __post_init__(self):
        if self.max_degree < 0:
            raise ValueError(f"max_degree must be non-negative, got: {self.max_degree}")

    @property
    def ok(self) -> bool:
        return all(check.ok for check in self.checks)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "seed": self.seed,
            "max_degree": self.max_degree,
            "ok": self.ok,
            "checks": [check.to_dict() for check in self.checks],
        }
