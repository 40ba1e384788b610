"""Conditional-independence diagnostic models."""

from dataclasses import dataclass
from enum import Enum


class RelationVerdict(str, Enum):
    """Outcome of checking one relation against its expected status."""
    PASS = "pass"
    FAIL = "fail"
    NOT_EVALUATED = "not-evaluated"


class Expectation(str, Enum):
    """Expected status of a relation when the adjustment is effective."""
    DEPENDENT = "dependent"
    INDEPENDENT = "independent"


# Relation name -> expected status when predictions are deconfounded.
EXPECTED_PATTERN: dict[str, Expectation] = {
    "corRY": Expectation.DEPENDENT,
    "corRC": Expectation.DEPENDENT,
    "corCY": Expectation.DEPENDENT,
    "corRY_givenC": Expectation.DEPENDENT,
    "corRC_givenY": Expectation.INDEPENDENT,
    "corCY_givenR": Expectation.DEPENDENT,
}

RELATIONS: tuple[str, ...] = tuple(EXPECTED_PATTERN)


@dataclass(frozen=True)
class CIReport:
    """
    Marginal and partial correlations among predictions R, color C and label Y.
    """
    corRY: float
    corRC: float
    corCY: float
    corRY_givenC: float
    corRC_givenY: float
    corCY_givenR: float
    dependence_threshold: float
    independence_threshold: float
    verdicts: dict[str, RelationVerdict]

    def correlation(self, relation: str) -> float:
        return float(getattr(self, relation))

    def correlations(self) -> dict[str, float]:
        return {name: self.correlation(name) for name in RELATIONS}

    @property
    def overall(self) -> RelationVerdict:
        """PASS iff every evaluated relation matches its expected status."""
        if any(v is RelationVerdict.FAIL for v in self.verdicts.values()):
            return RelationVerdict.FAIL
        return RelationVerdict.PASS

    @property
    def flagged(self) -> list[str]:
        """Relations that were not evaluated at this shift."""
        return [r for r, v in self.verdicts.items() if v is RelationVerdict.NOT_EVALUATED]
