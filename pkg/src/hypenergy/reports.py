"""Comparison records produced by the bound and identity evaluators."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Union

Number = Union[int, float, Fraction]


@dataclass
class BoundReport:
    """Outcome of one inequality / identity check.

    lhs is the exactly computed quantity, main_term the subtracted main
    term (0 when the statement has none), rhs_terms the named summands of
    the right-hand side.  `ratio` is the signed (lhs - main_term) / rhs.
    `passed` is set by each evaluator according to the shape of its
    statement (one-sided, two-sided, or exact); `envelope` records the
    documented constant standing in for an unspecified one.
    """

    name: str
    lhs: Number
    main_term: Number
    rhs_terms: dict[str, float]
    envelope: float
    passed: bool
    ratio: Optional[float] = None
    extra: dict[str, Any] = field(default_factory=dict)

    @property
    def rhs(self) -> float:
        return float(sum(self.rhs_terms.values()))

    @property
    def deviation(self) -> Number:
        return self.lhs - self.main_term

    def one_line(self) -> str:
        state = "ok" if self.passed else "VIOLATED"
        return (f"{self.name}: lhs={float(self.lhs):.6g} main={float(self.main_term):.6g} "
                f"rhs={self.rhs:.6g} ratio={self.ratio if self.ratio is not None else float('nan'):.4g} "
                f"[{state}]")
