"""Tri-state answers that carry their witnesses and search budgets."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional

__all__ = ["Answer", "Verdict"]


class Answer(Enum):
    TRUE = "True"
    FALSE = "False"
    UNKNOWN = "UnknownAtBudget"

    def __str__(self):
        return self.value


@dataclass
class Verdict:
    """An answer plus whatever supports it.

    ``certified`` is true when the answer does not depend on the budget:
    an exhibited witness, a finite exhaustive search, or a catalog citation.
    """
    answer: Answer
    witness: Optional[Any] = None
    source: str = "search"
    certified: bool = False
    budget: Optional[dict] = None
    evidence: dict = field(default_factory=dict)

    @property
    def is_true(self):
        return self.answer is Answer.TRUE

    @property
    def is_false(self):
        return self.answer is Answer.FALSE

    @property
    def is_unknown(self):
        return self.answer is Answer.UNKNOWN

    def to_json(self):
        w = self.witness
        if isinstance(w, tuple):
            w = list(w)
        return {
            "answer": self.answer.value,
            "certified": self.certified,
            "source": self.source,
            "witness": w,
            "budget": self.budget,
            "evidence": self.evidence,
        }
