from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Optional

from ._jsonable import jsonable


class Verdict(enum.Enum):
    PASS_CERTIFIED = "pass_certified"
    PASS_SAMPLED = "pass_sampled"
    FAIL = "fail"
    UNKNOWN = "unknown"

    @property
    def passed(self) -> bool:
        return self in (Verdict.PASS_CERTIFIED, Verdict.PASS_SAMPLED)


@dataclass(frozen=True)
class HypothesisVerdict:
    """Outcome of checking a named hypothesis on a map.

    A failing verdict always carries a witness (a vector or a pair of
    vectors) that re-checks as a genuine violation.
    """

    hypothesis: str
    verdict: Verdict
    witness: Optional[Any] = None
    beta: Optional[Any] = None
    detail: str = ""
    samples: int = 0
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.verdict is Verdict.FAIL and self.witness is None:
            raise ValueError(f"{self.hypothesis}: fail verdict without witness")

    @property
    def passed(self) -> bool:
        return self.verdict.passed

    @property
    def failed(self) -> bool:
        return self.verdict is Verdict.FAIL

    def to_dict(self) -> dict:
        out = {
            "hypothesis": self.hypothesis,
            "verdict": self.verdict.value,
            "detail": self.detail,
            "samples": self.samples,
        }
        if self.witness is not None:
            out["witness"] = jsonable(self.witness)
        if self.beta is not None:
            out["beta"] = jsonable(self.beta)
        if self.extra:
            out.update(jsonable(self.extra))
        return out
