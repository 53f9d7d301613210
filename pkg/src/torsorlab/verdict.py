from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Verdict:
    """Outcome of a law check.

    ``witness`` is the lexicographically first failing input (in the
    enumeration order of the check); ``checked`` counts evaluated cases.
    """

    passed: bool
    checked: int = 0
    witness: Any = None
    detail: str = ""
    extra: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed

    @classmethod
    def ok(cls, checked: int, detail: str = "", **extra) -> "Verdict":
        return cls(True, checked, None, detail, extra)

    @classmethod
    def fail(cls, witness, detail: str, checked: int = 0, **extra) -> "Verdict":
        return cls(False, checked, witness, detail, extra)
