"""Exception hierarchy and the small verdict record shared by all checks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any


class LassError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(LassError, ValueError):
    """Operands live in spaces of incompatible dimension."""


class ContainmentError(LassError, ValueError):
    """A subspace that should be contained in another one is not."""


class StructuralError(LassError, ValueError):
    """Malformed input data: wrong shapes, d∘d ≠ 0, values escaping a subspace."""


class PreconditionError(LassError, ValueError):
    """A mathematical precondition fails (not a subalgebra, not flat, not an ideal, ...)."""


class InternalConsistencyError(LassError, RuntimeError):
    """The engine produced something its own invariants forbid."""


@dataclass(frozen=True)
class Verdict:
    ok: bool
    message: str = ""
    site: Any = None

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        out = {"ok": self.ok, "message": self.message}
        if self.site is not None:
            out["site"] = _jsonable(self.site)
        return out

    @classmethod
    def passed(cls, message: str = "ok") -> "Verdict":
        return cls(True, message)

    @classmethod
    def failed(cls, message: str, site: Any = None) -> "Verdict":
        return cls(False, message, site)


def _jsonable(x):
    if isinstance(x, (list, tuple)):
        return [_jsonable(y) for y in x]
    if isinstance(x, (int, str, bool)) or x is None:
        return x
    return str(x)
