"""Finite cochain complexes over Q and descending filtrations by subcomplexes."""

from __future__ import annotations

from typing import Sequence

from .errors import DimensionError, StructuralError, Verdict
from .exactq import (
    ExactMatrix,
    QuotientSpace,
    Subspace,
    apply_to_subspace,
    image,
    intersect,
    kernel,
    quotient,
    subspace_sum,
)


class GradedSpace:
    """Dimensions and basis labels in degrees 0..top; zero elsewhere."""

    def __init__(self, dims: Sequence[int], labels: Sequence[Sequence[str]] | None = None):
        self.dims = tuple(int(d) for d in dims)
        if any(d < 0 for d in self.dims):
            raise StructuralError("negative dimension")
        if labels is None:
            labels = [[f"c{n}_{i}" for i in range(d)] for n, d in enumerate(self.dims)]
        self.labels = tuple(tuple(ls) for ls in labels)
        if len(self.labels) != len(self.dims):
            raise StructuralError("one label list per degree required")
        for n, (d, ls) in enumerate(zip(self.dims, self.labels)):
            if len(ls) != d:
                raise StructuralError(f"degree {n}: {len(ls)} labels for dimension {d}")
            if len(set(ls)) != len(ls):
                raise StructuralError(f"degree {n}: duplicate basis labels")

    @property
    def top(self) -> int:
        return len(self.dims) - 1

    def dim(self, n: int) -> int:
        return self.dims[n] if 0 <= n < len(self.dims) else 0


class CochainComplex:
    """C^0 -> C^1 -> ... -> C^top with ``differentials[n]: C^n -> C^{n+1}``."""

    def __init__(self, dims: Sequence[int], differentials: Sequence[ExactMatrix],
                 labels: Sequence[Sequence[str]] | None = None):
        self.spaces = GradedSpace(dims, labels)
        diffs = tuple(differentials)
        if len(diffs) != max(len(self.spaces.dims) - 1, 0):
            raise StructuralError(
                f"{len(diffs)} differentials for {len(self.spaces.dims)} degrees")
        for n, d in enumerate(diffs):
            if d.shape != (self.dim(n + 1), self.dim(n)):
                raise StructuralError(
                    f"differential in degree {n} has shape {d.shape}, "
                    f"expected {(self.dim(n + 1), self.dim(n))}")
        self.differentials = diffs

    @property
    def top(self) -> int:
        return self.spaces.top

    @property
    def dims(self) -> tuple:
        return self.spaces.dims

    def dim(self, n: int) -> int:
        return self.spaces.dim(n)

    def labels(self, n: int) -> tuple:
        return self.spaces.labels[n] if 0 <= n <= self.top else ()

    def d(self, n: int) -> ExactMatrix:
        """The differential C^n -> C^{n+1}, zero outside the window."""
        if 0 <= n < len(self.differentials):
            return self.differentials[n]
        return ExactMatrix.zeros(self.dim(n + 1), self.dim(n))

    def to_json(self) -> dict:
        return {
            "dims": list(self.dims),
            "labels": [list(ls) for ls in self.spaces.labels],
            "differentials": [d.to_json() for d in self.differentials],
        }

    @classmethod
    def from_json(cls, data: dict) -> "CochainComplex":
        dims = data["dims"]
        diffs = [ExactMatrix.from_rows(m, cols=dims[n]) for n, m in enumerate(data["differentials"])]
        return cls(dims, diffs, data.get("labels"))


class FilteredComplex:
    """A cochain complex with F^0 = C ⊇ F^1 ⊇ ... ⊇ F^{length+1} = 0.

    ``levels[n][p]`` is F^p C^n for 0 <= p < len(levels[n]); beyond that the
    filtration is zero, and p <= 0 always means the whole space.
    """

    def __init__(self, complex: CochainComplex, levels: Sequence[Sequence[Subspace]]):
        self.complex = complex
        lv = []
        for n in range(complex.top + 1):
            seq = list(levels[n]) if n < len(levels) else []
            for p, s in enumerate(seq):
                if s.ambient_dim != complex.dim(n):
                    raise DimensionError(f"F^{p} C^{n} lives in the wrong ambient dimension")
            # trailing zeros carry no information
            while seq and seq[-1].dim == 0:
                seq.pop()
            lv.append(tuple(seq))
        self.levels = tuple(lv)
        self._engine = None

    @property
    def length(self) -> int:
        """Largest p with F^p nonzero in some degree (0 for the trivial filtration)."""
        return max((len(seq) - 1 for seq in self.levels if seq), default=0)

    def F(self, p: int, n: int) -> Subspace:
        dim = self.complex.dim(n)
        if p <= 0:
            return Subspace.full(dim)
        seq = self.levels[n] if 0 <= n < len(self.levels) else ()
        return seq[p] if p < len(seq) else Subspace.zero(dim)

    @classmethod
    def trivial(cls, complex: CochainComplex) -> "FilteredComplex":
        return cls(complex, [[Subspace.full(complex.dim(n))] for n in range(complex.top + 1)])

    def to_json(self) -> dict:
        data = self.complex.to_json()
        data["filtration"] = [[s.to_json()["basis"] for s in seq] for seq in self.levels]
        return data

    @classmethod
    def from_json(cls, data: dict) -> "FilteredComplex":
        c = CochainComplex.from_json(data)
        levels = [[Subspace.span(b, c.dim(n)) for b in seq]
                  for n, seq in enumerate(data.get("filtration", []))]
        return cls(c, levels)


def check_complex(c: CochainComplex) -> Verdict:
    for n in range(c.top - 1):
        if not (c.d(n + 1) @ c.d(n)).is_zero():
            return Verdict.failed(f"d∘d ≠ 0 starting in degree {n}", site=n)
    return Verdict.passed("d∘d = 0 in every degree")


def check_filtration(f: FilteredComplex) -> Verdict:
    c = f.complex
    for n in range(c.top + 1):
        if f.levels[n] and f.levels[n][0] != Subspace.full(c.dim(n)):
            return Verdict.failed(f"F^0 C^{n} is not the whole space", site=(0, n))
        for p in range(1, f.length + 2):
            if not f.F(p, n).issubspace(f.F(p - 1, n)):
                return Verdict.failed(f"F^{p} C^{n} is not contained in F^{p - 1} C^{n}", site=(p, n))
            if not apply_to_subspace(c.d(n), f.F(p, n)).issubspace(f.F(p, n + 1)):
                return Verdict.failed(f"d does not preserve F^{p} in degree {n}", site=(p, n))
    return Verdict.passed("nested and d-stable")


def _require_complex(c: CochainComplex) -> None:
    v = check_complex(c)
    if not v:
        raise StructuralError(v.message)


def cocycles(c: CochainComplex, n: int) -> Subspace:
    return kernel(c.d(n))


def coboundaries(c: CochainComplex, n: int) -> Subspace:
    return image(c.d(n - 1))


def cohomology(c: CochainComplex, n: int, *, validate: bool = True) -> QuotientSpace:
    if validate:
        _require_complex(c)
    return quotient(cocycles(c, n), coboundaries(c, n))


def betti(c: CochainComplex) -> tuple:
    _require_complex(c)
    return tuple(cohomology(c, n, validate=False).dim for n in range(c.top + 1))


def induced_filtration_on_H(f: FilteredComplex, n: int) -> list:
    """dim F^p H^n for p = 0..length+1, where F^p H^n = image(H^n(F^p C) -> H^n(C))."""
    c = f.complex
    z = cocycles(c, n)
    b = coboundaries(c, n)
    return [subspace_sum(intersect(z, f.F(p, n)), b).dim - b.dim for p in range(f.length + 2)]


def graded_H(f: FilteredComplex, n: int) -> list:
    """Successive quotients F^p H^n / F^{p+1} H^n, p = 0..length."""
    dims = induced_filtration_on_H(f, n)
    return [dims[p] - dims[p + 1] for p in range(len(dims) - 1)]
