"""Spectral sequence of a finite filtered cochain complex.

Pages are computed from the closed formula

    Z_r^{p,q} = F^p C^{p+q} ∩ d^{-1}(F^{p+r} C^{p+q+1}),   Z_{-1}^{p,q} = F^p C^{p+q}
    E_r^{p,q} = Z_r^{p,q} / (Z_{r-1}^{p+1,q-1} + d Z_{r-1}^{p-r+1,q+r-2})

and never by iterating cohomology; ``turn_page_check`` compares the two.
Internally everything is keyed by (r, p, n) with n = p + q the total degree.
"""

from __future__ import annotations

import os
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .cochain import FilteredComplex, graded_H
from .errors import InternalConsistencyError, Verdict
from .exactq import (
    ExactMatrix,
    QuotientSpace,
    Subspace,
    apply_to_subspace,
    image,
    intersect,
    kernel,
    preimage,
    quotient,
    subspace_sum,
)


@dataclass(frozen=True)
class PageEntry:
    r: int
    p: int
    q: int
    space: QuotientSpace

    @property
    def dim(self) -> int:
        return self.space.dim


@dataclass
class Page:
    r: int
    entries: dict = field(default_factory=dict)        # (p, q) -> PageEntry
    differentials: dict = field(default_factory=dict)  # (p, q) -> ExactMatrix into (p+r, q-r+1)

    def dims(self) -> dict:
        return {pq: e.dim for pq, e in self.entries.items()}

    def ranks(self) -> dict:
        return {pq: m.rank() for pq, m in self.differentials.items()}

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "entries": [{"p": p, "q": q, "dim": e.dim}
                        for (p, q), e in sorted(self.entries.items()) if e.dim],
            "differentials": [{"from": [p, q], "to": [p + self.r, q - self.r + 1], "rank": m.rank()}
                              for (p, q), m in sorted(self.differentials.items()) if not m.is_zero()],
        }


def _thread_count() -> int:
    try:
        return max(1, int(os.environ.get("LASS_THREADS", "1")))
    except ValueError:
        return 1


class SpectralSequence:
    """Lazy, memoized pages of a filtered complex."""

    def __init__(self, f: FilteredComplex):
        self.f = f
        self.c = f.complex
        self._z: dict = {}
        self._e: dict = {}
        self._lock = threading.Lock()

    # window

    @property
    def p_max(self) -> int:
        return self.f.length

    @property
    def n_max(self) -> int:
        return self.c.top

    def cells(self):
        """All (p, n) with a possibly nonzero entry."""
        return [(p, n) for n in range(self.n_max + 1) for p in range(self.p_max + 1)]

    def _memo(self, table: dict, key, compute):
        with self._lock:
            if key in table:
                return table[key]
        value = compute()
        with self._lock:
            return table.setdefault(key, value)

    # Z and E

    def z(self, r: int, p: int, n: int) -> Subspace:
        if r < -1:
            raise ValueError("r must be >= -1")
        if r == -1:
            return self.f.F(p, n)

        def compute():
            fp = self.f.F(p, n)
            if fp.dim == 0:
                return fp
            return intersect(fp, preimage(self.c.d(n), self.f.F(p + r, n + 1)))

        return self._memo(self._z, (r, p, n), compute)

    def boundary_part(self, r: int, p: int, n: int) -> Subspace:
        """Z_{r-1}^{p+1,q-1} + d Z_{r-1}^{p-r+1,q+r-2}."""
        lower = self.z(r - 1, p + 1, n)
        src = self.z(r - 1, p - r + 1, n - 1)
        if self.c.dim(n - 1) == 0:
            return lower
        return subspace_sum(lower, apply_to_subspace(self.c.d(n - 1), src))

    def entry(self, r: int, p: int, n: int) -> PageEntry:
        if r < 0:
            raise ValueError("pages start at r = 0")

        def compute():
            space = quotient(self.z(r, p, n), self.boundary_part(r, p, n))
            return PageEntry(r, p, n - p, space)

        return self._memo(self._e, (r, p, n), compute)

    def differential(self, r: int, p: int, n: int, representatives: ExactMatrix | None = None) -> ExactMatrix:
        """Matrix of d_r: E_r^{p, n-p} -> E_r^{p+r, n+1-p-r} in quotient coordinates.

        ``representatives`` (columns) may replace the canonical ones, to probe
        well-definedness.
        """
        src = self.entry(r, p, n).space
        tgt = self.entry(r, p + r, n + 1).space
        reps = src.representatives if representatives is None else representatives
        d = self.c.d(n)
        target_z = tgt.numerator
        cols = []
        for j in range(reps.cols):
            image_vec = d.apply(reps.column(j))
            if not target_z.contains(image_vec):
                raise InternalConsistencyError(
                    f"d of a representative of E_{r}^{{{p},{n - p}}} leaves Z_{r}^{{{p + r},{n + 1 - p - r}}}")
            cols.append(tgt.project(image_vec))
        return ExactMatrix.from_columns(cols, tgt.dim)

    def page(self, r: int, threads: int | None = None) -> Page:
        threads = _thread_count() if threads is None else threads
        cells = self.cells()
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                list(pool.map(lambda pn: self.entry(r, *pn), cells))
        pg = Page(r)
        for p, n in cells:
            pg.entries[(p, n - p)] = self.entry(r, p, n)
        for p, n in cells:
            if n + 1 <= self.n_max and p + r <= self.p_max:
                pg.differentials[(p, n - p)] = self.differential(r, p, n)
            else:
                pg.differentials[(p, n - p)] = ExactMatrix.zeros(0, self.entry(r, p, n).dim)
        return pg

    def dims(self, r: int) -> dict:
        return {(p, n - p): self.entry(r, p, n).dim for p, n in self.cells()}

    def nonzero_dims(self, r: int) -> dict:
        return {pq: d for pq, d in self.dims(r).items() if d}

    def ranks(self, r: int) -> dict:
        """Nonzero ranks of d_r keyed by source (p, q)."""
        out = {}
        for p, n in self.cells():
            if n + 1 > self.n_max or p + r > self.p_max:
                continue
            if self.entry(r, p, n).dim == 0 or self.entry(r, p + r, n + 1).dim == 0:
                continue
            k = self.differential(r, p, n).rank()
            if k:
                out[(p, n - p)] = k
        return out

    # checks

    def turn_page_check(self, r: int) -> Verdict:
        """dim E_{r+1} from the Z/B formula against the cohomology of (E_r, d_r)."""
        for p, n in self.cells():
            e = self.entry(r, p, n)
            if p + r <= self.p_max and n + 1 <= self.n_max:
                out_rank = self.differential(r, p, n).rank()
            else:
                out_rank = 0
            if p - r >= 0 and n - 1 >= 0:
                in_rank = self.differential(r, p - r, n - 1).rank()
            else:
                in_rank = 0
            h = e.dim - out_rank - in_rank
            nxt = self.entry(r + 1, p, n).dim
            if h != nxt:
                return Verdict.failed(
                    f"r={r}, (p,q)=({p},{n - p}): H(E_r,d_r) has dim {h}, E_(r+1) has dim {nxt}",
                    site=(r, p, n - p))
        return Verdict.passed(f"E_{r + 1} = H(E_{r}, d_{r})")

    def d_squared_check(self, r: int) -> Verdict:
        for p, n in self.cells():
            if p + 2 * r > self.p_max or n + 2 > self.n_max:
                continue
            first = self.differential(r, p, n)
            second = self.differential(r, p + r, n + 1)
            if not (second @ first).is_zero():
                return Verdict.failed(f"d_{r}∘d_{r} ≠ 0 at (p,q)=({p},{n - p})", site=(r, p, n - p))
        return Verdict.passed(f"d_{r}∘d_{r} = 0")

    def well_defined_check(self, r: int, rng) -> Verdict:
        """Perturb representatives by random denominator elements; d_r must not change."""
        for p, n in self.cells():
            if p + r > self.p_max or n + 1 > self.n_max:
                continue
            src = self.entry(r, p, n).space
            if src.dim == 0:
                continue
            den = src.denominator
            cols = []
            for j in range(src.dim):
                v = list(src.representative(j))
                for b in den.vectors:
                    c = rng.randint(-3, 3)
                    if c:
                        v = [x + c * y for x, y in zip(v, b)]
                cols.append(v)
            perturbed = ExactMatrix.from_columns(cols, src.ambient_dim)
            if self.differential(r, p, n, perturbed) != self.differential(r, p, n):
                return Verdict.failed(f"d_{r} depends on the representative at ({p},{n - p})",
                                      site=(r, p, n - p))
        return Verdict.passed(f"d_{r} well defined")

    def stabilization(self) -> int:
        """Smallest r* >= 1 with d_s = 0 for every s >= r*.

        For s > length every d_s lands in F^{>length} = 0, so only
        s = 1..length need scanning.
        """
        last_nonzero = 0
        for s in range(1, self.p_max + 1):
            if self.ranks(s):
                last_nonzero = s
        return last_nonzero + 1

    def e_infinity(self) -> dict:
        return self.dims(self.stabilization())

    def convergence_check(self) -> Verdict:
        einf = self.e_infinity()
        for n in range(self.n_max + 1):
            graded = graded_H(self.f, n)
            for p in range(self.p_max + 1):
                want = graded[p] if p < len(graded) else 0
                got = einf.get((p, n - p), 0)
                if got != want:
                    return Verdict.failed(
                        f"degree {n}, p={p}: E_inf has dim {got}, gr_p H^{n} has dim {want}",
                        site=(p, n - p))
        return Verdict.passed("E_inf matches the associated graded of H")

    def table(self, r_max: int | None = None) -> dict:
        """Dimension tables for pages 0..r_max (default: the stabilization page)."""
        r_max = self.stabilization() if r_max is None else r_max
        return {r: self.nonzero_dims(r) for r in range(r_max + 1)}


def engine(f: FilteredComplex) -> SpectralSequence:
    """The memoizing engine attached to ``f``."""
    if f._engine is None:
        f._engine = SpectralSequence(f)
    return f._engine


def z_space(f: FilteredComplex, r: int, p: int, q: int) -> Subspace:
    return engine(f).z(r, p, p + q)


def e_entry(f: FilteredComplex, r: int, p: int, q: int) -> PageEntry:
    return engine(f).entry(r, p, p + q)


def d_r_matrix(f: FilteredComplex, r: int, p: int, q: int) -> ExactMatrix:
    if r < 1:
        raise ValueError("d_r_matrix is for r >= 1; use d0_matrix for the degree-internal d_0")
    return engine(f).differential(r, p, p + q)


def d0_matrix(f: FilteredComplex, p: int, q: int) -> ExactMatrix:
    return engine(f).differential(0, p, p + q)


def page(f: FilteredComplex, r: int) -> Page:
    return engine(f).page(r)


def turn_page_check(f: FilteredComplex, r: int) -> Verdict:
    return engine(f).turn_page_check(r)


def stabilization(f: FilteredComplex) -> int:
    return engine(f).stabilization()


def convergence_check(f: FilteredComplex) -> Verdict:
    return engine(f).convergence_check()


def render_grid(dims: dict, p_max: int, q_min: int, q_max: int, title: str = "") -> str:
    """ASCII grid: rows are q (descending), columns are p (ascending)."""
    width = max([3] + [len(str(v)) for v in dims.values()] + [len(f"p={p_max}")]) + 1
    lines = [title] if title else []
    for q in range(q_max, q_min - 1, -1):
        cells = []
        for p in range(p_max + 1):
            v = dims.get((p, q), 0)
            cells.append((str(v) if v else ".").rjust(width))
        lines.append(f"q={q:>3} |" + "".join(cells))
    lines.append("      +" + "-" * (width * (p_max + 1)))
    lines.append("       " + "".join(f"p={p}".rjust(width) for p in range(p_max + 1)))
    return "\n".join(lines)


def render_ss(ss: SpectralSequence, r_max: int) -> str:
    q_min = -ss.p_max
    q_max = ss.n_max
    blocks = []
    for r in range(r_max + 1):
        dims = ss.dims(r)
        qs = [q for (p, q), v in dims.items() if v]
        lo, hi = (min(qs), max(qs)) if qs else (0, 0)
        blocks.append(render_grid(dims, ss.p_max, max(lo, q_min), min(hi, q_max), f"E_{r}:"))
        if r >= 1:
            for (p, q), k in sorted(ss.ranks(r).items()):
                blocks.append(f"  d_{r}: ({p},{q})→({p + r},{q - r + 1}): rank {k}")
    return "\n".join(blocks)
