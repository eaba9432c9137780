"""Chain complexes, homology reports and homology bases.

A :class:`ChainComplex` stores one boundary matrix per degree,
``boundaries[k] : C_k -> C_{k-1}``.  Complexes built from large models may be
truncated: only cells up to some dimension are generated, in which case
homology is reliable through ``complete_through`` (one below the top
generated degree).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Any, Sequence

from .linalg import SparseMatrix, rank_rational, smith_normal_form

THREADS_ENV = "ORBICONF_THREADS"


def _thread_count() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def _rank_job(args):
    matrix, integral = args
    if integral:
        snf = smith_normal_form(matrix)
        return snf.rank, snf.torsion
    return rank_rational(matrix), None


@dataclass(frozen=True)
class HomologyReport:
    """Per-degree Betti numbers, plus torsion when computed over the integers."""

    betti: tuple
    coefficients: str = "rational"
    torsion: tuple | None = None
    n: int | None = None
    stratum: Any = None
    chain_dims: tuple | None = field(default=None, compare=False)

    def to_dict(self) -> dict:
        out = {
            "n": self.n,
            "coefficients": self.coefficients,
            "betti": list(self.betti),
            "torsion": [list(t) for t in self.torsion] if self.torsion is not None else None,
        }
        if self.stratum is not None:
            out["stratum"] = self.stratum
        return out

    @property
    def euler(self):
        return sum((-1) ** k * b for k, b in enumerate(self.betti))


class ChainComplex:
    """Finite chain complex with exact boundary matrices.

    ``bases[k]`` labels the basis of ``C_k`` (simplices, orbit representatives,
    product cells...).  ``top`` is the highest generated degree.
    """

    def __init__(self, bases: Sequence[Sequence], boundaries: Sequence[SparseMatrix] | None = None,
                 complete_through: int | None = None):
        self.bases = [list(b) for b in bases]
        dims = [len(b) for b in self.bases]
        if boundaries is None:
            boundaries = [SparseMatrix.zero(0, d) if k == 0 else SparseMatrix.zero(dims[k - 1], d)
                          for k, d in enumerate(dims)]
        boundaries = list(boundaries)
        if len(boundaries) != len(dims):
            raise ValueError("need one boundary matrix per degree")
        for k, d in enumerate(boundaries):
            want = (dims[k - 1] if k else 0, dims[k])
            if d.shape != want:
                raise ValueError(f"boundary {k} has shape {d.shape}, expected {want}")
        self.boundaries = boundaries
        self.dims = tuple(dims)
        top = len(dims) - 1
        self.complete_through = top if complete_through is None else min(complete_through, top)
        self._index: list[dict] | None = None
        self._ranks: dict = {}

    @property
    def top(self):
        return len(self.dims) - 1

    def index(self, k) -> dict:
        if self._index is None:
            self._index = [{c: i for i, c in enumerate(b)} for b in self.bases]
        return self._index[k]

    def boundary(self, k) -> SparseMatrix:
        """``∂_k``; zero maps outside the generated range."""
        if 0 <= k <= self.top:
            return self.boundaries[k]
        if k == self.top + 1:
            return SparseMatrix.zero(self.dims[self.top] if self.dims else 0, 0)
        return SparseMatrix.zero(0, 0)

    def check(self) -> bool:
        """True iff every composite ``∂_{k-1} ∘ ∂_k`` vanishes exactly."""
        return all((self.boundaries[k - 1] @ self.boundaries[k]).is_zero() for k in range(2, self.top + 1))

    def euler_characteristic(self):
        return sum((-1) ** k * d for k, d in enumerate(self.dims))

    def _compute_ranks(self, degrees, integral):
        todo = [k for k in degrees if (k, integral) not in self._ranks and 1 <= k <= self.top]
        jobs = [(self.boundaries[k], integral) for k in todo]
        threads = _thread_count()
        if threads > 1 and len(jobs) > 1:
            from concurrent.futures import ProcessPoolExecutor
            with ProcessPoolExecutor(max_workers=min(threads, len(jobs))) as pool:
                results = list(pool.map(_rank_job, jobs))
        else:
            results = [_rank_job(j) for j in jobs]
        for k, res in zip(todo, results):
            self._ranks[(k, integral)] = res

    def _rank(self, k, integral=False):
        if k < 1 or k > self.top:
            return 0, ()
        if (k, integral) not in self._ranks:
            self._compute_ranks([k], integral)
        r, tors = self._ranks[(k, integral)]
        return r, tors or ()

    def homology(self, ring: str = "rational", max_degree: int | None = None) -> HomologyReport:
        """Betti numbers (and torsion over the integers) through ``max_degree``."""
        integral = ring in ("integral", "integers", "Z")
        if not integral and ring not in ("rational", "rationals", "Q"):
            raise ValueError(f"unknown ring {ring!r}")
        hi = self.complete_through if max_degree is None else max_degree
        if hi > self.complete_through:
            raise ValueError(f"homology requested through degree {hi} but the complex is only "
                             f"complete through degree {self.complete_through}")
        self._compute_ranks(range(1, hi + 2), integral)
        betti = []
        torsion = []
        for k in range(hi + 1):
            rk, _ = self._rank(k, integral)
            rk1, tors = self._rank(k + 1, integral)
            betti.append(self.dims[k] - rk - rk1)
            torsion.append(tuple(tors))
        return HomologyReport(
            betti=tuple(betti),
            coefficients="integral" if integral else "rational",
            torsion=tuple(torsion) if integral else None,
            chain_dims=self.dims[: hi + 1],
        )

    def betti(self, max_degree=None) -> tuple:
        return self.homology("rational", max_degree).betti

    def __repr__(self):
        return f"ChainComplex(dims={self.dims}, complete_through={self.complete_through})"


# ---------------------------------------------------------------------------
# homology bases for computing induced maps


def _reduce_columns(matrix: SparseMatrix, track: bool):
    """Column reduction by lowest nonzero row, integer fraction-free.

    Returns ``(reduced, transforms, low_to_col)``; ``transforms[j]`` expresses
    reduced column ``j`` in the original columns (only when ``track``).
    """
    reduced = []
    transforms = []
    low_to_col: dict[int, int] = {}
    for j in range(matrix.cols):
        col = matrix.column(j)
        v = {j: 1} if track else None
        while col:
            low = max(col)
            i = low_to_col.get(low)
            if i is None:
                break
            other = reduced[i]
            a, b = other[low], col[low]
            col = _combine(col, a, other, -b)
            if track:
                v = _combine(v, a, transforms[i], -b)
            g = 0
            for x in col.values():
                g = gcd(g, x)
            if track:
                for x in v.values():
                    g = gcd(g, x)
            if g > 1:
                col = {r: x // g for r, x in col.items()}
                if track:
                    v = {r: x // g for r, x in v.items()}
        if col:
            low_to_col[max(col)] = j
        reduced.append(col)
        transforms.append(v)
    return reduced, transforms, low_to_col


def _combine(x: dict, a, y: dict, b) -> dict:
    """``a*x + b*y`` for sparse vectors."""
    out = {r: a * v for r, v in x.items()} if a != 1 else dict(x)
    for r, v in y.items():
        s = out.get(r, 0) + b * v
        if s:
            out[r] = s
        else:
            out.pop(r, None)
    return out


class HomologyBasis:
    """A basis of ``H_k`` over the rationals with a coordinate function.

    Generators are integer cycles; ``coordinates`` expresses any cycle in
    terms of them modulo boundaries.
    """

    def __init__(self, complex_: ChainComplex, k: int):
        if k > complex_.complete_through:
            raise ValueError(f"degree {k} exceeds complete range {complex_.complete_through}")
        self.k = k
        self.dim_chains = complex_.dims[k] if k <= complex_.top else 0
        if k >= 1:
            red, trans, _ = _reduce_columns(complex_.boundaries[k], track=True)
            zero_cols = [j for j, c in enumerate(red) if not c]
            self._cycles = {j: trans[j] for j in zero_cols}
        else:
            self._cycles = {j: {j: 1} for j in range(self.dim_chains)}
        up = complex_.boundary(k + 1)
        bred, _, blow = _reduce_columns(up, track=False)
        self._bcols = {low: bred[j] for low, j in blow.items()}
        self.generator_index = [j for j in sorted(self._cycles) if j not in self._bcols]
        self._gen_pos = {j: i for i, j in enumerate(self.generator_index)}
        self.generators = [self._cycles[j] for j in self.generator_index]

    @property
    def rank(self):
        return len(self.generators)

    def coordinates(self, chain: dict) -> list:
        """Coordinates of the class of a cycle (raises if not a cycle)."""
        z = {r: Fraction(v) for r, v in chain.items() if v}
        out = [Fraction(0)] * self.rank
        while z:
            low = max(z)
            if low in self._bcols:
                u = self._bcols[low]
            elif low in self._gen_pos:
                u = self._cycles[low]
                out[self._gen_pos[low]] += z[low] / u[low]
            else:
                raise ValueError("chain is not a cycle")
            f = z[low] / u[low]
            for r, v in u.items():
                s = z.get(r, 0) - f * v
                if s:
                    z[r] = s
                else:
                    z.pop(r, None)
        return out


def induced_matrix(source: HomologyBasis, target: HomologyBasis, chain_map) -> list[list[Fraction]]:
    """Matrix (rows = target generators) of a chain map on homology.

    ``chain_map`` sends a source basis index to a sparse target chain.
    """
    cols = []
    for gen in source.generators:
        image: dict = {}
        for j, c in gen.items():
            for t, v in chain_map(j).items():
                s = image.get(t, 0) + c * v
                if s:
                    image[t] = s
                else:
                    image.pop(t, None)
        cols.append(target.coordinates(image))
    return [[cols[j][i] for j in range(source.rank)] for i in range(target.rank)]
