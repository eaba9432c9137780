"""Stabilisation, forget and transfer maps on configuration-space homology.

All maps are built as chain maps between cellular deleted products written in
coinvariant coordinates (see :mod:`orbiconf.config`), then pushed to rational
homology through :class:`~orbiconf.chains.HomologyBasis`.

* ``p_*`` (block coinvariants -> full coinvariants) merges the two blocks.
* ``p^!`` sends a cell to the sum over the ``C(n, m)`` ways of choosing which
  coordinates form the first block; this is the finite-group transfer.
* ``forget`` keeps the first block and kills cells whose dropped
  coordinates have positive dimension (collapsed images).
* ``t_{n,m} = forget ∘ p^!``.
* ``s_n`` adds the base vertex ``v*`` after moving a configuration into the
  nested copy; the move is the inverse of the inclusion on homology, which is
  checked to be an isomorphism.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, factorial
from typing import Callable

from .chains import HomologyBasis, induced_matrix
from .config import Coefficients, DeletedProductComplex, compact_support_pair, conf_homology, sort_blocks, stratum_model
from .errors import PreconditionError
from .linalg import dense_rank
from .orbifold import GlobalQuotientOrbifold, orientation_character, singular_vertices


# ---------------------------------------------------------------------------
# matrices on homology


def _zeros(rows, cols):
    return [[Fraction(0)] * cols for _ in range(rows)]


def _identity(size, scale=1):
    return [[Fraction(scale if i == j else 0) for j in range(size)] for i in range(size)]


def _matmul(a, b, rows, inner, cols):
    out = _zeros(rows, cols)
    for i in range(rows):
        ai = a[i]
        oi = out[i]
        for t in range(inner):
            x = ai[t]
            if x:
                bt = b[t]
                for j in range(cols):
                    if bt[j]:
                        oi[j] += x * bt[j]
    return out


def _inverse(a, size):
    """Exact inverse of a square Fraction matrix, or ``None`` if singular."""
    m = [list(row) + [Fraction(int(i == j)) for j in range(size)] for i, row in enumerate(a)]
    for c in range(size):
        piv = next((r for r in range(c, size) if m[r][c]), None)
        if piv is None:
            return None
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for r in range(size):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [row[size:] for row in m]


def _json_number(x: Fraction):
    return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass
class InducedMap:
    """Per-degree matrices of a map ``H_*(source) -> H_*(target)`` over Q.

    ``matrices[k]`` has ``target_dims[k]`` rows and ``source_dims[k]`` columns.
    """

    name: str
    source: str
    target: str
    source_dims: dict
    target_dims: dict
    matrices: dict = field(default_factory=dict)

    @property
    def degrees(self):
        return sorted(self.matrices)

    def shape(self, k):
        return (self.target_dims[k], self.source_dims[k])

    def __matmul__(self, other: "InducedMap") -> "InducedMap":
        """``self ∘ other`` on the degrees both know."""
        if other.target != self.source:
            raise ValueError(f"cannot compose {self.name} after {other.name}")
        mats = {}
        for k in self.matrices:
            if k not in other.matrices:
                continue
            mats[k] = _matmul(self.matrices[k], other.matrices[k], self.target_dims[k],
                              other.target_dims[k], other.source_dims[k])
        return InducedMap(f"{self.name}∘{other.name}", other.source, self.target,
                          {k: other.source_dims[k] for k in mats}, {k: self.target_dims[k] for k in mats}, mats)

    def _check_parallel(self, other):
        if (self.source, self.target) != (other.source, other.target):
            raise ValueError(f"{self.name} and {other.name} are not parallel")

    def __add__(self, other: "InducedMap") -> "InducedMap":
        self._check_parallel(other)
        mats = {}
        for k in self.matrices:
            if k in other.matrices:
                mats[k] = [[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(self.matrices[k], other.matrices[k])]
        return InducedMap(f"({self.name}+{other.name})", self.source, self.target,
                          {k: self.source_dims[k] for k in mats}, {k: self.target_dims[k] for k in mats}, mats)

    def scale(self, c) -> "InducedMap":
        mats = {k: [[c * x for x in row] for row in m] for k, m in self.matrices.items()}
        return InducedMap(f"{c}·{self.name}", self.source, self.target, dict(self.source_dims),
                          dict(self.target_dims), mats)

    def rank(self, k) -> int:
        return dense_rank(self.matrices[k]) if self.matrices[k] and self.shape(k)[1] else 0

    def equal_in(self, other: "InducedMap", k) -> bool:
        return self.matrices[k] == other.matrices[k]

    def matrix_json(self, k):
        return [[_json_number(x) for x in row] for row in self.matrices[k]]

    @classmethod
    def identity(cls, name, dims: dict, scale=1):
        return cls(name, name, name, dict(dims), dict(dims), {k: _identity(d, scale) for k, d in dims.items()})


# ---------------------------------------------------------------------------
# cached complexes and bases


class _ZeroBasis:
    """Basis of a homology group known to vanish (degree above every cell)."""

    rank = 0
    generators: list = []

    def coordinates(self, chain):
        return []


class MapContext:
    """Caches deleted products and homology bases for one orbifold.

    ``max_degree`` bounds the homology degrees used for maps (``None``: all).
    Only trivial rational coefficients are used here.
    """

    def __init__(self, X: GlobalQuotientOrbifold, max_degree: int | None = None):
        self.X = X
        self.max_degree = max_degree
        self._dp = {}
        self._hb = {}

    def conf(self, n, blocks=None, nested=False) -> DeletedProductComplex:
        blocks = tuple(blocks) if blocks is not None else ((n,) if n else ())
        key = (n, blocks, nested)
        if key not in self._dp:
            verts = None
            if nested:
                if self.X.stab is None:
                    raise PreconditionError("stabilisation data required")
                verts = self.X.stab.nested_vertices
            self._dp[key] = DeletedProductComplex(self.X, n, Coefficients.rational(), blocks, self.max_degree,
                                                  vertices=verts)
        return self._dp[key]

    def degrees(self, dp: DeletedProductComplex):
        """``(range, everything)``; ``everything`` means homology vanishes above the range."""
        C = dp.chain_complex()
        return range(0, C.complete_through + 1), C.complete_through >= dp.full_top

    def _common_degrees(self, sdp, tdp):
        (sr, sall), (tr, tall) = self.degrees(sdp), self.degrees(tdp)
        if sall and tall:
            hi = max(sr.stop, tr.stop)
            if self.max_degree is not None:
                hi = min(hi, self.max_degree + 1)
            return range(hi)
        if sall:
            return tr
        if tall:
            return sr
        return range(min(sr.stop, tr.stop))

    def basis(self, n, k, blocks=None, nested=False) -> HomologyBasis:
        dp = self.conf(n, blocks, nested)
        key = (n, dp.blocks, nested, k)
        if key not in self._hb:
            C = dp.chain_complex()
            if k > C.complete_through and C.complete_through >= dp.full_top:
                self._hb[key] = _ZeroBasis()
            else:
                self._hb[key] = HomologyBasis(C, k)
        return self._hb[key]

    def label(self, n, blocks=None, nested=False):
        dp = self.conf(n, blocks, nested)
        tag = "Conf_%d" % n
        if len(dp.blocks) > 1:
            tag += "[" + ",".join(map(str, dp.blocks)) + "]"
        if nested:
            tag += "(nested)"
        return tag

    def induced(self, name, src, tgt, cell_map: Callable[[tuple], dict]) -> InducedMap:
        """Induce a cellular chain map ``src -> tgt`` (each a ``(n, blocks, nested)`` key)."""
        sdp = self.conf(*src)
        tdp = self.conf(*tgt)
        degrees = self._common_degrees(sdp, tdp)
        mats, sd, td = {}, {}, {}
        for k in degrees:
            hs = self.basis(*src[:1], k, src[1], src[2])
            ht = self.basis(*tgt[:1], k, tgt[1], tgt[2])
            scells = sdp.cells[k] if k < len(sdp.cells) else []
            if not (hs.rank and ht.rank):
                mats[k], sd[k], td[k] = _zeros(ht.rank, hs.rank), hs.rank, ht.rank
                continue
            tindex = {c: i for i, c in enumerate(tdp.cells[k])} if k < len(tdp.cells) else {}

            def chain_map(j, scells=scells, tindex=tindex):
                out = {}
                for cell, v in cell_map(scells[j]).items():
                    i = tindex[cell]
                    out[i] = out.get(i, 0) + v
                return {i: v for i, v in out.items() if v}

            mats[k] = induced_matrix(hs, ht, chain_map)
            sd[k] = hs.rank
            td[k] = ht.rank
        return InducedMap(name, self.label(*src), self.label(*tgt), sd, td, mats)

    def dims(self, n, blocks=None, nested=False) -> dict:
        dp = self.conf(n, blocks, nested)
        return {k: self.basis(n, k, blocks, nested).rank for k in self.degrees(dp)[0]}

    # -- elementary maps ---------------------------------------------------

    def projection(self, n, m) -> InducedMap:
        """``p_* : H(Conf_n[m, n-m]) -> H(Conf_n)``."""
        self._check_m(n, m, allow_equal=False)
        dims = self.conf(n).orbits.dim

        def cell_map(cell):
            sign, merged = sort_blocks(cell, dims, (n,), 0)
            return {merged: sign}

        return self.induced(f"p_*[{n},{m}]", (n, (m, n - m), False), (n, (n,), False), cell_map)

    def transfer_shriek(self, n, m) -> InducedMap:
        """``p^! : H(Conf_n) -> H(Conf_n[m, n-m])``."""
        self._check_m(n, m, allow_equal=False)
        dims = self.conf(n).orbits.dim

        def cell_map(cell):
            out = {}
            for S in combinations(range(n), m):
                rest = [i for i in range(n) if i not in S]
                tup = tuple(cell[i] for i in S) + tuple(cell[i] for i in rest)
                sign, _ = sort_blocks(tup, dims, (n,), 0)
                key = tuple(sorted(tup[:m])) + tuple(sorted(tup[m:]))
                # both blocks of tup are already increasing
                out[key] = out.get(key, 0) + sign
            return out

        return self.induced(f"p^![{n},{m}]", (n, (n,), False), (n, (m, n - m), False), cell_map)

    def forget(self, n, m) -> InducedMap:
        """``H(Conf_n[m, n-m]) -> H(Conf_m)``, keeping the first block."""
        self._check_m(n, m, allow_equal=True)
        dims = self.conf(n).orbits.dim
        if m == n:
            return InducedMap.identity(self.label(n), self.dims(n))

        def cell_map(cell):
            if any(dims[o] for o in cell[m:]):
                return {}
            return {tuple(cell[:m]): 1}

        return self.induced(f"forget[{n},{m}]", (n, (m, n - m), False), (m, None, False), cell_map)

    def transfer(self, n, m) -> InducedMap:
        """``t_{n,m} = forget ∘ p^!`` evaluated as one chain map (``t_{n,n} = id``)."""
        self._check_m(n, m, allow_equal=True)
        if m == n:
            return InducedMap.identity(self.label(n), self.dims(n))
        dims = self.conf(n).orbits.dim

        def cell_map(cell):
            out = {}
            for S in combinations(range(n), m):
                if any(dims[cell[i]] for i in range(n) if i not in S):
                    continue
                key = tuple(cell[i] for i in S)
                out[key] = out.get(key, 0) + 1
            return out

        return self.induced(f"t[{n},{m}]", (n, None, False), (m, None, False), cell_map)

    def inclusion(self, n) -> InducedMap:
        """Nested copy into the full model, ``H(Conf_n(D)) -> H(Conf_n(K))``."""
        return self.induced(f"incl[{n}]", (n, None, True), (n, None, False), lambda c: {c: 1})

    def add_base_point(self, n) -> InducedMap:
        """``H(Conf_n(D)) -> H(Conf_{n+1}(K))`` adding the base vertex."""
        X = self.X
        if X.stab is None:
            raise PreconditionError("stabilisation data required")
        orbits = self.conf(n + 1).orbits
        star = orbits.orbit_of_vertex(X.stab.base_cell)
        dims = orbits.dim

        def cell_map(cell):
            sign, merged = sort_blocks(tuple(cell) + (star,), dims, (n + 1,), 0)
            return {merged: sign}

        return self.induced(f"add[{n}]", (n, None, True), (n + 1, None, False), cell_map)

    def stabilisation(self, n) -> InducedMap:
        """``s_n : H(Conf_n) -> H(Conf_{n+1})``."""
        if n < 0:
            raise PreconditionError("n must be non-negative")
        inc = self.inclusion(n)
        inv = {}
        for k, mat in inc.matrices.items():
            a, b = inc.shape(k)
            if a != b:
                raise PreconditionError(f"nested copy changes H_{k} of Conf_{n} ({b} -> {a}); "
                                        "use a finer subdivision or a larger model")
            i = _inverse(mat, a)
            if i is None:
                raise PreconditionError(f"nested copy does not carry H_{k} of Conf_{n} isomorphically")
            inv[k] = i
        back = InducedMap(f"incl[{n}]^-1", inc.target, inc.source, dict(inc.target_dims), dict(inc.source_dims), inv)
        s = self.add_base_point(n) @ back
        s.name = f"s[{n}]"
        return s

    def _check_m(self, n, m, allow_equal):
        if not 0 <= m <= n or (m == n and not allow_equal):
            raise PreconditionError(f"m = {m} out of range for n = {n}")


# ---------------------------------------------------------------------------
# public operations


def _context(X, ctx, max_degree=None):
    if ctx is not None:
        return ctx
    return MapContext(X, max_degree)


def stabilisation_map(X, n, ctx: MapContext | None = None, max_degree=None) -> InducedMap:
    if X.stab is None:
        raise PreconditionError("stabilisation needs StabilisationData")
    return _context(X, ctx, max_degree).stabilisation(n)


def forget_map(X, n, m, ctx: MapContext | None = None, max_degree=None) -> InducedMap:
    if not 1 <= m <= n:
        raise PreconditionError("forget_map needs 1 <= m <= n")
    return _context(X, ctx, max_degree).forget(n, m)


@dataclass
class Transfer:
    """``t_{n,m}`` together with the two halves ``p_*`` and ``p^!``."""

    t: InducedMap
    push: InducedMap
    shriek: InducedMap

    def degree_identity_holds(self) -> dict:
        """``p_* ∘ p^! == C(n, m)·id`` per degree."""
        comp = self.push @ self.shriek
        n, m = self.n, self.m
        out = {}
        for k in comp.degrees:
            ident = _identity(comp.source_dims[k], comb(n, m))
            out[k] = comp.matrices[k] == ident
        return out

    n: int = 0
    m: int = 0


def transfer(X, n, m, ctx: MapContext | None = None, max_degree=None) -> Transfer:
    if not 1 <= m < n:
        raise PreconditionError("transfer needs 1 <= m < n")
    c = _context(X, ctx, max_degree)
    return Transfer(c.transfer(n, m), c.projection(n, m), c.transfer_shriek(n, m), n, m)


def _verdict(relation, n, k, ok, lhs: InducedMap, rhs: InducedMap, **extra):
    out = {"relation": relation, "n": n, "degree": k, "pass": bool(ok),
           "lhs": lhs.matrix_json(k), "rhs": rhs.matrix_json(k)}
    out.update(extra)
    return out


def verify_dold(X: GlobalQuotientOrbifold, n: int, ctx: MapContext | None = None, max_degree=None) -> list[dict]:
    """The three transfer/stabilisation relations at level ``n`` as exact matrix identities.

    * ``t_n ∘ s_{n-1} = s_{n-2} ∘ t_{n-1} + id``
    * ``t_{n,m} ∘ s_{n-1} = s_{m-1} ∘ t_{n-1,m-1} + t_{n-1,m}`` for ``1 <= m < n``
    * ``t_{m+1} ∘ ... ∘ t_n = (n-m)! · t_{n,m}`` for ``1 <= m <= n-2``
    """
    if X.stab is None:
        raise PreconditionError("verify_dold needs StabilisationData")
    if n < 2:
        raise PreconditionError("verify_dold needs n >= 2")
    c = _context(X, ctx, max_degree)
    out = []
    s = {k: c.stabilisation(k) for k in range(0, n)}
    t1 = {k: c.transfer(k, k - 1) for k in range(1, n + 1)}

    lhs = t1[n] @ s[n - 1]
    rhs = s[n - 2] @ t1[n - 1] + InducedMap.identity(c.label(n - 1), c.dims(n - 1))
    for k in lhs.degrees:
        if k in rhs.matrices:
            out.append(_verdict(f"t_{n} s_{n-1} = s_{n-2} t_{n-1} + id", n, k, lhs.equal_in(rhs, k), lhs, rhs))

    for m in range(1, n):
        lhs = c.transfer(n, m) @ s[n - 1]
        rhs = s[m - 1] @ c.transfer(n - 1, m - 1) + c.transfer(n - 1, m)
        for k in lhs.degrees:
            if k in rhs.matrices:
                out.append(_verdict(f"t_{n},{m} s_{n-1} = s_{m-1} t_{n-1},{m-1} + t_{n-1},{m}", n, k,
                                    lhs.equal_in(rhs, k), lhs, rhs, m=m))

    for m in range(1, n - 1):
        chain = t1[n]
        for j in range(n - 1, m, -1):
            chain = t1[j] @ chain
        rhs = c.transfer(n, m).scale(factorial(n - m))
        for k in chain.degrees:
            if k in rhs.matrices:
                out.append(_verdict(f"t_{m+1}...t_{n} = {n-m}! t_{n},{m}", n, k, chain.equal_in(rhs, k),
                                    chain, rhs, m=m))
    return out


def verify_transfer_degree(X: GlobalQuotientOrbifold, n: int, ctx: MapContext | None = None, max_degree=None) -> list[dict]:
    """``p_* ∘ p^! = C(n, m)·id`` for every ``1 <= m < n`` and computed degree."""
    c = _context(X, ctx, max_degree)
    out = []
    for m in range(1, n):
        tr = transfer(X, n, m, c)
        comp = tr.push @ tr.shriek
        for k in comp.degrees:
            ident = InducedMap.identity(comp.source, {k: comp.source_dims[k]}, comb(n, m))
            out.append(_verdict(f"p_* p^! = C({n},{m}) id", n, k, comp.matrices[k] == ident.matrices[k],
                                comp, ident, m=m))
    return out


def verify_stability(X: GlobalQuotientOrbifold, n_max: int, strata: bool = True, ctx: MapContext | None = None) -> dict:
    """Compare ``dim H_k(Conf_n)`` and ``dim H_k(Conf_{n+1})`` for ``k <= n/2``.

    With stabilisation data the rank of ``s_n`` is checked in range, otherwise
    the rank of ``t_{n+1}``.  Per-stratum tables cover ``k <= (n-m)/2``.
    """
    rows = []
    notes = []
    if X.dimension < 2:
        notes.append("dimension < 2: stability hypotheses unmet, results are informational")
    top = n_max // 2
    c = ctx or MapContext(X, top)
    for n in range(1, n_max + 1):
        hi = n // 2
        hn = c.dims(n)
        hn1 = c.dims(n + 1)
        f = None
        if X.stab is not None:
            try:
                f = c.stabilisation(n)
                kind = "s"
            except PreconditionError as exc:
                notes.append(f"s_{n} unavailable ({exc}); ranks use t_{n + 1}")
        if f is None:
            f = c.transfer(n + 1, n)
            kind = "t"
        for k in range(hi + 1):
            a, b = hn[k], hn1[k]
            rk = f.rank(k)
            ok = a == b and rk == a
            rows.append({"n": n, "degree": k, "dim_n": a, "dim_n+1": b, "map": kind, "rank": rk, "pass": ok})
    table = {"rows": rows, "notes": notes, "pass": all(r["pass"] for r in rows)}
    if strata and singular_vertices(X):
        srows = []
        for n in range(1, n_max + 1):
            for m in range(0, n + 1):
                hi = (n - m) // 2
                a = stratum_model(X, n, m, max_degree=hi).homology(hi).betti
                b = stratum_model(X, n + 1, m, max_degree=hi).homology(hi).betti
                for k in range(hi + 1):
                    srows.append({"n": n, "m": m, "degree": k, "dim_n": a[k], "dim_n+1": b[k], "pass": a[k] == b[k]})
        table["strata"] = srows
        table["pass"] = table["pass"] and all(r["pass"] for r in srows)
    return table


def duality_check(X: GlobalQuotientOrbifold, n: int, closed: str = "diagonal") -> dict:
    """Trivial-isotypic ``H_k`` against ω_n-isotypic ``H^{nd-k}`` of the compact-support pair."""
    d = X.dimension
    top = n * d
    hom = conf_homology(X, n).betti
    hom = tuple(hom) + (0,) * (top + 1 - len(hom))
    omega = orientation_character(X, n)
    pair = compact_support_pair(X, n, closed)
    coh = pair.relative_cohomology(omega).betti
    coh = tuple(coh) + (0,) * (top + 1 - len(coh))
    rows = [{"degree": k, "homology": hom[k], "cohomology_degree": top - k, "cohomology": coh[top - k],
             "pass": hom[k] == coh[top - k]} for k in range(top + 1)]
    return {"n": n, "closed": closed, "rows": rows, "homology": list(hom), "cohomology": list(coh),
            "pass": all(r["pass"] for r in rows)}
