"""Equivariant deleted products modelling orbifold configuration spaces.

The working model of ``Conf_n([M/G])`` is the cellular deleted product of
``K = Sd^r(M)``: product cells ``σ_1 × ... × σ_n`` of simplices of ``K`` whose
G-orbits pairwise share no vertex.  Its barycentric subdivision is the full
subcomplex of ``product_complex(K, n)`` on orbit-disjoint tuples, available
through :meth:`DeletedProductComplex.simplicial` for cross-checks.

Rational homology of the configuration space is the χ-isotypic part of the
homology of the deleted product under ``Γ = G ≀ Σ_n``.  We work in
χ-coinvariants, which are isomorphic to the projector image over the
rationals.  A Γ-orbit of product cells is determined by the *set* of G-orbits
of its factors, so a basis cell is a tuple of orbit ids, increasing inside
each block of the acting block subgroup ``G ≀ (Σ_{b_1} × ... × Σ_{b_k})``.
Reordering factors costs the Koszul sign of the permutation times
``sign(π)^a`` from the character.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .chains import ChainComplex, HomologyReport
from .errors import CapacityError, PreconditionError
from .groups import Character, ComplexAction, FiniteGroup, OrbitTable, is_free_on_simplices, wreath_product
from .linalg import SparseMatrix
from .orbifold import GlobalQuotientOrbifold, OrientationCharacter, singular_vertices
from .simplicial import SimplicialComplex, product_complex, staircase_product, subcomplex_on

DEFAULT_CELL_CAPACITY = 10**7


# ---------------------------------------------------------------------------
# coefficient systems


@dataclass(frozen=True)
class Coefficients:
    """A ±1 character ``(σ; g) -> sign(σ)^a · Π ψ(g_i)`` of ``G ≀ Σ_n``.

    ``psi`` maps elements of G to ±1 (``None`` means trivial).
    """

    name: str = "trivial"
    sign_power: int = 0
    psi: tuple | None = None  # sorted (element, value) pairs
    integral: bool = False

    @property
    def psi_map(self):
        return dict(self.psi) if self.psi is not None else None

    @classmethod
    def rational(cls):
        return cls("rational")

    @classmethod
    def integers(cls):
        return cls("integral", integral=True)

    @classmethod
    def sign(cls):
        return cls("character:sign", sign_power=1)

    @classmethod
    def orientation(cls, X: GlobalQuotientOrbifold):
        om = OrientationCharacter(X)
        return cls("character:orientation", X.dimension % 2, tuple(sorted(om.or_M.items())))

    @classmethod
    def parse(cls, text: str, X: GlobalQuotientOrbifold) -> "Coefficients":
        """``rational``, ``integral`` or ``character:<trivial|sign|orientation|orientation-base>``."""
        if text in ("rational", "character:trivial"):
            return cls.rational()
        if text == "integral":
            return cls.integers()
        if text == "character:sign":
            return cls.sign()
        if text == "character:orientation":
            return cls.orientation(X)
        if text == "character:orientation-base":
            om = OrientationCharacter(X)
            return cls("character:orientation-base", 0, tuple(sorted(om.or_M.items())))
        raise PreconditionError(f"unknown coefficient choice {text!r}")

    def is_trivial(self):
        return self.sign_power % 2 == 0 and (self.psi is None or all(v == 1 for _, v in self.psi))


# ---------------------------------------------------------------------------
# orbits of simplices


class SimplexOrbits:
    """ψ-twisted orbit data for simplices of an acting complex.

    Alive orbits get ids ordered by (dimension, least simplex).  For every
    simplex ``s``: ``where[s] = (orbit id, factor)`` with ``[s] = factor·[rep]``
    (factor 0 for dead orbits).  Per orbit: dimension, representative,
    vertex-orbit bitmask and the boundary of the representative in orbit
    coordinates.
    """

    def __init__(self, action: ComplexAction, psi: dict | None = None, max_dim: int | None = None):
        self.action = action
        chi = Character(action.group, psi, check=False) if psi is not None else None
        top = action.complex.dimension if max_dim is None else min(max_dim, action.complex.dimension)
        table = OrbitTable(action, chi, top)
        reps = [r for layer in table.reps for r in layer]
        self.reps = reps
        self.id_of = {r: i for i, r in enumerate(reps)}
        self.dim = [len(r) - 1 for r in reps]
        vorb = {}
        for i, orb in enumerate(action.vertex_orbits()):
            for v in orb:
                vorb[v] = i
        self.vertex_orbit = vorb
        self.mask = [sum(1 << b for b in {vorb[v] for v in r}) for r in reps]
        self.where = {}
        for s, (rep, f) in table.canon.items():
            if f:
                self.where[s] = (self.id_of[rep], f)
        self.faces = []
        for r in reps:
            fs = []
            for i in range(len(r) if len(r) > 1 else 0):
                face = r[:i] + r[i + 1:]
                hit = self.where.get(face)
                if hit is not None:
                    fs.append((hit[0], hit[1] * (-1 if i % 2 else 1)))
            self.faces.append(fs)

    def __len__(self):
        return len(self.reps)

    def restricted(self, vertices: Iterable[int] | None) -> list[int]:
        """Orbit ids whose representative uses only the given vertices."""
        if vertices is None:
            return list(range(len(self.reps)))
        keep = set(vertices)
        return [i for i, r in enumerate(self.reps) if all(v in keep for v in r)]

    def orbit_of_vertex(self, v) -> int:
        return self.where[(v,)][0]


def _orbit_data(X: GlobalQuotientOrbifold, coeffs: Coefficients, max_dim=None, group: FiniteGroup | None = None):
    cache = X.__dict__.setdefault("_orbit_cache", {})
    key = (coeffs.psi, max_dim, None if group is None else id(group))
    if key not in cache:
        action = X.action if group is None else ComplexAction(group, X.K, {g: X.action.perms[g] for g in group.elements}, check=False)
        cache[key] = SimplexOrbits(action, coeffs.psi_map, max_dim)
    return cache[key]


# ---------------------------------------------------------------------------
# cellular deleted products


def _koszul_insert(dims: Sequence[int], cell: list, pos: int, lo: int, hi: int, a: int):
    """Move ``cell[pos]`` to its sorted place inside ``cell[lo:hi]``.

    Works in place and returns the sign: the Koszul sign of the move times
    ``sign(π)^a``.
    """
    x = cell[pos]
    dx = dims[x]
    sign = 1
    j = pos
    while j > lo and cell[j - 1] > x:
        y = cell[j - 1]
        if (dx * dims[y]) & 1:
            sign = -sign
        if a:
            sign = -sign
        cell[j] = y
        j -= 1
    while j + 1 < hi and cell[j + 1] < x:
        y = cell[j + 1]
        if (dx * dims[y]) & 1:
            sign = -sign
        if a:
            sign = -sign
        cell[j] = y
        j += 1
    cell[j] = x
    return sign


def sort_blocks(cell: Sequence[int], dims: Sequence[int], blocks: Sequence[int], a: int):
    """Sort each block of a tuple of orbit ids, returning ``(sign, sorted)``."""
    cell = list(cell)
    sign = 1
    start = 0
    for b in blocks:
        # insertion sort within the block keeps track of the sign
        for p in range(start + 1, start + b):
            sign *= _koszul_insert(dims, cell, p, start, p + 1, a)
        start += b
    return sign, tuple(cell)


def enumerate_cells(orbits: SimplexOrbits, allowed: Sequence[int], blocks: Sequence[int], max_dim: int,
                    capacity: int = DEFAULT_CELL_CAPACITY) -> list[list[tuple]]:
    """Cells of total dimension ``<= max_dim``, grouped by dimension."""
    n = sum(blocks)
    allowed = sorted(allowed, key=lambda o: (orbits.dim[o], o))
    out: list[list[tuple]] = [[] for _ in range(max_dim + 1)]
    if n == 0:
        out[0].append(())
        return out
    dims = orbits.dim
    masks = orbits.mask
    # position -> (block start?)
    starts = set()
    s = 0
    for b in blocks:
        starts.add(s)
        s += b
    count = 0

    def rec(pos, prefix, used, budget, last_rank):
        nonlocal count
        if pos == n:
            out[max_dim - budget].append(tuple(prefix))
            count += 1
            if count > capacity:
                raise CapacityError(f"deleted product exceeds capacity: more than {capacity} cells")
            return
        begin = 0 if pos in starts else last_rank + 1
        for i in range(begin, len(allowed)):
            o = allowed[i]
            d = dims[o]
            if d > budget:
                break
            if masks[o] & used:
                continue
            prefix.append(o)
            rec(pos + 1, prefix, used | masks[o], budget - d, i)
            prefix.pop()

    rec(0, [], 0, max_dim, -1)
    # within a block ids must increase; the enumeration used rank in the
    # (dim, id) order, so re-sort each cell by id inside blocks
    fixed = []
    for layer in out:
        new = []
        for c in layer:
            cl = list(c)
            st = 0
            for b in blocks:
                cl[st:st + b] = sorted(cl[st:st + b])
                st += b
            new.append(tuple(cl))
        new.sort()
        fixed.append(new)
    return fixed


def cellular_chain_complex(orbits: SimplexOrbits, cells: list[list[tuple]], blocks: Sequence[int], a: int,
                           complete_through: int | None = None) -> ChainComplex:
    """Boundary matrices of the block-coinvariant cellular complex."""
    dims = orbits.dim
    faces = orbits.faces
    index = [{c: i for i, c in enumerate(layer)} for layer in cells]
    block_of = []
    st = 0
    for b in blocks:
        block_of.extend([(st, st + b)] * b)
        st += b
    bounds = [SparseMatrix.zero(0, len(cells[0]))]
    for k in range(1, len(cells)):
        idx = index[k - 1]
        cols = []
        for c in cells[k]:
            col: dict = {}
            pre = 0
            for p, o in enumerate(c):
                sgn_pre = -1 if pre & 1 else 1
                lo, hi = block_of[p]
                for face, coeff in faces[o]:
                    cl = list(c)
                    cl[p] = face
                    s = _koszul_insert(dims, cl, p, lo, hi, a)
                    j = idx[tuple(cl)]
                    v = col.get(j, 0) + sgn_pre * coeff * s
                    if v:
                        col[j] = v
                    else:
                        del col[j]
                pre += dims[o]
            cols.append(col)
        bounds.append(SparseMatrix(len(cells[k - 1]), len(cells[k]), cols))
    return ChainComplex(cells, bounds, complete_through=complete_through)


class DeletedProductComplex:
    """Cellular deleted product of ``K = Sd^r(M)`` with ``n`` points.

    ``blocks`` selects the acting block subgroup: ``(n,)`` is the unordered
    configuration space, ``(1,)*n`` the ordered one (modulo ``G^n`` only).
    ``vertices`` restricts to the full subcomplex on a G-invariant vertex set.
    """

    def __init__(self, X: GlobalQuotientOrbifold, n: int, coefficients: Coefficients | None = None,
                 blocks: Sequence[int] | None = None, max_degree: int | None = None,
                 vertices: Iterable[int] | None = None, group: FiniteGroup | None = None,
                 capacity: int = DEFAULT_CELL_CAPACITY):
        if n < 0:
            raise PreconditionError("n must be non-negative")
        self.X = X
        self.n = n
        self.coefficients = coefficients or Coefficients.rational()
        self.blocks = tuple(blocks) if blocks is not None else ((n,) if n else ())
        if sum(self.blocks) != n:
            raise PreconditionError("block sizes must add up to n")
        self.vertices = None if vertices is None else tuple(sorted(set(vertices)))
        self.group = group
        self.orbits = _orbit_data(X, self.coefficients, None, group)
        allowed = self.orbits.restricted(self.vertices)
        if self.vertices is None:
            local_dim = X.K.dimension
        else:
            keep = set(self.vertices)
            local_dim = max((len(s) - 1 for s in X.K.simplices() if all(v in keep for v in s)), default=0)
        full_top = n * local_dim
        self.full_top = full_top
        self.top = full_top if max_degree is None else min(full_top, max_degree + 1)
        self.complete_through = full_top if max_degree is None or max_degree + 1 > full_top else max_degree
        self.cells = enumerate_cells(self.orbits, allowed, self.blocks, self.top, capacity)
        while len(self.cells) > 1 and not self.cells[-1] and len(self.cells) - 1 > self.complete_through:
            self.cells.pop()
        self._chain = None

    @property
    def ordered(self) -> bool:
        return all(b == 1 for b in self.blocks)

    @property
    def cell_counts(self):
        return tuple(len(c) for c in self.cells)

    def chain_complex(self) -> ChainComplex:
        if self._chain is None:
            self._chain = cellular_chain_complex(self.orbits, self.cells, self.blocks,
                                                 self.coefficients.sign_power % 2,
                                                 complete_through=min(self.complete_through, len(self.cells) - 1))
        return self._chain

    def homology(self, max_degree: int | None = None) -> HomologyReport:
        C = self.chain_complex()
        ring = "integral" if self.coefficients.integral else "rational"
        hi = C.complete_through if max_degree is None else max_degree
        if hi > C.top:
            # degrees beyond the generated cells carry no homology
            rep = C.homology(ring, C.top) if C.top >= 0 else HomologyReport(betti=(), torsion=() if ring == "integral" else None)
            pad = hi - C.top
            torsion = None if rep.torsion is None else rep.torsion + ((),) * pad
            rep = HomologyReport(rep.betti + (0,) * pad, rep.coefficients, torsion, chain_dims=rep.chain_dims)
        else:
            rep = C.homology(ring, hi)
        return HomologyReport(rep.betti, self.coefficients.name, rep.torsion, n=self.n, chain_dims=rep.chain_dims)

    # -- the literal simplicial model ------------------------------------

    def simplicial(self):
        """``(complex, action)``: the full subcomplex of ``product_complex(K, n)``
        on orbit-disjoint tuples, with the ``G ≀ Σ_n`` action.

        Intended for small cases and cross-checks; ignores block and vertex
        restrictions other than the ambient ``K``.
        """
        return simplicial_deleted_product(self.X, self.n)


def _tuple_is_orbit_disjoint(tup, vmask) -> bool:
    used = 0
    for s in tup:
        m = vmask[s]
        if m & used:
            return False
        used |= m
    return True


def _wreath_action_on_product(X: GlobalQuotientOrbifold, P: SimplicialComplex, n: int, capacity=10**6):
    """``G ≀ Σ_n`` acting on a complex whose vertex labels are n-tuples of
    simplices of ``K`` (product_complex) or of vertices of ``K`` (staircase)."""
    W = wreath_product(X.G, n, capacity)
    index = {lab: i for i, lab in enumerate(P.labels)}
    vperm = X.action.perms
    simplex_labels = isinstance(P.labels[0][0], tuple) if P.labels else False

    def move(g, x):
        p = vperm[g]
        if simplex_labels:
            return tuple(sorted(p[v] for v in x))
        return p[x]

    perms = {}
    for e in W.elements:
        sigma, gs = W.decompose(e)
        out = []
        for lab in P.labels:
            new = [None] * n
            for i, x in enumerate(lab):
                new[sigma[i]] = move(gs[i], x)
            out.append(index[tuple(new)])
        perms[e] = tuple(out)
    return W, ComplexAction(W, P, perms, check=False)


def simplicial_deleted_product(X: GlobalQuotientOrbifold, n: int):
    """Literal simplicial deleted product and its wreath action (small cases)."""
    if n < 1:
        raise PreconditionError("simplicial model needs n >= 1")
    P = product_complex(X.K, n)
    vorb = {}
    for i, orb in enumerate(X.action.vertex_orbits()):
        for v in orb:
            vorb[v] = i
    vmask = {s: sum(1 << vorb[v] for v in s) for s in X.K.simplices()}
    keep = [i for i, lab in enumerate(P.labels) if _tuple_is_orbit_disjoint(lab, vmask)]
    from .simplicial import full_subcomplex
    D = full_subcomplex(P, keep)
    if D.vertex_count == 0:
        return D, None
    W, action = _wreath_action_on_product(X, D, n)
    return D, action


def deleted_product(X: GlobalQuotientOrbifold, n: int, coefficients: Coefficients | None = None,
                    ordered: bool = False, max_degree: int | None = None,
                    capacity: int = DEFAULT_CELL_CAPACITY) -> DeletedProductComplex:
    """Deleted product of ``X`` with ``n`` points (ordered or unordered view)."""
    blocks = (1,) * n if ordered else None
    return DeletedProductComplex(X, n, coefficients, blocks, max_degree, capacity=capacity)


def conf_homology(X: GlobalQuotientOrbifold, n: int, coefficients: Coefficients | str = "rational",
                  max_degree: int | None = None, capacity: int = DEFAULT_CELL_CAPACITY) -> HomologyReport:
    """Homology of ``Conf_n(X)``: χ-isotypic over Q, or integral for free actions."""
    if isinstance(coefficients, str):
        coefficients = Coefficients.parse(coefficients, X)
    if coefficients.integral and not is_free_on_simplices(X.action):
        raise PreconditionError("integral homology needs the wreath action to be free and regular; "
                                "G must act freely on the simplices of the model")
    D = DeletedProductComplex(X, n, coefficients, max_degree=max_degree, capacity=capacity)
    return D.homology(max_degree)


# ---------------------------------------------------------------------------
# strata


@dataclass
class StratumModel:
    """Product model of the stratum with exactly ``m`` orbifold points.

    ``free`` lives on the full subcomplex of ``K`` away from the singular
    locus (optionally one named component, acted on by its setwise
    stabiliser), ``singular`` on the singular locus.
    """

    X: GlobalQuotientOrbifold
    n: int
    m: int
    free: DeletedProductComplex
    singular: DeletedProductComplex
    component: int | None = None

    def homology(self, max_degree: int | None = None) -> HomologyReport:
        """Künneth product of the two trivial-isotypic factors."""
        hi = max_degree
        bf = self.free.homology(hi).betti
        bs = self.singular.homology(hi).betti
        top = len(bf) + len(bs) - 1 if hi is None else hi + 1
        betti = [0] * max(top, 1)
        for i, x in enumerate(bf):
            for j, y in enumerate(bs):
                if i + j < len(betti):
                    betti[i + j] += x * y
        if hi is not None:
            betti = betti[: hi + 1]
        return HomologyReport(tuple(betti), "rational", n=self.n, stratum={"m": self.m, "component": self.component})


def free_vertices(X: GlobalQuotientOrbifold) -> list[int]:
    sing = singular_vertices(X)
    return [v for v in range(X.K.vertex_count) if v not in sing]


def complement_components(X: GlobalQuotientOrbifold) -> list[list[int]]:
    """Connected components (vertex lists) of the complement of the singular locus."""
    free = set(free_vertices(X))
    adj = {v: set() for v in free}
    for a, b in X.K.simplices(1):
        if a in free and b in free:
            adj[a].add(b)
            adj[b].add(a)
    comps = []
    seen = set()
    for v in sorted(free):
        if v in seen:
            continue
        comp = []
        stack = [v]
        seen.add(v)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        comps.append(sorted(comp))
    return comps


def stratum_model(X: GlobalQuotientOrbifold, n: int, m: int, component: int | None = None,
                  max_degree: int | None = None, capacity: int = DEFAULT_CELL_CAPACITY) -> StratumModel:
    """Stratum ``C_{n,m}`` as ``Conf_{n-m}(free part) × Conf_m(singular locus)``.

    With ``component`` set, the free factor uses only that component of the
    complement (index into :func:`complement_components`) and the subgroup
    of G preserving it.
    """
    if not 0 <= m <= n:
        raise PreconditionError("need 0 <= m <= n")
    sing = sorted(singular_vertices(X))
    if m > 0 and not sing:
        raise PreconditionError("stratum with orbifold points requested but the singular locus is empty")
    group = None
    fverts = free_vertices(X)
    if component is not None:
        comps = complement_components(X)
        if not 0 <= component < len(comps):
            raise PreconditionError(f"component index {component} out of range ({len(comps)} components)")
        fverts = comps[component]
        cset = set(fverts)
        elems = [g for g in X.G.elements if {X.action.perms[g][v] for v in cset} == cset]
        group = FiniteGroup(X.G.degree, elems, check=False)
    free = DeletedProductComplex(X, n - m, max_degree=max_degree, vertices=fverts, group=group, capacity=capacity)
    singular = DeletedProductComplex(X, m, max_degree=max_degree, vertices=sing, capacity=capacity)
    return StratumModel(X, n, m, free, singular, component)


# ---------------------------------------------------------------------------
# compact supports


class CompactSupportPair:
    """Finite pair ``(K', A)`` with ``K' - A`` modelling ``Conf_n`` (ordered).

    ``closed="diagonal"`` (default): ``K'`` is the staircase triangulation of
    ``K^n`` and ``A`` the union of the orbit diagonals ``{x_i = g·x_j}``; the
    complement ``|K'| - |A|`` is then exactly the ordered orbit configuration
    space.  ``closed="bad"``: ``K' = product_complex(K, n)`` and ``A`` the full
    subcomplex on tuples that are not orbit-disjoint, whose complement full
    subcomplex is the subdivided deleted product.

    Extra closed pieces ``{x_i in S}`` for an invariant vertex set ``S`` can be
    added through ``forbid`` (used for strata).
    """

    def __init__(self, X: GlobalQuotientOrbifold, n: int, closed: str = "diagonal", vertices=None,
                 forbid: Iterable[int] | None = None, capacity: int = 10**6):
        if n < 1:
            raise PreconditionError("compact-support pair needs n >= 1")
        self.X = X
        self.n = n
        self.closed = closed
        vset = None if vertices is None else set(vertices)
        K = X.K
        vorb = {}
        for i, orb in enumerate(X.action.vertex_orbits()):
            for v in orb:
                vorb[v] = i
        if closed == "diagonal":
            base = K if vset is None else _full_keep_ids(K, vset)
            rank = vertex_rank(X)
            P = staircase_product(base, n, rank)
            orbit_of = [vorb[v] for v in range(K.vertex_count)]
            G = X.action.perms
            bad_simplices = []
            for s in P.simplices():
                labs = [P.labels[v] for v in s]
                if _in_orbit_diagonal(labs, n, G, orbit_of):
                    bad_simplices.append(s)
            forb = set(forbid or ())
            if forb:
                for s in P.simplices():
                    labs = [P.labels[v] for v in s]
                    if any(all(lab[i] in forb for lab in labs) for i in range(n)):
                        bad_simplices.append(s)
        elif closed == "bad":
            if vset is not None or forbid:
                raise PreconditionError("vertex restrictions are only supported by the diagonal model")
            P = product_complex(K, n)
            vmask = {s: sum(1 << vorb[v] for v in s) for s in K.simplices()}
            badv = {i for i, lab in enumerate(P.labels) if not _tuple_is_orbit_disjoint(lab, vmask)}
            bad_simplices = [s for s in P.simplices() if all(v in badv for v in s)]
        else:
            raise PreconditionError(f"unknown closed-part model {closed!r}")
        self.ambient = P
        self.closed_part = subcomplex_on(P, bad_simplices)
        self.group, self.action = _wreath_action_on_product(X, P, n, capacity)

    def chi_c(self) -> int:
        """Alternating count of Γ-orbits of open simplices of ``K' - A``."""
        seen = set()
        total = 0
        perms = list(self.action.perms.values())
        A = self.closed_part
        for s in self.ambient.simplices():
            if s in A or s in seen:
                continue
            orbit = {tuple(sorted(p[v] for v in s)) for p in perms}
            seen |= orbit
            total += (-1) ** (len(s) - 1)
        return total

    def relative_cohomology(self, chi: Character | None = None) -> HomologyReport:
        from .groups import relative_isotypic_cohomology
        return relative_isotypic_cohomology(self.action, self.closed_part, chi)


def _full_keep_ids(K: SimplicialComplex, keep: set) -> SimplicialComplex:
    """Full subcomplex keeping K's vertex ids (unused ids stay isolated-free)."""
    simp = [s for s in K.simplices() if all(v in keep for v in s)]
    sub = SimplicialComplex.from_simplices(K.vertex_count, simp, labels=K.labels)
    # drop the 0-simplices of removed vertices
    sub._simplices[0] = [s for s in sub._simplices[0] if s[0] in keep]
    sub._index = None
    return sub


def vertex_rank(X: GlobalQuotientOrbifold) -> list[int]:
    """G-invariant vertex ranking that is injective on every simplex of ``K``.

    Uses the dimension of the parent cell when ``K`` is a subdivision,
    otherwise the vertex-orbit index.
    """
    K = X.K
    if X.subdiv >= 1:
        return [len(lab) - 1 for lab in K.labels]
    orbits = X.action.vertex_orbits()
    rank = [0] * K.vertex_count
    for i, orb in enumerate(orbits):
        for v in orb:
            rank[v] = i
    for a, b in K.simplices(1):
        if rank[a] == rank[b]:
            raise PreconditionError("an edge joins two vertices of one orbit; use a subdivided model")
    return rank


def _in_orbit_diagonal(labs, n, perms, orbit_of) -> bool:
    """Do all vertex tuples satisfy ``x_i = g·x_j`` for one fixed ``(i, j, g)``?"""
    first = labs[0]
    for i in range(n):
        for j in range(i + 1, n):
            if orbit_of[first[i]] != orbit_of[first[j]]:
                continue
            for g, p in perms.items():
                if all(lab[i] == p[lab[j]] for lab in labs):
                    return True
    return False


def compact_support_pair(X: GlobalQuotientOrbifold, n: int, closed: str = "diagonal") -> CompactSupportPair:
    if not X.is_closed():
        raise PreconditionError("compact-support pipeline needs a closed model (no boundary)")
    return CompactSupportPair(X, n, closed)


def _chi_c_product(X: GlobalQuotientOrbifold, n: int, m: int, sing: list[int]) -> int:
    if n - m > 0:
        cf = CompactSupportPair(X, n - m, "diagonal", forbid=sing).chi_c()
    else:
        cf = 1
    if m > 0:
        cs = CompactSupportPair(X, m, "diagonal", vertices=sing).chi_c()
    else:
        cs = 1
    return cf * cs


def chi_c_report(X: GlobalQuotientOrbifold, n: int) -> dict:
    """Compactly supported Euler characteristics of ``Conf_n`` and of its strata.

    Each stratum ``C_{n,m}`` is counted through its product model; the total
    is counted directly on the pair for ``Conf_n``.  ``additive`` records
    whether the totals agree.
    """
    if not X.is_closed():
        raise PreconditionError("chi_c report needs a closed model")
    sing = sorted(singular_vertices(X))
    total = compact_support_pair(X, n).chi_c()
    strata = {}
    for m in range(0, n + 1):
        if m > 0 and not sing:
            break
        strata[m] = _chi_c_product(X, n, m, sing)
    return {"n": n, "total": total, "strata": strata, "sum": sum(strata.values()),
            "additive": total == sum(strata.values())}
