"""Global-quotient orbifolds ``[M/G]`` modelled on subdivided simplicial complexes."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable

from .chains import HomologyBasis
from .errors import InputError, NotRegularError, PreconditionError
from .groups import (Character, ComplexAction, FiniteGroup, WreathProduct, is_regular_action,
                     wreath_character, wreath_product)
from .simplicial import SimplicialComplex, barycentric_subdivide, full_subcomplex, permutation_sign

MAX_AUTO_SUBDIVISION = 4


def _subdivided_action(K: SimplicialComplex, Kd: SimplicialComplex, perms: dict) -> dict:
    """Vertex permutations of ``Kd = Sd K`` induced from those of ``K``."""
    flat = {s: i for i, s in enumerate(K.simplices())}
    out = {}
    for g, p in perms.items():
        out[g] = tuple(flat[tuple(sorted(p[v] for v in lab))] for lab in Kd.labels)
    return out


@dataclass(frozen=True)
class StabilisationData:
    """Base vertex ``v*`` and the invariant nested copy it is added next to.

    ``base_cell`` is a vertex of the subdivided model with trivial stabiliser.
    ``nested_vertices`` spans a G-invariant full subcomplex whose vertex set
    avoids the orbit of ``base_cell``.  The stabilisation map transports a
    configuration into the nested copy (inverting the inclusion on homology)
    and then adds ``base_cell``.
    """

    base_cell: int
    nested_vertices: tuple


class GlobalQuotientOrbifold:
    """``[M/G]`` with ``M`` subdivided ``subdiv`` times.

    ``M`` is the manifold model and ``G`` acts on its vertices.  The working
    complex ``K = Sd^r(M)`` keeps the vertex ids of ``M`` (the barycentric
    subdivision lists vertices first), so data given in M's ids stays valid.
    If the action on ``K`` is not regular, or its singular locus is not a full
    subcomplex, ``r`` is raised (up to ``MAX_AUTO_SUBDIVISION``) and the
    requested value is kept in ``requested_subdiv``.
    """

    def __init__(self, M: SimplicialComplex, G: FiniteGroup | None = None, subdiv: int = 0,
                 boundary_vertices: Iterable[int] | None = None, stab: dict | StabilisationData | None = None,
                 name: str = "X", auto_subdivide: bool = True):
        if G is None:
            G = FiniteGroup.trivial(M.vertex_count)
        if G.degree != M.vertex_count:
            raise InputError(f"group acts on {G.degree} points but the complex has {M.vertex_count} vertices")
        if subdiv < 0:
            raise InputError("subdivision level must be non-negative")
        self.M = M
        self.G = G
        self.name = name
        self.requested_subdiv = subdiv
        self.base_action = ComplexAction(G, M)
        self.dimension = M.dimension

        if boundary_vertices is not None:
            bset = sorted(set(int(v) for v in boundary_vertices))
            for v in bset:
                if not 0 <= v < M.vertex_count:
                    raise InputError(f"boundary vertex {v} out of range")
            for g in G.elements:
                if sorted(g[v] for v in bset) != bset:
                    raise InputError("boundary vertices are not G-invariant")
            self.boundary_vertices = tuple(bset)
        else:
            self.boundary_vertices = None

        K = M
        perms = {g: g for g in G.elements}
        level = 0
        levels = [K]
        while True:
            if level >= subdiv:
                action = ComplexAction(G, K, perms, check=False)
                if is_regular_action(action) and self._locus_is_full(action):
                    break
                if not auto_subdivide:
                    raise NotRegularError("action not regular at the requested subdivision level")
                if level >= MAX_AUTO_SUBDIVISION:
                    raise NotRegularError("action still not regular after automatic subdivision")
            Kd = barycentric_subdivide(K)
            perms = _subdivided_action(K, Kd, perms)
            K = Kd
            levels.append(K)
            level += 1
        self.subdiv = level
        self.K = K
        self.levels = levels
        self.action = ComplexAction(G, K, perms, check=False)
        self._carrier = self._carriers()
        if isinstance(stab, dict):
            stab = self._parse_stab(stab)
        self.stab = stab
        if stab is not None:
            self._validate_stab(stab)

    # -- construction helpers ---------------------------------------------

    @staticmethod
    def _fixed_locus(action: ComplexAction) -> set:
        """Simplices fixed pointwise by some non-identity element."""
        ident = action.group.identity
        out = set()
        for g, p in action.perms.items():
            if g == ident:
                continue
            fixed = [v for v in range(len(p)) if p[v] == v]
            fset = set(fixed)
            for s in action.complex.simplices():
                if all(v in fset for v in s):
                    out.add(s)
        return out

    def _locus_is_full(self, action) -> bool:
        locus = self._fixed_locus(action)
        verts = {s[0] for s in locus if len(s) == 1}
        for s in action.complex.simplices():
            if all(v in verts for v in s) and s not in locus:
                return False
        return True

    def _carriers(self) -> list[tuple]:
        """For each vertex of ``K``, the simplex of ``M`` containing it in its interior."""
        carrier = [(v,) for v in range(self.M.vertex_count)]
        for lvl in range(1, len(self.levels)):
            Kd = self.levels[lvl]
            carrier = [tuple(sorted({x for v in lab for x in carrier[v]})) for lab in Kd.labels]
        return carrier

    def carrier(self, v) -> tuple:
        return self._carrier[v]

    def _parse_stab(self, data: dict) -> StabilisationData:
        if "base_cell" not in data:
            raise InputError('"stab" needs "base_cell"')
        base = data["base_cell"]
        if not isinstance(base, int) or not 0 <= base < self.K.vertex_count:
            raise InputError(f"base_cell {base!r} is not a vertex of the subdivided model")
        nested = data.get("nested_copy_vertices")
        if nested is None:
            orbit = {p[base] for p in self.action.perms.values()}
            nested = [v for v in range(self.K.vertex_count) if v not in orbit]
        return StabilisationData(base, tuple(sorted(set(int(v) for v in nested))))

    def _validate_stab(self, stab: StabilisationData):
        base = stab.base_cell
        if len(self.action.stabilizer((base,))) != 1:
            raise InputError("base cell must have trivial stabiliser")
        orbit = {p[base] for p in self.action.perms.values()}
        nested = set(stab.nested_vertices)
        if orbit & nested:
            raise InputError("orbit of the base cell meets the nested copy")
        for p in self.action.perms.values():
            if {p[v] for v in nested} != nested:
                raise InputError("nested copy is not G-invariant")

    def with_subdiv(self, r: int) -> "GlobalQuotientOrbifold":
        """Same orbifold at another subdivision level (stabilisation data dropped
        unless it only uses ids of ``M``)."""
        stab = None
        if self.stab is not None and self.stab.base_cell < self.M.vertex_count:
            stab = {"base_cell": self.stab.base_cell}
        return GlobalQuotientOrbifold(self.M, self.G, r, self.boundary_vertices, stab, self.name)

    # -- JSON --------------------------------------------------------------

    @classmethod
    def from_json(cls, data, subdiv: int | None = None, name="X") -> "GlobalQuotientOrbifold":
        if isinstance(data, str):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as exc:
                raise InputError(f"malformed JSON: {exc}") from exc
        if not isinstance(data, dict) or "complex" not in data:
            raise InputError('orbifold JSON needs a "complex" block')
        try:
            M = SimplicialComplex.from_json(data["complex"])
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        G = None
        if data.get("group") is not None:
            try:
                G = FiniteGroup.from_json(data["group"], M.vertex_count)
            except ValueError as exc:
                raise InputError(str(exc)) from exc
        r = data.get("subdiv", 0) if subdiv is None else subdiv
        if not isinstance(r, int) or r < 0:
            raise InputError('"subdiv" must be a non-negative integer')
        stab = data.get("stab")
        if stab is not None and not isinstance(stab, dict):
            raise InputError('"stab" must be an object')
        try:
            return cls(M, G, r, data.get("boundary_vertices"), stab, name=data.get("name", name))
        except (ValueError, NotRegularError) as exc:
            raise InputError(str(exc)) from exc

    def to_json(self) -> dict:
        out = {"complex": self.M.to_json(), "subdiv": self.requested_subdiv}
        if not self.G.is_trivial():
            out["group"] = {"generators": [list(g) for g in self.G.generators()]}
        if self.boundary_vertices is not None:
            out["boundary_vertices"] = list(self.boundary_vertices)
        if self.stab is not None:
            out["stab"] = {"base_cell": self.stab.base_cell, "nested_copy_vertices": list(self.stab.nested_vertices)}
        return out

    # -- geometry ------------------------------------------------------------

    def boundary_complex(self) -> SimplicialComplex:
        """Boundary of ``M`` as a subcomplex (M's vertex ids)."""
        if self.boundary_vertices is not None:
            keep = set(self.boundary_vertices)
            simp = [s for s in self.M.simplices() if all(v in keep for v in s)]
        else:
            d = self.M.dimension
            count = {}
            for s in self.M.simplices(d):
                for i in range(d + 1):
                    f = s[:i] + s[i + 1:]
                    count[f] = count.get(f, 0) + 1
            simp = [f for f, c in count.items() if c == 1]
        from .simplicial import subcomplex_on
        return subcomplex_on(self.M, simp)

    def is_closed(self) -> bool:
        return not self.boundary_complex().simplices()

    def __repr__(self):
        return f"GlobalQuotientOrbifold({self.name}, |G|={self.G.order}, d={self.dimension}, r={self.subdiv})"


def singular_locus(X: GlobalQuotientOrbifold) -> SimplicialComplex:
    """Full subcomplex of ``K`` on vertices with nontrivial isotropy.

    Labels hold the vertex ids of ``K``.
    """
    verts = {s[0] for s in X._fixed_locus(X.action) if len(s) == 1}
    return full_subcomplex(X.K, verts)


def singular_vertices(X: GlobalQuotientOrbifold) -> set:
    return {s[0] for s in X._fixed_locus(X.action) if len(s) == 1}


def ghost_orbit(X: GlobalQuotientOrbifold, v: int) -> set:
    """The other points of the G-orbit of the vertex ``v`` of ``K``."""
    return {p[v] for p in X.action.perms.values()} - {v}


def orientation_sign(X: GlobalQuotientOrbifold) -> dict:
    """``g -> ±1``: the action of ``g`` on ``H_d(M, ∂M; Q)``."""
    B = X.boundary_complex()
    C = X.M.chain_complex(sub=B if B.simplices() else None)
    d = X.dimension
    H = HomologyBasis(C, d)
    if H.rank != 1:
        raise PreconditionError(f"top homology of the model has dimension {H.rank}; an orientable connected model is required")
    gen = H.generators[0]
    basis = C.bases[d]
    index = C.index(d)
    out = {}
    for g in X.G.elements:
        image = {}
        for j, c in gen.items():
            s = basis[j]
            img = [g[v] for v in s]
            t = tuple(sorted(img))
            image[index[t]] = image.get(index[t], 0) + c * permutation_sign(img)
        coord = H.coordinates(image)[0]
        if coord not in (1, -1):
            raise PreconditionError("group element does not act by ±1 on top homology")
        out[g] = int(coord)
    return out


class OrientationCharacter:
    """``ω_n(σ; g) = sign(σ)^d · Π or_M(g_i)`` on ``G ≀ Σ_n``."""

    def __init__(self, X: GlobalQuotientOrbifold):
        self.X = X
        self.or_M = orientation_sign(X)
        self.d = X.dimension

    def psi(self, g) -> int:
        return self.or_M[tuple(g)]

    def on(self, W: WreathProduct) -> Character:
        return wreath_character(W, self.psi, self.d, name=f"omega_{W.n}")

    def value(self, sigma, gs) -> int:
        v = permutation_sign(sigma) ** (self.d % 2)
        for g in gs:
            v *= self.or_M[tuple(g)]
        return v


def orientation_character(X: GlobalQuotientOrbifold, n: int, capacity: int = 10**6) -> Character:
    """``ω_n`` as a character of the explicit wreath product."""
    return OrientationCharacter(X).on(wreath_product(X.G, n, capacity))


def block_factorisation_holds(X: GlobalQuotientOrbifold, n: int, m: int, limit: int = 10**4) -> bool:
    """Check ``ω_n = ω_{n-m} · ω_m`` on the block subgroup, exhaustively.

    The block subgroup ``G ≀ (Σ_{n-m} × Σ_m)`` is enumerated as pairs of
    elements of the two smaller wreath products; each pair is embedded in
    ``G ≀ Σ_n`` (first block on coordinates ``0..n-m-1``) and both sides are
    compared.  Raises if ``|G ≀ Σ_n|`` exceeds ``limit``.
    """
    from math import factorial
    if not 0 <= m <= n:
        raise PreconditionError("need 0 <= m <= n")
    size = X.G.order ** n * factorial(n)
    if size > limit:
        raise PreconditionError(f"|G wr S_{n}| = {size} exceeds the exhaustive limit {limit}")
    W = wreath_product(X.G, n)
    omega = OrientationCharacter(X)
    big = omega.on(W)
    W1 = wreath_product(X.G, n - m)
    W2 = wreath_product(X.G, m)
    c1 = omega.on(W1)
    c2 = omega.on(W2)
    k = n - m
    for e1 in W1.elements:
        s1, g1 = W1.decompose(e1)
        for e2 in W2.elements:
            s2, g2 = W2.decompose(e2)
            sigma = tuple(s1) + tuple(k + x for x in s2)
            e = W.element(sigma, tuple(g1) + tuple(g2))
            if big(e) != c1(e1) * c2(e2):
                return False
    return True
