"""Finite permutation groups acting on simplicial complexes.

Groups are enumerated explicitly.  Elements are permutations of a ground set
``0 .. degree-1`` stored as image tuples; ``(p * q)(x) = p(q(x))``.
"""

from __future__ import annotations

import json
from itertools import permutations as _perms
from math import factorial
from typing import Callable, Iterable, Sequence

from .chains import ChainComplex, HomologyReport
from .errors import CapacityError, NotRegularError
from .linalg import SparseMatrix
from .simplicial import SimplicialComplex, permutation_sign

DEFAULT_GROUP_CAPACITY = 10**6


def compose(p: tuple, q: tuple) -> tuple:
    """``p ∘ q`` as image tuples."""
    return tuple(p[x] for x in q)


def inverse(p: tuple) -> tuple:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def perm_sign(p: Sequence[int]) -> int:
    return permutation_sign(p)


class FiniteGroup:
    """Explicitly enumerated permutation group.

    >>> G = FiniteGroup.generated_by([(1, 0, 2), (0, 2, 1)])
    >>> G.order
    6
    """

    def __init__(self, degree: int, elements: Iterable[tuple], check: bool = True):
        self.degree = degree
        self.identity = tuple(range(degree))
        elems = sorted(set(tuple(e) for e in elements) | {self.identity})
        for e in elems:
            if len(e) != degree or sorted(e) != list(range(degree)):
                raise ValueError(f"{e} is not a permutation of {degree} points")
        self.elements = elems
        self._index = {e: i for i, e in enumerate(elems)}
        if check:
            for p in elems:
                if inverse(p) not in self._index:
                    raise ValueError("element set is not closed under inverses")
            if len(elems) <= 200:
                for p in elems:
                    for q in elems:
                        if compose(p, q) not in self._index:
                            raise ValueError("element set is not closed under composition")

    @classmethod
    def generated_by(cls, generators: Iterable[Sequence[int]], degree: int | None = None,
                     capacity: int = DEFAULT_GROUP_CAPACITY) -> "FiniteGroup":
        gens = [tuple(int(x) for x in g) for g in generators]
        if degree is None:
            if not gens:
                raise ValueError("degree needed for a group without generators")
            degree = len(gens[0])
        for g in gens:
            if len(g) != degree or sorted(g) != list(range(degree)):
                raise ValueError(f"generator {list(g)} is not a permutation of {degree} points")
        ident = tuple(range(degree))
        seen = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = compose(g, x)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
                        if len(seen) > capacity:
                            raise CapacityError(f"group exceeds capacity {capacity} elements")
            frontier = nxt
        return cls(degree, seen, check=False)

    @classmethod
    def trivial(cls, degree: int) -> "FiniteGroup":
        return cls(degree, [])

    @classmethod
    def symmetric(cls, n: int) -> "FiniteGroup":
        return cls(n, _perms(range(n)), check=False)

    @classmethod
    def from_json(cls, data, degree: int) -> "FiniteGroup":
        if isinstance(data, str):
            data = json.loads(data)
        if not isinstance(data, dict) or "generators" not in data:
            raise ValueError('group JSON needs "generators"')
        gens = data["generators"]
        if not isinstance(gens, list):
            raise ValueError('"generators" must be a list of image lists')
        return cls.generated_by(gens, degree=degree)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, g):
        return tuple(g) in self._index

    def index(self, g) -> int:
        return self._index[tuple(g)]

    def mul(self, p, q):
        return compose(p, q)

    def inv(self, p):
        return inverse(p)

    def is_trivial(self):
        return len(self.elements) == 1

    def multiplication_table(self) -> list[list[int]]:
        return [[self._index[compose(p, q)] for q in self.elements] for p in self.elements]

    def generators(self) -> list[tuple]:
        """A small generating set, chosen greedily."""
        gens = []
        span = {self.identity}
        for g in self.elements:
            if g in span:
                continue
            gens.append(g)
            span = set(FiniteGroup.generated_by(gens, self.degree).elements)
            if len(span) == self.order:
                break
        return gens

    def __repr__(self):
        return f"FiniteGroup(order={self.order}, degree={self.degree})"


class WreathProduct(FiniteGroup):
    """``G ≀ Σ_n`` as permutations of ``n`` copies of G's ground set.

    The element ``(σ; g_1..g_n)`` sends the point ``x`` of copy ``i`` to the
    point ``g_i(x)`` of copy ``σ(i)``; on tuples it acts by
    ``y_{σ(i)} = g_i(x_i)``.
    """

    def __init__(self, base: FiniteGroup, n: int, capacity: int = DEFAULT_GROUP_CAPACITY):
        if n < 0:
            raise ValueError("n must be non-negative")
        size = base.order ** n * factorial(n)
        if size > capacity:
            raise CapacityError(f"wreath product of order {size} exceeds capacity {capacity}")
        self.base = base
        self.n = n
        m = base.degree
        parts = {}
        for sigma in _perms(range(n)):
            for gs in _product(base.elements, n):
                perm = [0] * (n * m)
                for i in range(n):
                    g = gs[i]
                    off = sigma[i] * m
                    for x in range(m):
                        perm[i * m + x] = off + g[x]
                parts[tuple(perm)] = (tuple(sigma), tuple(gs))
        super().__init__(n * m, parts.keys(), check=False)
        self._parts = parts

    def decompose(self, element) -> tuple:
        """``(σ, (g_1, ..., g_n))`` for an element."""
        return self._parts[tuple(element)]

    def element(self, sigma, gs) -> tuple:
        m = self.base.degree
        perm = [0] * (self.n * m)
        for i in range(self.n):
            for x in range(m):
                perm[i * m + x] = sigma[i] * m + gs[i][x]
        return tuple(perm)

    def act_on_tuple(self, element, tup):
        sigma, gs = self.decompose(element)
        out = [None] * self.n
        for i, x in enumerate(tup):
            out[sigma[i]] = gs[i][x]
        return tuple(out)


def _product(elements, n):
    from itertools import product
    return product(elements, repeat=n)


def wreath_product(G: FiniteGroup, n: int, capacity: int = DEFAULT_GROUP_CAPACITY) -> WreathProduct:
    """``G ≀ Σ_n`` with its product-coordinate action.

    >>> wreath_product(FiniteGroup.generated_by([(1, 0)]), 2).order
    8
    """
    return WreathProduct(G, n, capacity)


# ---------------------------------------------------------------------------
# characters


class Character:
    """A homomorphism ``G -> {±1}`` stored by value on every element."""

    def __init__(self, group: FiniteGroup, values: dict | Callable, name: str = "chi", check: bool = True):
        self.group = group
        self.name = name
        if callable(values):
            values = {g: values(g) for g in group.elements}
        self.values = {tuple(g): int(v) for g, v in values.items()}
        for g in group.elements:
            if self.values.get(g) not in (1, -1):
                raise ValueError(f"character value at {g} must be +1 or -1")
        if check:
            self.check_multiplicative()

    def check_multiplicative(self, exhaustive_limit: int = 10**4):
        """Raise unless ``χ(gh) = χ(g)χ(h)``; exhaustive for small groups."""
        G = self.group
        pool = G.elements if G.order <= 300 else G.generators()
        for g in pool:
            for h in G.elements if G.order <= exhaustive_limit else pool:
                if self.values[compose(g, h)] != self.values[g] * self.values[h]:
                    raise ValueError(f"{self.name} is not multiplicative")
        return True

    def __call__(self, g) -> int:
        return self.values[tuple(g)]

    @classmethod
    def trivial(cls, group: FiniteGroup) -> "Character":
        return cls(group, {g: 1 for g in group.elements}, name="trivial", check=False)

    @classmethod
    def sign(cls, group: FiniteGroup) -> "Character":
        """Sign of the permutation of the ground set."""
        return cls(group, {g: perm_sign(g) for g in group.elements}, name="sign", check=False)

    def is_trivial(self):
        return all(v == 1 for v in self.values.values())

    def restrict(self, subgroup: FiniteGroup, embed: Callable | None = None) -> "Character":
        embed = embed or (lambda g: g)
        return Character(subgroup, {h: self.values[embed(h)] for h in subgroup.elements},
                         name=f"{self.name}|", check=False)

    def __mul__(self, other: "Character") -> "Character":
        if other.group is not self.group:
            raise ValueError("characters live on different groups")
        return Character(self.group, {g: self.values[g] * other.values[g] for g in self.group.elements},
                         name=f"{self.name}*{other.name}", check=False)


def wreath_character(W: WreathProduct, psi: Callable[[tuple], int], sign_power: int, name="omega") -> Character:
    """``(σ; g) -> sign(σ)^a · Π ψ(g_i)``; every ±1 character of ``G ≀ Σ_n`` has this form."""
    vals = {}
    for e in W.elements:
        sigma, gs = W.decompose(e)
        v = perm_sign(sigma) ** (sign_power % 2)
        for g in gs:
            v *= psi(g)
        vals[e] = v
    return Character(W, vals, name=name, check=False)


def one_dimensional_characters(G: FiniteGroup) -> list[Character]:
    """All ±1 characters, by brute force over sign assignments on generators."""
    gens = G.generators()
    out = []
    from itertools import product
    for signs in product((1, -1), repeat=len(gens)):
        vals = {G.identity: 1}
        frontier = [G.identity]
        ok = True
        while frontier and ok:
            nxt = []
            for x in frontier:
                for g, s in zip(gens, signs):
                    y = compose(g, x)
                    v = s * vals[x]
                    if y in vals:
                        if vals[y] != v:
                            ok = False
                            break
                    else:
                        vals[y] = v
                        nxt.append(y)
                if not ok:
                    break
            frontier = nxt
        if ok:
            try:
                out.append(Character(G, vals, name="chi" + "".join("+" if s > 0 else "-" for s in signs)))
            except ValueError:
                pass
    return out


# ---------------------------------------------------------------------------
# actions on complexes


class ComplexAction:
    """A finite group acting on a complex by simplicial automorphisms.

    ``action`` maps a group element to the vertex permutation it induces.  By
    default the group's own permutations are used, which requires the group
    degree to equal the vertex count.
    """

    def __init__(self, group: FiniteGroup, complex_: SimplicialComplex,
                 action: Callable[[tuple], Sequence[int]] | dict | None = None, check: bool = True):
        self.group = group
        self.complex = complex_
        if action is None:
            if group.degree != complex_.vertex_count:
                raise ValueError("group degree differs from the vertex count")
            perms = {g: g for g in group.elements}
        elif callable(action):
            perms = {g: tuple(action(g)) for g in group.elements}
        else:
            perms = {tuple(g): tuple(p) for g, p in action.items()}
        self.perms = perms
        if check:
            self.check()

    def check(self):
        n = self.complex.vertex_count
        for g, p in self.perms.items():
            if len(p) != n or sorted(p) != list(range(n)):
                raise ValueError(f"element {g} does not permute the {n} vertices")
            for f in self.complex.facets:
                if tuple(sorted(p[v] for v in f)) not in self.complex:
                    raise ValueError(f"element {g} does not map simplex {f} to a simplex")
        G = self.group
        pool = G.elements if G.order <= 60 else G.generators()
        for g in pool:
            for h in pool:
                if compose(self.perms[g], self.perms[h]) != self.perms[compose(g, h)]:
                    raise ValueError("vertex action is not a homomorphism")
        return True

    def act(self, g, simplex) -> tuple[int, tuple]:
        """``(orientation sign, sorted image)`` of an oriented simplex."""
        p = self.perms[g]
        img = [p[v] for v in simplex]
        return permutation_sign(img), tuple(sorted(img))

    def vertex_orbits(self) -> list[list[int]]:
        seen = set()
        out = []
        for v in range(self.complex.vertex_count):
            if v in seen:
                continue
            orb = sorted({p[v] for p in self.perms.values()})
            seen.update(orb)
            out.append(orb)
        return out

    def stabilizer(self, simplex) -> list[tuple]:
        s = tuple(simplex)
        return [g for g in self.group.elements if self.act(g, s)[1] == s]

    def is_invariant(self, sub: SimplicialComplex) -> bool:
        return all(tuple(sorted(p[v] for v in s)) in sub for s in sub.simplices() for p in self.perms.values())

    def matrix(self, g, k) -> SparseMatrix:
        """Matrix of ``g`` on simplicial ``k``-chains."""
        simp = self.complex.simplices(k)
        idx = self.complex.index(k)
        cols = []
        for s in simp:
            sign, img = self.act(g, s)
            cols.append({idx[img]: sign})
        return SparseMatrix(len(simp), len(simp), cols)

    def projector(self, chi: "Character", k) -> SparseMatrix:
        """``e_χ = (1/|G|) Σ χ(g) g`` on ``k``-chains, with Fraction entries."""
        from fractions import Fraction
        n = len(self.complex.simplices(k))
        acc = [dict() for _ in range(n)]
        w = Fraction(1, self.group.order)
        for g in self.group.elements:
            c = chi(g) * w
            M = self.matrix(g, k)
            for j in range(n):
                for r, v in M.column(j).items():
                    acc[j][r] = acc[j].get(r, 0) + c * v
        return SparseMatrix(n, n, acc)


def is_regular_action(a: ComplexAction) -> bool:
    """True iff every element stabilising a simplex fixes it pointwise."""
    for g, p in a.perms.items():
        for s in a.complex.simplices():
            img = [p[v] for v in s]
            if img != list(s) and sorted(img) == list(s):
                return False
    return True


def is_free_on_simplices(a: ComplexAction) -> bool:
    """True iff no non-identity element maps a simplex to itself."""
    for g, p in a.perms.items():
        if g == a.group.identity:
            continue
        for s in a.complex.simplices():
            if tuple(sorted(p[v] for v in s)) == s:
                return False
    return True


def quotient_complex(a: ComplexAction) -> SimplicialComplex:
    """Orbit complex of a regular action: vertices are vertex orbits, simplices are simplex orbits.

    Raises :class:`NotRegularError` if the action is not regular or if two
    simplex orbits would collapse onto the same vertex-orbit set (subdivide
    once more in that case).
    """
    if not is_regular_action(a):
        raise NotRegularError("action is not regular; subdivide the complex before taking the quotient")
    orbits = a.vertex_orbits()
    which = {}
    for i, orb in enumerate(orbits):
        for v in orb:
            which[v] = i
    seen = {}
    for s in a.complex.simplices():
        img = tuple(sorted({which[v] for v in s}))
        if len(img) != len(s):
            raise NotRegularError(f"simplex {s} has two vertices in one orbit; subdivide the complex")
        canon = min(a.act(g, s)[1] for g in a.group.elements)
        prev = seen.setdefault(img, canon)
        if prev != canon:
            raise NotRegularError("distinct simplex orbits share vertex orbits; subdivide the complex")
    return SimplicialComplex(len(orbits), list(seen.keys()))


# ---------------------------------------------------------------------------
# isotypic chain complexes


class OrbitTable:
    """Canonical orbit data for every simplex of an acting complex.

    For each simplex ``s`` records ``(rep, factor)`` with
    ``[s] = factor · [rep]`` in the χ-coinvariants, where ``rep`` is the
    lexicographically least simplex of the orbit; ``factor = 0`` when the orbit
    dies (some stabilising element acts by sign ``-χ``).
    """

    def __init__(self, a: ComplexAction, chi: Character | None = None, max_dim: int | None = None):
        self.action = a
        self.chi = chi
        self.canon: dict[tuple, tuple] = {}
        self.reps: list[list[tuple]] = []
        top = a.complex.dimension if max_dim is None else min(max_dim, a.complex.dimension)
        elems = a.group.elements
        perms = [a.perms[g] for g in elems]
        vals = [chi(g) if chi is not None else 1 for g in elems]
        for k in range(top + 1):
            reps = []
            for s in a.complex.simplices(k):
                if s in self.canon:
                    continue
                images = {}
                dead = False
                for p, c in zip(perms, vals):
                    img = [p[v] for v in s]
                    t = tuple(sorted(img))
                    f = permutation_sign(img) * c
                    prev = images.get(t)
                    if prev is None:
                        images[t] = f
                    elif prev != f:
                        dead = True
                rep = min(images)
                if dead:
                    for t in images:
                        self.canon[t] = (rep, 0)
                    continue
                f0 = images[rep]
                for t, f in images.items():
                    self.canon[t] = (rep, f * f0)
                reps.append(rep)
            reps.sort()
            self.reps.append(reps)

    def __getitem__(self, simplex):
        return self.canon[simplex]


class EquivariantChainComplex(ChainComplex):
    """χ-isotypic part of the chain complex of an acting complex.

    Basis elements are alive orbits, labelled by their least simplex.  The
    boundary is written in coinvariant coordinates, which are isomorphic to the
    projector image (orbit sums weighted by χ) over the rationals.
    """

    def __init__(self, action: ComplexAction, chi: Character, bases, boundaries, complete_through=None,
                 table: OrbitTable | None = None):
        super().__init__(bases, boundaries, complete_through)
        self.action = action
        self.chi = chi
        self.table = table

    def orbit_sum(self, k, i) -> dict:
        """Projector-image vector (unnormalised) of basis element ``i`` in degree ``k``."""
        rep = self.bases[k][i]
        out = {}
        for g in self.action.group.elements:
            sign, img = self.action.act(g, rep)
            out[img] = out.get(img, 0) + sign * self.chi(g)
        return {s: v for s, v in out.items() if v}


def isotypic_chain_complex(a: ComplexAction, chi: Character | None = None, sub: SimplicialComplex | None = None,
                           max_dim: int | None = None) -> EquivariantChainComplex:
    """χ-isotypic (relative) chain complex of an acting complex."""
    chi = chi or Character.trivial(a.group)
    if sub is not None and not a.is_invariant(sub):
        raise ValueError("subcomplex is not invariant under the action")
    top = a.complex.dimension if max_dim is None else min(max_dim, a.complex.dimension)
    table = OrbitTable(a, chi, top)
    bases = []
    for k in range(top + 1):
        reps = table.reps[k]
        if sub is not None:
            reps = [s for s in reps if s not in sub]
        bases.append(reps)
    index = [{s: i for i, s in enumerate(b)} for b in bases]
    bounds = [SparseMatrix.zero(0, len(bases[0]))] if bases else []
    for k in range(1, top + 1):
        cols = []
        idx = index[k - 1]
        for s in bases[k]:
            col = {}
            for i in range(k + 1):
                rep, f = table[s[:i] + s[i + 1:]]
                if not f:
                    continue
                j = idx.get(rep)
                if j is None:
                    continue
                v = col.get(j, 0) + (-f if i % 2 else f)
                if v:
                    col[j] = v
                else:
                    del col[j]
            cols.append(col)
        bounds.append(SparseMatrix(len(bases[k - 1]), len(bases[k]), cols))
    complete = None if max_dim is None or max_dim >= a.complex.dimension else max_dim - 1
    return EquivariantChainComplex(a, chi, bases, bounds, complete, table)


def relative_isotypic_cohomology(a: ComplexAction, sub: SimplicialComplex, chi: Character | None = None) -> HomologyReport:
    """Dimensions of the χ-isotypic part of ``H^*(K, sub; Q)``.

    Over the rationals the isotypic cohomology is dual to isotypic homology,
    so the dimensions are read off the relative isotypic chain complex.
    """
    C = isotypic_chain_complex(a, chi, sub=sub)
    rep = C.homology("rational")
    name = (chi.name if chi is not None else "trivial")
    return HomologyReport(betti=rep.betti, coefficients=f"cohomology:{name}", chain_dims=rep.chain_dims)
