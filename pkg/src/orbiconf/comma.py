"""Finite groupoids, configuration groupoids and comma categories.

Everything here is enumerated exactly.  The base groupoid is the action
groupoid of a permutation group on a finite point set; configuration
groupoids are built from it with arrows ``(σ; g_1..g_n)`` sending
``x`` to ``y`` with ``y[σ(i)] = g_i·x[i]``.  Arrows are stored as
``(source, σ, gs)`` where ``gs`` holds group element indices.

The forgetful functor ``Conf_{n,m} -> Conf_n`` is the identity on objects
and arrows; only the allowed permutations differ.  Its comma categories
``x \\ p`` are groupoids, which is what makes the union-find skeleton exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations, product
from math import comb

from .errors import CapacityError, PreconditionError
from .groups import FiniteGroup, compose, inverse

DEFAULT_ARROW_CAPACITY = 5 * 10**6


class FiniteGroupoid:
    """Interface shared by the groupoids below.

    Subclasses provide ``objects``, ``hom``, ``arrows_from``,
    ``generating_arrows_from``, ``source``, ``target``, ``compose`` (``b ∘ a``),
    ``inverse`` and ``identity``.
    """

    objects: list

    def arrows(self, capacity: int = DEFAULT_ARROW_CAPACITY):
        if self.arrow_count() > capacity:
            raise CapacityError(f"{self.arrow_count()} arrows exceed capacity {capacity}")
        for x in self.objects:
            yield from self.arrows_from(x)

    def arrow_count(self) -> int:
        return sum(1 for x in self.objects for _ in self.arrows_from(x))

    def check_axioms(self, capacity: int = 10**5) -> bool:
        """Identities, inverses and associativity, checked exhaustively.

        Associativity is checked on triples whose last factor is a generating
        arrow, which suffices once the first two laws hold.
        """
        for a in self.arrows(capacity):
            x, y = self.source(a), self.target(a)
            if self.compose(a, self.identity(x)) != a or self.compose(self.identity(y), a) != a:
                return False
            ia = self.inverse(a)
            if self.compose(ia, a) != self.identity(x) or self.compose(a, ia) != self.identity(y):
                return False
            for b in self.arrows_from(y):
                for c in self.generating_arrows_from(self.target(b)):
                    if self.compose(c, self.compose(b, a)) != self.compose(self.compose(c, b), a):
                        return False
        return True


class ActionGroupoid(FiniteGroupoid):
    """``G ⋉ P`` for a permutation group ``G`` on ``P = {0..degree-1}``.

    Arrows are ``(g, x)`` with ``g`` an element index, going ``x -> g·x``.
    """

    def __init__(self, G: FiniteGroup):
        self.G = G
        self.objects = list(range(G.degree))
        els = G.elements
        self.act = [list(g) for g in els]
        self.mul = G.multiplication_table()
        self.inv = [G.index(inverse(g)) for g in els]
        self.e = G.index(G.identity)
        self.gens = [G.index(g) for g in G.generators()]
        orbit = {}
        for x in self.objects:
            if x not in orbit:
                for g in range(len(els)):
                    orbit.setdefault(self.act[g][x], x)
        self.orbit_of = [orbit[x] for x in self.objects]

    @classmethod
    def trivial(cls, points: int) -> "ActionGroupoid":
        return cls(FiniteGroup.trivial(points))

    @classmethod
    def generated_by(cls, generators, points: int) -> "ActionGroupoid":
        return cls(FiniteGroup.generated_by(generators, degree=points))

    @property
    def orbit_count(self) -> int:
        return len(set(self.orbit_of))

    def source(self, a):
        return a[1]

    def target(self, a):
        return self.act[a[0]][a[1]]

    def compose(self, b, a):
        if b[1] != self.target(a):
            raise ValueError("arrows are not composable")
        return (self.mul[b[0]][a[0]], a[1])

    def inverse(self, a):
        return (self.inv[a[0]], self.target(a))

    def identity(self, x):
        return (self.e, x)

    def hom(self, x, y):
        return [(g, x) for g in range(len(self.act)) if self.act[g][x] == y]

    def arrows_from(self, x):
        return [(g, x) for g in range(len(self.act))]

    def generating_arrows_from(self, x):
        return [(g, x) for g in self.gens]


def _block_permutations(blocks):
    """All permutations of ``range(n)`` preserving the consecutive blocks."""
    ranges = []
    start = 0
    for b in blocks:
        ranges.append(list(range(start, start + b)))
        start += b
    out = []
    for parts in product(*(permutations(r) for r in ranges)):
        out.append(tuple(x for part in parts for x in part))
    return sorted(out)


class ConfGroupoid(FiniteGroupoid):
    """``Conf_n`` of an action groupoid, or ``Conf_{n,m}`` when ``m`` is given.

    Objects are ordered ``n``-tuples of points in pairwise distinct orbits.
    With ``m`` the permutations are restricted to ``Σ_m × Σ_{n-m}`` acting on
    the first ``m`` and last ``n - m`` coordinates.
    """

    def __init__(self, base: ActionGroupoid, n: int, m: int | None = None,
                 capacity: int = DEFAULT_ARROW_CAPACITY):
        if n < 0:
            raise PreconditionError("n must be non-negative")
        if m is not None and not 0 <= m <= n:
            raise PreconditionError("need 0 <= m <= n")
        self.base = base
        self.n = n
        self.m = m
        self.blocks = tuple(b for b in ((n,) if m is None else (m, n - m)) if b)
        self.perms = _block_permutations(self.blocks)
        self._perm_set = set(self.perms)
        per_object = len(self.perms) * len(base.act) ** n
        count = 0
        objs = []
        orb = base.orbit_of
        for t in permutations(base.objects, n):
            if len({orb[x] for x in t}) == n:
                objs.append(t)
                count += 1
                if count * per_object > capacity:
                    raise CapacityError(f"Conf_{n} groupoid exceeds {capacity} arrows")
        self.objects = objs
        self._per_object = per_object

    def arrow_count(self) -> int:
        return len(self.objects) * self._per_object

    def is_object(self, x) -> bool:
        orb = self.base.orbit_of
        return len(x) == self.n and len({orb[v] for v in x}) == self.n

    def allows(self, sigma) -> bool:
        return tuple(sigma) in self._perm_set

    def source(self, a):
        return a[0]

    def target(self, a):
        x, sigma, gs = a
        act = self.base.act
        y = [0] * self.n
        for i in range(self.n):
            y[sigma[i]] = act[gs[i]][x[i]]
        return tuple(y)

    def compose(self, b, a):
        """``b ∘ a``; ``y[σ(i)] = g_i x_i`` then ``z[τ(j)] = h_j y_j``."""
        if b[0] != self.target(a):
            raise ValueError("arrows are not composable")
        x, sigma, gs = a
        _, tau, hs = b
        mul = self.base.mul
        return (x, compose(tau, sigma), tuple(mul[hs[sigma[i]]][gs[i]] for i in range(self.n)))

    def inverse(self, a):
        x, sigma, gs = a
        si = inverse(sigma)
        inv = self.base.inv
        return (self.target(a), si, tuple(inv[gs[si[j]]] for j in range(self.n)))

    def identity(self, x):
        return (tuple(x), tuple(range(self.n)), (self.base.e,) * self.n)

    def arrows_from(self, x):
        k = len(self.base.act)
        for sigma in self.perms:
            for gs in product(range(k), repeat=self.n):
                yield (x, sigma, gs)

    def hom(self, x, y):
        act = self.base.act
        k = len(act)
        out = []
        for sigma in self.perms:
            choices = [[g for g in range(k) if act[g][x[i]] == y[sigma[i]]] for i in range(self.n)]
            for gs in product(*choices):
                out.append((tuple(x), sigma, gs))
        return out

    def generating_arrows_from(self, x):
        n = self.n
        e = self.base.e
        ident = tuple(range(n))
        out = []
        start = 0
        for b in self.blocks:
            for i in range(start, start + b - 1):
                s = list(ident)
                s[i], s[i + 1] = s[i + 1], s[i]
                out.append((tuple(x), tuple(s), (e,) * n))
            start += b
        for i in range(n):
            for g in self.base.gens:
                gs = [e] * n
                gs[i] = g
                out.append((tuple(x), ident, tuple(gs)))
        return out


def conf_groupoid(base: ActionGroupoid, n: int, m: int | None = None,
                  capacity: int = DEFAULT_ARROW_CAPACITY) -> ConfGroupoid:
    return ConfGroupoid(base, n, m, capacity)


@dataclass
class ForgetfulFunctor:
    """``p : Conf_{n,m} -> Conf_n``, the identity on objects and arrows."""

    source: ConfGroupoid
    target: ConfGroupoid

    @classmethod
    def build(cls, base: ActionGroupoid, n: int, m: int, capacity: int = DEFAULT_ARROW_CAPACITY):
        return cls(ConfGroupoid(base, n, m, capacity), ConfGroupoid(base, n, None, capacity))

    def on_object(self, c):
        return c

    def on_arrow(self, h):
        return h

    def object_preimages(self, y):
        return [y] if self.source.is_object(y) else []


class CommaCategory:
    """``x \\ p``: objects ``(c, f)`` with ``f : x -> p(c)``, morphisms ``h : c_1 -> c_2``
    in the source with ``p(h) ∘ f_1 = f_2``.
    """

    is_groupoid = True

    def __init__(self, p: ForgetfulFunctor, x):
        D = p.target
        if not D.is_object(x):
            raise PreconditionError(f"{x} is not an object of Conf_{D.n}")
        self.p = p
        self.x = tuple(x)
        objs = []
        for f in D.arrows_from(self.x):
            for c in p.object_preimages(D.target(f)):
                objs.append((c, f))
        self.objects = objs
        self.index = {o: i for i, o in enumerate(objs)}
        self._generating = None
        self._step = {}

    def __len__(self):
        return len(self.objects)

    def is_morphism(self, a, h, b) -> bool:
        (c1, f1), (c2, f2) = self.objects[a], self.objects[b]
        C, D = self.p.source, self.p.target
        if C.source(h) != c1 or C.target(h) != c2 or not C.allows(h[1]):
            return False
        return D.compose(self.p.on_arrow(h), f1) == f2

    def hom(self, a, b) -> list:
        (c1, f1), (c2, f2) = self.objects[a], self.objects[b]
        D = self.p.target
        return [h for h in self.p.source.hom(c1, c2) if D.compose(self.p.on_arrow(h), f1) == f2]

    def identity(self, a):
        return self.p.source.identity(self.objects[a][0])

    def _moves(self, arrows_from):
        C, D = self.p.source, self.p.target
        for a, (c, f) in enumerate(self.objects):
            for h in arrows_from(c):
                g = D.compose(self.p.on_arrow(h), f)
                b = self.index[(C.target(h), g)]
                yield a, h, b

    def generating_morphisms(self):
        """Morphisms given by generating arrows of the source groupoid (cached)."""
        if self._generating is None:
            self._generating = list(self._moves(self.p.source.generating_arrows_from))
            self._step = {(a, h): b for a, h, b in self._generating}
        return self._generating

    def step(self, a, h):
        """Target index of the generating morphism ``h`` out of object ``a``."""
        self.generating_morphisms()
        return self._step.get((a, h))

    def morphisms(self, capacity: int = DEFAULT_ARROW_CAPACITY):
        C = self.p.source
        if len(self.objects) * C._per_object > capacity:
            raise CapacityError("comma category has too many morphisms to list")
        return self._moves(C.arrows_from)

    def check(self, full: bool = False) -> bool:
        moves = self.morphisms() if full else self.generating_morphisms()
        return all(self.is_morphism(a, h, b) for a, h, b in moves)


def comma_category(p: ForgetfulFunctor, x) -> CommaCategory:
    return CommaCategory(p, x)


class SmallCategory:
    """An explicit finite category: named morphisms with a composition table.

    ``morphisms[name] = (source, target)``, ``table[(g, f)] = g ∘ f``.
    """

    def __init__(self, objects, morphisms: dict, identities: dict, table: dict):
        self.objects = list(objects)
        self.morphism_ends = dict(morphisms)
        self.identities = dict(identities)
        self.table = dict(table)
        self.index = {o: i for i, o in enumerate(self.objects)}

    @classmethod
    def discrete(cls, objects):
        objs = list(objects)
        ids = {o: ("id", o) for o in objs}
        return cls(objs, {ids[o]: (o, o) for o in objs}, ids, {(ids[o], ids[o]): ids[o] for o in objs})

    @classmethod
    def from_group(cls, G: FiniteGroup):
        els = G.elements
        mors = {g: ("*", "*") for g in els}
        table = {(h, g): compose(h, g) for h in els for g in els}
        return cls(["*"], mors, {"*": G.identity}, table)

    @property
    def is_groupoid(self) -> bool:
        return all(self._inverse(f) is not None for f in self.morphism_ends)

    def _inverse(self, f):
        s, t = self.morphism_ends[f]
        for g, (s2, t2) in self.morphism_ends.items():
            if s2 == t and t2 == s and self.table.get((g, f)) == self.identities[s] \
                    and self.table.get((f, g)) == self.identities[t]:
                return g
        return None

    def hom(self, a, b):
        oa, ob = self.objects[a], self.objects[b]
        return [f for f, (s, t) in self.morphism_ends.items() if s == oa and t == ob]

    def identity(self, a):
        return self.identities[self.objects[a]]

    def isomorphisms(self):
        for f, (s, t) in self.morphism_ends.items():
            if self._inverse(f) is not None:
                yield self.index[s], f, self.index[t]


@dataclass
class Skeleton:
    """One object per isomorphism class and the morphisms among them."""

    objects: list
    morphisms: dict = field(default_factory=dict)
    discrete: bool = True

    @property
    def size(self) -> int:
        return len(self.objects)


def skeleton(C) -> Skeleton:
    """Skeleton of a finite category (a :class:`CommaCategory` or :class:`SmallCategory`).

    Isomorphism classes come from union-find over isomorphisms (for a comma
    category, over generating morphisms; all of its morphisms are invertible).
    ``discrete`` holds iff every retained hom-set is empty except for
    identity endomorphisms.
    """
    parent = list(range(len(C.objects)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    moves = C.generating_morphisms() if isinstance(C, CommaCategory) else C.isomorphisms()
    for a, _, b in moves:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    reps = sorted({find(i) for i in range(len(C.objects))})
    morphisms = {}
    discrete = True
    for a in reps:
        for b in reps:
            hs = C.hom(a, b)
            if hs:
                morphisms[(a, b)] = hs
            expected = [C.identity(a)] if a == b else []
            if hs != expected:
                discrete = False
    return Skeleton([C.objects[i] for i in reps], morphisms, discrete)


def verify_comma_invariance(p: ForgetfulFunctor, b, full: bool = False) -> bool:
    """``b : x -> x'`` induces ``b* : x\\p -> x'\\p``, ``(c, f) ↦ (c, f ∘ b⁻¹)``.

    Checks that ``b*`` and ``(b⁻¹)*`` are well defined on objects and on
    morphisms (generating ones, or all with ``full``) and compose to
    identities both ways.
    """
    D = p.target
    b = (tuple(b[0]), tuple(b[1]), tuple(b[2]))
    x, x2 = D.source(b), D.target(b)
    binv = D.inverse(b)
    A, A2 = comma_category(p, x), comma_category(p, x2)
    return _invariance(A, A2, b, binv, full)


def _invariance(A: CommaCategory, A2: CommaCategory, b, binv, full) -> bool:
    D = A.p.target
    if len(A) != len(A2):
        return False

    def push(src: CommaCategory, dst: CommaCategory, arrow):
        out = []
        for c, f in src.objects:
            j = dst.index.get((c, D.compose(f, arrow)))
            if j is None:
                return None
            out.append(j)
        return out

    fwd = push(A, A2, binv)
    back = push(A2, A, b)
    if fwd is None or back is None:
        return False
    if len(set(fwd)) != len(A) or any(back[fwd[i]] != i for i in range(len(A))):
        return False
    if any(fwd[back[j]] != j for j in range(len(A2))):
        return False
    # on morphisms both functors are h ↦ h
    for src, dst, obj in ((A, A2, fwd), (A2, A, back)):
        if full:
            if not all(dst.is_morphism(obj[a], h, obj[a2]) for a, h, a2 in src.morphisms()):
                return False
        elif any(dst.step(obj[a], h) != obj[a2] for a, h, a2 in src.generating_morphisms()):
            return False
    return True


def comma_report(base: ActionGroupoid, n: int, m: int, full_arrows_limit: int = 2000,
                 capacity: int = DEFAULT_ARROW_CAPACITY) -> dict:
    """Skeleton sizes and invariance verdicts over every object of ``Conf_n``.

    Invariance is checked for every generating arrow out of every object
    (composites follow since ``(b∘c)* = b*∘c*``), and for every arrow when
    ``Conf_n`` has at most ``full_arrows_limit`` arrows.
    """
    if not 0 <= m <= n:
        raise PreconditionError("need 0 <= m <= n")
    p = ForgetfulFunctor.build(base, n, m, capacity)
    D = p.target
    cats = {x: comma_category(p, x) for x in D.objects}
    sizes = set()
    discrete = True
    well_formed = True
    for x, A in cats.items():
        sk = skeleton(A)
        sizes.add(sk.size)
        discrete = discrete and sk.discrete
        well_formed = well_formed and A.check()
    full = D.arrow_count() <= full_arrows_limit
    invariant = True
    checked = 0
    for x, A in cats.items():
        arrows = D.arrows_from(x) if full else D.generating_arrows_from(x)
        for b in arrows:
            checked += 1
            if not _invariance(A, cats[D.target(b)], b, D.inverse(b), full=False):
                invariant = False
    expected = comb(n, m)
    return {
        "n": n, "m": m, "points": len(base.objects), "group_order": len(base.act),
        "objects": len(D.objects), "skeleton_sizes": sorted(sizes), "expected": expected,
        "discrete": discrete, "morphisms_valid": well_formed,
        "invariance": invariant, "arrows_checked": checked, "all_arrows": full,
        "pass": discrete and well_formed and invariant and (not D.objects or sizes == {expected}),
    }
