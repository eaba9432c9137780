"""Finite abstract simplicial complexes and the constructions built on them.

Simplices are strictly increasing tuples of vertex ids.  Orientation follows
the vertex order, so the boundary of ``(v_0, ..., v_k)`` is the alternating
sum of its codimension-one faces.
"""

from __future__ import annotations

import json
from itertools import combinations, product
from typing import Callable, Iterable, Sequence

from .chains import ChainComplex, HomologyReport
from .linalg import SparseMatrix


class SimplicialComplex:
    """Downward-closed family of simplices on the vertices ``0 .. vertex_count-1``.

    Every vertex id below ``vertex_count`` is a 0-simplex, even if no facet
    mentions it.  ``labels`` optionally records what each vertex stands for
    (for a subdivision, the simplex of the parent complex).

    >>> K = SimplicialComplex(3, [[0, 1], [1, 2]])
    >>> K.f_vector
    (3, 2)
    """

    def __init__(self, vertex_count: int, facets: Iterable[Sequence[int]] = (), labels=None,
                 _closed: dict | None = None):
        self.vertex_count = int(vertex_count)
        if self.vertex_count < 0:
            raise ValueError("vertex_count must be non-negative")
        if labels is not None:
            labels = tuple(labels)
            if len(labels) != self.vertex_count:
                raise ValueError("one label per vertex required")
        self.labels = labels
        if _closed is not None:
            by_dim = _closed
        else:
            by_dim = {0: {(v,) for v in range(self.vertex_count)}}
            for f in facets:
                s = tuple(sorted(set(int(v) for v in f)))
                if not s:
                    continue
                if len(s) != len(f):
                    raise ValueError(f"repeated vertex in facet {list(f)}")
                if s[0] < 0 or s[-1] >= self.vertex_count:
                    raise ValueError(f"facet {list(f)} uses a vertex outside 0..{self.vertex_count - 1}")
                if s in by_dim.get(len(s) - 1, ()):
                    continue
                for k in range(len(s), 1, -1):
                    layer = by_dim.setdefault(k - 1, set())
                    for face in combinations(s, k):
                        layer.add(face)
        top = max((k for k, v in by_dim.items() if v), default=-1)
        self._simplices = [sorted(by_dim.get(k, ())) for k in range(top + 1)]
        if self.vertex_count == 0:
            self._simplices = []
        self._index: list[dict] | None = None
        self._set: set | None = None

    # -- basic data --------------------------------------------------------

    @classmethod
    def from_simplices(cls, vertex_count, simplices: Iterable[tuple], labels=None):
        """Build from an already downward-closed collection (not re-closed)."""
        by_dim: dict = {0: {(v,) for v in range(vertex_count)}}
        for s in simplices:
            by_dim.setdefault(len(s) - 1, set()).add(tuple(s))
        return cls(vertex_count, labels=labels, _closed=by_dim)

    @property
    def dimension(self) -> int:
        return len(self._simplices) - 1

    def simplices(self, k: int | None = None) -> list:
        if k is None:
            return [s for layer in self._simplices for s in layer]
        if 0 <= k < len(self._simplices):
            return self._simplices[k]
        return []

    @property
    def f_vector(self) -> tuple:
        return tuple(len(layer) for layer in self._simplices)

    @property
    def facets(self) -> list:
        """Maximal simplices in canonical order."""
        covered = set()
        for layer in self._simplices[1:]:
            for s in layer:
                for face in combinations(s, len(s) - 1):
                    covered.add(face)
        return [s for layer in self._simplices for s in layer if s not in covered]

    def index(self, k) -> dict:
        if self._index is None:
            self._index = [{s: i for i, s in enumerate(layer)} for layer in self._simplices]
        return self._index[k] if k < len(self._index) else {}

    def __contains__(self, simplex) -> bool:
        s = tuple(simplex)
        return 0 < len(s) <= len(self._simplices) and s in self.index(len(s) - 1)

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * f for k, f in enumerate(self.f_vector))

    def __eq__(self, other):
        return (isinstance(other, SimplicialComplex) and self.vertex_count == other.vertex_count
                and self._simplices == other._simplices)

    def __hash__(self):
        return hash((self.vertex_count, tuple(map(tuple, self._simplices))))

    def __repr__(self):
        return f"SimplicialComplex(vertices={self.vertex_count}, f={self.f_vector})"

    def to_json(self) -> dict:
        return {"vertices": self.vertex_count, "facets": [list(f) for f in self.facets]}

    @classmethod
    def from_json(cls, data) -> "SimplicialComplex":
        if isinstance(data, str):
            data = json.loads(data)
        if not isinstance(data, dict) or "vertices" not in data or "facets" not in data:
            raise ValueError('complex JSON needs "vertices" and "facets"')
        n = data["vertices"]
        if not isinstance(n, int) or isinstance(n, bool):
            raise ValueError('"vertices" must be an integer')
        facets = data["facets"]
        if not isinstance(facets, list) or not all(isinstance(f, list) for f in facets):
            raise ValueError('"facets" must be a list of vertex lists')
        for f in facets:
            if not all(isinstance(v, int) and not isinstance(v, bool) for v in f):
                raise ValueError(f"facet {f} must contain integer vertex ids")
        return cls(n, facets)

    # -- chains -------------------------------------------------------------

    def chain_complex(self, sub: "SimplicialComplex | None" = None, max_dim: int | None = None) -> ChainComplex:
        """Simplicial chain complex, relative to ``sub`` when given."""
        top = self.dimension if max_dim is None else min(self.dimension, max_dim)
        bases = []
        for k in range(top + 1):
            layer = self.simplices(k)
            if sub is not None:
                layer = [s for s in layer if s not in sub]
            bases.append(layer)
        index = [{s: i for i, s in enumerate(b)} for b in bases]
        bounds = [SparseMatrix.zero(0, len(bases[0]) if bases else 0)] if bases else []
        for k in range(1, top + 1):
            cols = []
            idx = index[k - 1]
            for s in bases[k]:
                col = {}
                for i in range(k + 1):
                    j = idx.get(s[:i] + s[i + 1:])
                    if j is not None:
                        col[j] = -1 if i % 2 else 1
                cols.append(col)
            bounds.append(SparseMatrix(len(bases[k - 1]), len(bases[k]), cols))
        complete = None if max_dim is None or max_dim >= self.dimension else max_dim - 1
        return ChainComplex(bases, bounds, complete_through=complete)


def homology(K: SimplicialComplex, ring: str = "rational", sub: SimplicialComplex | None = None) -> HomologyReport:
    """Homology of ``K`` (or of the pair ``(K, sub)``) in degrees ``0..dim K``.

    >>> homology(SimplicialComplex(4, [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]])).betti
    (1, 0, 1)
    """
    return K.chain_complex(sub).homology(ring)


# ---------------------------------------------------------------------------
# posets and order complexes


class Poset:
    """Finite strict partial order on ``0 .. size-1`` given by a relation DAG.

    ``less`` lists pairs ``(a, b)`` meaning ``a < b``; the transitive closure
    is taken.  Cycles are rejected.
    """

    def __init__(self, size: int, less: Iterable[tuple[int, int]] = (), labels=None, _up=None):
        self.size = size
        self.labels = tuple(labels) if labels is not None else None
        if _up is not None:
            self._up = _up
            return
        succ = [set() for _ in range(size)]
        for a, b in less:
            if a == b:
                raise ValueError("strict order cannot relate an element to itself")
            succ[a].add(b)
        # topological order (Kahn) to detect cycles and build the closure
        indeg = [0] * size
        for a in range(size):
            for b in succ[a]:
                indeg[b] += 1
        order = [a for a in range(size) if indeg[a] == 0]
        i = 0
        while i < len(order):
            a = order[i]
            i += 1
            for b in succ[a]:
                indeg[b] -= 1
                if indeg[b] == 0:
                    order.append(b)
        if len(order) != size:
            raise ValueError("relation has a cycle")
        up = [set() for _ in range(size)]
        for a in reversed(order):
            for b in succ[a]:
                up[a].add(b)
                up[a] |= up[b]
        self._up = [frozenset(u) for u in up]

    def less(self, a, b) -> bool:
        return b in self._up[a]

    def above(self, a) -> frozenset:
        return self._up[a]

    def linear_extension(self) -> list:
        return sorted(range(self.size), key=self._height)

    def _height(self, a):
        # length of the longest chain below a (memoised lazily)
        if not hasattr(self, "_heights"):
            below = [[] for _ in range(self.size)]
            for x in range(self.size):
                for y in self._up[x]:
                    below[y].append(x)
            h = [None] * self.size

            def height(v):
                if h[v] is None:
                    h[v] = 1 + max((height(w) for w in below[v]), default=-1)
                return h[v]

            for v in range(self.size):
                height(v)
            self._heights = h
        return (self._heights[a], a)


def face_poset(K: SimplicialComplex) -> Poset:
    """Poset of nonempty simplices ordered by inclusion.

    Element ids list simplices by (dimension, lexicographic order), which is
    a linear extension of the inclusion order.
    """
    simplices = K.simplices()
    index = {s: i for i, s in enumerate(simplices)}
    up = [set() for _ in simplices]
    for s in simplices:
        i = index[s]
        for k in range(1, len(s)):
            for face in combinations(s, k):
                up[index[face]].add(i)
    return Poset(len(simplices), labels=simplices, _up=[frozenset(u) for u in up])


def _chains(size, up: Callable[[int], Iterable[int]], order_key=None):
    """All chains of a poset, each as a tuple increasing in the order."""
    out = []
    stack = [((a,), a) for a in range(size)]
    while stack:
        chain, last = stack.pop()
        out.append(chain)
        for b in up(last):
            stack.append((chain + (b,), b))
    return out


def order_complex(P: Poset) -> SimplicialComplex:
    """Simplicial complex whose simplices are the chains of ``P``.

    Vertex ids are relabelled along a linear extension so that every chain,
    read bottom to top, is a sorted vertex list.
    """
    ext = sorted(range(P.size), key=P._height)
    new_id = {a: i for i, a in enumerate(ext)}
    ups = [sorted(new_id[b] for b in P.above(a)) for a in ext]
    chains = _chains(P.size, lambda a: ups[a])
    labels = None
    if P.labels is not None:
        labels = [P.labels[a] for a in ext]
    return SimplicialComplex.from_simplices(P.size, chains, labels=labels)


def barycentric_subdivide(K: SimplicialComplex) -> SimplicialComplex:
    """Order complex of the face poset; vertex ``i`` is the ``i``-th simplex of K
    in (dimension, lexicographic) order, recorded in ``labels``.

    >>> barycentric_subdivide(SimplicialComplex(2, [[0, 1]])).f_vector
    (3, 2)
    """
    if K.vertex_count == 0:
        return SimplicialComplex(0)
    P = face_poset(K)
    # face ids are already a linear extension
    ups = [sorted(P.above(a)) for a in range(P.size)]
    chains = _chains(P.size, lambda a: ups[a])
    return SimplicialComplex.from_simplices(P.size, chains, labels=P.labels)


def subdivide(K: SimplicialComplex, r: int) -> SimplicialComplex:
    for _ in range(r):
        K = barycentric_subdivide(K)
    return K


def carrier_dimensions(K: SimplicialComplex) -> list[int]:
    """For a subdivision, the dimension of the parent simplex behind each vertex."""
    if K.labels is None:
        raise ValueError("complex carries no subdivision labels")
    return [len(lab) - 1 for lab in K.labels]


def product_complex(K: SimplicialComplex, n: int) -> SimplicialComplex:
    """Order complex of the ``n``-fold product of the face poset of ``K``.

    Vertices are labelled by ``n``-tuples of simplices of ``K`` and numbered by
    (total dimension, tuple of face ids), a linear extension of the product
    order.  Triangulates ``|K|^n``.
    """
    if n < 1:
        raise ValueError("product_complex needs n >= 1")
    P = face_poset(K)
    dims = [len(s) - 1 for s in P.labels]
    upeq = [sorted(set(P.above(a)) | {a}) for a in range(P.size)]
    elements = sorted(product(range(P.size), repeat=n), key=lambda t: (sum(dims[a] for a in t), t))
    index = {t: i for i, t in enumerate(elements)}

    def up(i):
        t = elements[i]
        for u in product(*(upeq[a] for a in t)):
            if u != t:
                yield index[u]

    chains = _chains(len(elements), up)
    labels = [tuple(P.labels[a] for a in t) for t in elements]
    return SimplicialComplex.from_simplices(len(elements), chains, labels=labels)


def staircase_product(K: SimplicialComplex, n: int, rank: Sequence[int]) -> SimplicialComplex:
    """Staircase triangulation of ``|K|^n``.

    ``rank`` must be injective on the vertices of every simplex; it orders the
    vertices of each simplex.  Vertices of the result are ``n``-tuples of
    vertices of ``K`` (kept in ``labels``), numbered by (total rank, tuple).
    Simplices are chains for the coordinatewise rank order whose coordinate
    projections are simplices of ``K``.  For ``K = Sd L`` with ``rank`` the
    carrier dimension this is ``product_complex(L, n)``.
    """
    if n < 1:
        raise ValueError("staircase_product needs n >= 1")
    for s in K.simplices(1):
        if rank[s[0]] == rank[s[1]]:
            raise ValueError(f"rank is not injective on the edge {s}")
    nbr = [set() for _ in range(K.vertex_count)]
    for a, b in K.simplices(1):
        if rank[a] < rank[b]:
            nbr[a].add(b)
        else:
            nbr[b].add(a)
    verts = [s[0] for s in K.simplices(0)]
    elements = sorted(product(verts, repeat=n), key=lambda t: (sum(rank[v] for v in t), t))
    index = {t: i for i, t in enumerate(elements)}
    out = []
    # chains grow upward; each coordinate keeps its set of used vertices
    stack = [((index[t],), t, tuple((v,) for v in t)) for t in elements]
    while stack:
        chain, last, used = stack.pop()
        out.append(chain)
        options = []
        for i, v in enumerate(last):
            opts = [(v, used[i])]
            for w in nbr[v]:
                cand = tuple(sorted(used[i] + (w,)))
                if cand in K:
                    opts.append((w, cand))
            options.append(opts)
        for choice in product(*options):
            nxt = tuple(c[0] for c in choice)
            if nxt == last:
                continue
            stack.append((chain + (index[nxt],), nxt, tuple(c[1] for c in choice)))
    return SimplicialComplex.from_simplices(len(elements), [tuple(sorted(c)) for c in out], labels=elements)


def full_subcomplex(K: SimplicialComplex, keep) -> SimplicialComplex:
    """Simplices of ``K`` all of whose vertices satisfy ``keep``.

    ``keep`` is a predicate on vertex ids or a collection of vertex ids.  The
    result keeps the vertex numbering of ``K``; vertices failing the predicate
    become unused ids and are not simplices, so the result is stored as a
    relabelled complex on the kept vertices with ``labels`` giving the
    original ids.
    """
    pred = keep if callable(keep) else (lambda v, _s=frozenset(keep): v in _s)
    kept = [v for v in range(K.vertex_count) if pred(v)]
    new = {v: i for i, v in enumerate(kept)}
    simplices = [tuple(new[v] for v in s) for s in K.simplices() if all(v in new for v in s)]
    labels = kept if K.labels is None else [K.labels[v] for v in kept]
    sub = SimplicialComplex.from_simplices(len(kept), simplices, labels=labels)
    sub.parent_vertices = tuple(kept)
    return sub


def subcomplex_on(K: SimplicialComplex, simplices: Iterable[tuple]) -> SimplicialComplex:
    """Subcomplex of ``K`` generated by the given simplices, keeping K's ids.

    Unlike :func:`full_subcomplex` the vertex numbering is unchanged, so it
    can serve as the ``sub`` of a relative chain complex.
    """
    by_dim: dict = {}
    for s in simplices:
        s = tuple(s)
        for k in range(1, len(s) + 1):
            for face in combinations(s, k):
                by_dim.setdefault(k - 1, set()).add(face)
    sub = SimplicialComplex(K.vertex_count, labels=K.labels, _closed=by_dim or {0: set()})
    return sub


class SimplicialMap:
    """Vertex map ``source -> target`` sending simplices onto simplices.

    Collapsed images are allowed; at chain level they map to zero.
    """

    def __init__(self, source: SimplicialComplex, target: SimplicialComplex, vertex_map: Sequence[int]):
        vertex_map = tuple(vertex_map)
        if len(vertex_map) != source.vertex_count:
            raise ValueError("vertex map must be defined on every source vertex")
        for f in source.facets:
            img = tuple(sorted({vertex_map[v] for v in f}))
            if img not in target:
                raise ValueError(f"image of {f} is not a simplex of the target")
        self.source = source
        self.target = target
        self.vertex_map = vertex_map

    def image(self, simplex):
        """``(sign, image)`` of an oriented simplex, or ``(0, None)`` if collapsed."""
        img = [self.vertex_map[v] for v in simplex]
        if len(set(img)) < len(img):
            return 0, None
        return permutation_sign(img), tuple(sorted(img))

    def chain_matrix(self, k) -> SparseMatrix:
        src = self.source.simplices(k)
        idx = self.target.index(k)
        cols = []
        for s in src:
            sign, img = self.image(s)
            cols.append({idx[img]: sign} if sign else {})
        return SparseMatrix(len(self.target.simplices(k)), len(src), cols)

    def compose(self, other: "SimplicialMap") -> "SimplicialMap":
        """``self ∘ other``."""
        if other.target != self.source:
            raise ValueError("maps are not composable")
        return SimplicialMap(other.source, self.target, [self.vertex_map[v] for v in other.vertex_map])


def permutation_sign(seq: Sequence) -> int:
    """Sign of the permutation sorting ``seq`` (entries distinct)."""
    seq = list(seq)
    sign = 1
    # cycle decomposition of the sorting permutation
    order = sorted(range(len(seq)), key=seq.__getitem__)
    seen = [False] * len(seq)
    for i in range(len(seq)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def simplex_boundary(simplex: tuple):
    """Faces of an oriented simplex with their incidence signs."""
    for i in range(len(simplex)):
        yield simplex[:i] + simplex[i + 1:], (-1) ** i
