"""Finite abstract simplicial complexes with a stable total vertex order,
free involutions, and exact rational geometric realizations.

A simplex is canonically represented as a tuple of vertex ids sorted by the
vertex order of its complex.  The vertex order is fixed at construction time
(declaration order) and is preserved verbatim by every operation in the
library; downstream cochain-level products depend on it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, Optional, Sequence, Tuple

from .errors import ComplexError
from . import linalg

Simplex = Tuple  # tuple of vertex ids, sorted by vertex rank


def _subsets(s: Simplex):
    for size in range(1, len(s) + 1):
        yield from combinations(s, size)


class SimplicialComplex:
    """Finite abstract simplicial complex.

    ``simplices`` stores every simplex (not only maximal ones) as canonical
    tuples.  The constructor does *not* force closure under faces, so that
    :func:`validate_complex` can report violations; use :meth:`from_maximal`
    to build a closed complex from generators.
    """

    __slots__ = ("vertices", "rank", "simplices", "_neighbors", "_dim", "_star_index")

    def __init__(self, vertices: Sequence, simplices: Iterable[Iterable]):
        self.vertices: tuple = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise ComplexError("duplicate vertex declaration")
        self.rank: Dict = {v: i for i, v in enumerate(self.vertices)}
        canon = set()
        for s in simplices:
            canon.add(self.canon(s))
        self.simplices: FrozenSet[Simplex] = frozenset(canon)
        self._neighbors: Optional[Dict] = None
        self._dim: Optional[int] = None
        self._star_index: Optional[Dict] = None

    # -- construction -----------------------------------------------------

    @classmethod
    def from_maximal(cls, vertices: Sequence, maximal: Iterable[Iterable]) -> "SimplicialComplex":
        """Closure of the given simplices, with every vertex as a 0-simplex."""
        tmp = cls(vertices, [])
        closed = {(v,) for v in vertices}
        for s in maximal:
            cs = tmp.canon(s)
            closed.update(_subsets(cs))
        return cls(vertices, closed)

    def canon(self, s: Iterable) -> Simplex:
        vs = set(s)
        if not vs:
            raise ComplexError("empty simplex")
        for v in vs:
            if v not in self.rank:
                raise ComplexError(f"unknown vertex {v!r}")
        return tuple(sorted(vs, key=self.rank.__getitem__))

    def sort_key(self, s: Simplex) -> tuple:
        return (len(s), tuple(self.rank[v] for v in s))

    # -- basic queries -----------------------------------------------------

    @property
    def dim(self) -> int:
        if self._dim is None:
            self._dim = max((len(s) for s in self.simplices), default=0) - 1
        return self._dim

    def has_simplex(self, s: Iterable) -> bool:
        try:
            return self.canon(s) in self.simplices
        except ComplexError:
            return False

    def sorted_simplices(self) -> list:
        return sorted(self.simplices, key=self.sort_key)

    def simplices_of_dim(self, d: int) -> list:
        return sorted((s for s in self.simplices if len(s) == d + 1), key=self.sort_key)

    def maximal_simplices(self) -> list:
        # Closure under faces means a simplex is maximal exactly when it is
        # not a codimension-one face of any other simplex.
        proper_faces: set = set()
        for s in self.simplices:
            if len(s) > 1:
                for i in range(len(s)):
                    proper_faces.add(s[:i] + s[i + 1 :])
        return sorted(
            (s for s in self.simplices if s not in proper_faces), key=self.sort_key
        )

    def f_vector(self) -> tuple:
        counts = [0] * (self.dim + 1 if self.simplices else 0)
        for s in self.simplices:
            counts[len(s) - 1] += 1
        return tuple(counts)

    def euler_characteristic(self) -> int:
        chi = 0
        for s in self.simplices:
            chi += (-1) ** (len(s) - 1)
        return chi

    def edges(self) -> list:
        return self.simplices_of_dim(1)

    def neighbors(self, v) -> set:
        if self._neighbors is None:
            nbrs: Dict = {u: set() for u in self.vertices}
            for s in self.simplices:
                if len(s) == 2:
                    a, b = s
                    nbrs[a].add(b)
                    nbrs[b].add(a)
            self._neighbors = nbrs
        return self._neighbors[v]

    def closed_star_vertices(self, v) -> set:
        """Vertex set of the closed star of ``v`` (assumes a closed complex)."""
        return {v} | self.neighbors(v)

    def star_simplices(self, v) -> list:
        """All simplices containing ``v`` (indexed once, then cached)."""
        if self._star_index is None:
            index: Dict = {u: [] for u in self.vertices}
            for s in self.simplices:
                for u in s:
                    index[u].append(s)
            self._star_index = index
        return self._star_index[v]

    def star_subcomplex(self, v) -> "SimplicialComplex":
        """Closed star: all simplices containing ``v`` together with their faces."""
        star = set()
        for s in self.star_simplices(v):
            star.update(_subsets(s))
        return self.subcomplex(star)

    def link_subcomplex(self, v) -> "SimplicialComplex":
        """All faces of star simplices that avoid ``v`` (closed complexes)."""
        link = {s[:i] + s[i + 1:] for s in self.star_simplices(v) if len(s) > 1
                for i in (s.index(v),)}
        return self.subcomplex(link)

    def subcomplex(self, simplices: Iterable[Simplex]) -> "SimplicialComplex":
        """Subcomplex on the given simplices (assumed face-closed), keeping
        the parent vertex order."""
        simps = {self.canon(s) for s in simplices}
        verts = sorted({v for s in simps for v in s}, key=self.rank.__getitem__)
        return SimplicialComplex(verts, simps)

    def full_subcomplex(self, vertex_set: Iterable) -> "SimplicialComplex":
        vs = set(vertex_set)
        simps = {s for s in self.simplices if set(s) <= vs}
        verts = sorted(vs & set(self.vertices), key=self.rank.__getitem__)
        return SimplicialComplex(verts, simps)

    def connected_components(self) -> list:
        """Vertex sets of connected components (via edges), deterministically
        ordered by their smallest vertex rank."""
        parent: Dict = {v: v for v in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for s in self.simplices:
            if len(s) >= 2:
                base = find(s[0])
                for u in s[1:]:
                    parent[find(u)] = base
        groups: Dict = {}
        for v in self.vertices:
            groups.setdefault(find(v), []).append(v)
        comps = [sorted(g, key=self.rank.__getitem__) for g in groups.values()]
        comps.sort(key=lambda g: self.rank[g[0]])
        return [set(g) for g in comps]

    def is_pure(self) -> bool:
        if not self.simplices:
            return True
        top = self.dim + 1
        facets = {s for s in self.simplices if len(s) == top}
        covered = set()
        for s in facets:
            covered.update(_subsets(s))
        return covered == self.simplices

    def is_closed_pseudomanifold(self) -> bool:
        """Pure, every ridge in exactly two facets, and each connected
        component strongly connected through ridges."""
        if not self.simplices:
            return False
        if not self.is_pure():
            return False
        d = self.dim
        if d == 0:
            return True
        facets = self.simplices_of_dim(d)
        ridge_count: Dict = {}
        for s in facets:
            for r in combinations(s, d):
                ridge_count.setdefault(r, []).append(s)
        if any(len(fs) != 2 for fs in ridge_count.values()):
            return False
        # Strong connectivity per component of the facet adjacency graph
        # must match vertex-level connectivity.
        fparent = {s: s for s in facets}

        def ffind(x):
            while fparent[x] != x:
                fparent[x] = fparent[fparent[x]]
                x = fparent[x]
            return x

        for a, b in ridge_count.values():
            fparent[ffind(a)] = ffind(b)
        facet_groups = len({ffind(s) for s in facets})
        return facet_groups == len(self.connected_components())

    # -- dunder ------------------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SimplicialComplex)
            and self.vertices == other.vertices
            and self.simplices == other.simplices
        )

    def __hash__(self) -> int:
        return hash((self.vertices, self.simplices))

    def __repr__(self) -> str:
        return f"SimplicialComplex({len(self.vertices)} vertices, {len(self.simplices)} simplices, dim {self.dim})"


@dataclass
class ValidationReport:
    closure_violations: list = field(default_factory=list)  # (simplex, missing face)
    orphan_vertices: list = field(default_factory=list)
    duplicate_declarations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.closure_violations or self.orphan_vertices or self.duplicate_declarations)

    def lines(self) -> list:
        out = []
        for s, f in self.closure_violations:
            out.append(f"closure violation: {s} missing face {f}")
        for v in self.orphan_vertices:
            out.append(f"orphan vertex: {v}")
        for s in self.duplicate_declarations:
            out.append(f"duplicate simplex declaration: {s}")
        return out


def validate_complex(c: SimplicialComplex, declared: Optional[Sequence] = None) -> ValidationReport:
    """Total validation: closure violations, orphan vertices, and (when the
    raw declaration list is supplied, e.g. by the parser) duplicates."""
    report = ValidationReport()
    for s in sorted(c.simplices, key=c.sort_key):
        if len(s) == 1:
            continue
        for f in combinations(s, len(s) - 1):
            if f not in c.simplices:
                report.closure_violations.append((s, f))
    zero = {s[0] for s in c.simplices if len(s) == 1}
    report.orphan_vertices = [v for v in c.vertices if v not in zero]
    if declared is not None:
        seen = set()
        for s in declared:
            cs = c.canon(s)
            if cs in seen:
                report.duplicate_declarations.append(cs)
            seen.add(cs)
    return report


class InvolutionComplex:
    """A simplicial complex with a simplicial involution given on vertices."""

    __slots__ = ("complex", "involution")

    def __init__(self, complex: SimplicialComplex, involution: Dict, check: bool = True):
        self.complex = complex
        self.involution = dict(involution)
        if check:
            self._validate()

    def _validate(self) -> None:
        cx = self.complex
        t = self.involution
        if set(t) != set(cx.vertices):
            raise ComplexError("involution must be defined on every vertex")
        for v in cx.vertices:
            if t[v] not in cx.rank:
                raise ComplexError(f"involution image {t[v]!r} is not a vertex")
            if t[t[v]] != v:
                raise ComplexError(f"involution is not of order 2 at {v!r}")
        for s in cx.simplices:
            if cx.canon(tuple(t[v] for v in s)) not in cx.simplices:
                raise ComplexError(f"involution does not map simplex {s} to a simplex")

    def map_simplex(self, s: Simplex) -> Simplex:
        return self.complex.canon(tuple(self.involution[v] for v in s))

    def fixed_vertices(self) -> list:
        return [v for v in self.complex.vertices if self.involution[v] == v]

    def fixed_simplices(self) -> list:
        return sorted(
            (s for s in self.complex.simplices if self.map_simplex(s) == s),
            key=self.complex.sort_key,
        )

    def is_free_on_simplices(self) -> bool:
        return not self.fixed_simplices()

    def __repr__(self) -> str:
        return f"InvolutionComplex({self.complex!r})"


@dataclass(frozen=True)
class BarycentricPoint:
    """A point of a complex, written in the barycentric coordinates of its
    minimal carrier simplex (all coordinates strictly positive, sum 1)."""

    support: Simplex
    coords: tuple

    @staticmethod
    def make(simplex: Sequence, coords: Sequence) -> "BarycentricPoint":
        cs = tuple(Fraction(c) for c in coords)
        if len(cs) != len(tuple(simplex)):
            raise ComplexError("coordinate count does not match simplex size")
        if any(c < 0 for c in cs):
            raise ComplexError("negative barycentric coordinate")
        if sum(cs) != 1:
            raise ComplexError("barycentric coordinates must sum to 1")
        pairs = [(v, c) for v, c in zip(simplex, cs) if c > 0]
        return BarycentricPoint(tuple(v for v, _ in pairs), tuple(c for _, c in pairs))

    def coord_map(self) -> Dict:
        return dict(zip(self.support, self.coords))

    @staticmethod
    def at_vertex(v) -> "BarycentricPoint":
        return BarycentricPoint((v,), (Fraction(1),))


class GeometricComplex:
    """A simplicial complex realized in Q^d with every simplex embedded."""

    __slots__ = ("complex", "coords", "ambient_dim")

    def __init__(self, complex: SimplicialComplex, coords: Dict, check: bool = True):
        self.complex = complex
        self.coords = {v: tuple(Fraction(x) for x in coords[v]) for v in complex.vertices}
        dims = {len(c) for c in self.coords.values()}
        if len(dims) > 1:
            raise ComplexError("inconsistent ambient dimension")
        self.ambient_dim = dims.pop() if dims else 0
        if check:
            for s in complex.maximal_simplices():
                if not linalg.affinely_independent([self.coords[v] for v in s]):
                    raise ComplexError(f"simplex {s} is not embedded")

    def point(self, bp: BarycentricPoint) -> tuple:
        acc = tuple(Fraction(0) for _ in range(self.ambient_dim))
        for v, c in zip(bp.support, bp.coords):
            acc = linalg.vec_add(acc, linalg.vec_scale(c, self.coords[v]))
        return acc

    def locate(self, point: Sequence) -> Optional[BarycentricPoint]:
        """Minimal simplex containing the point, with its coordinates, or
        ``None`` when the point lies outside the realization."""
        p = linalg.vec(point)
        for s in self.complex.sorted_simplices():
            pts = [self.coords[v] for v in s]
            rows = [[pts[j][i] for j in range(len(s))] for i in range(self.ambient_dim)]
            rows.append([Fraction(1)] * len(s))
            rhs = list(p) + [Fraction(1)]
            sol = linalg.solve(rows, rhs)
            if sol is None:
                continue
            # The simplex is embedded, so the system has at most one solution.
            if all(c >= 0 for c in sol):
                # verify exactly (solve() ignores redundant rows consistently)
                chk = tuple(Fraction(0) for _ in range(self.ambient_dim))
                for c, v in zip(sol, s):
                    chk = linalg.vec_add(chk, linalg.vec_scale(c, self.coords[v]))
                if chk == tuple(p):
                    return BarycentricPoint.make(s, sol)
        return None

    def simplex_diameter_sq(self, s: Iterable) -> Fraction:
        cs = self.complex.canon(s)
        if cs not in self.complex.simplices:
            raise ComplexError(f"unknown simplex {cs}")
        best = Fraction(0)
        for a, b in combinations(cs, 2):
            d = linalg.dist_sq(self.coords[a], self.coords[b])
            if d > best:
                best = d
        return best

    def mesh_sq(self) -> Fraction:
        return max((self.simplex_diameter_sq(s) for s in self.complex.simplices), default=Fraction(0))


def simplex_diameter_sq(g: GeometricComplex, s: Iterable) -> Fraction:
    """Squared Euclidean diameter of a realized simplex (attained at vertices)."""
    return g.simplex_diameter_sq(s)


def standard_basis_realization(c: SimplicialComplex) -> GeometricComplex:
    """Realize a complex by sending its vertices to standard basis vectors."""
    n = len(c.vertices)
    coords = {}
    for i, v in enumerate(c.vertices):
        e = [Fraction(0)] * n
        e[i] = Fraction(1)
        coords[v] = tuple(e)
    return GeometricComplex(c, coords, check=False)
