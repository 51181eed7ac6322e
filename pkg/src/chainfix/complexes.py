"""Finite geometric complexes: simplicial, dyadic cubical and general cell complexes.

Simplices are sorted vertex tuples; the sorted order is the orientation of the
generator.  Points are tuples of Fractions in [0,1]^d and distances use the
weighted l1 metric sum_i 2^-(i+1) |x_i - y_i| (axes counted from 1).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product as iproduct
from typing import Dict, FrozenSet, Hashable, Iterable, List, Optional, Sequence, Set, Tuple

from .algebra import (Chain, ChainComplex, ChainHomotopy, ChainMorphism, Ring, QQ, add_into,
                      fmt_scalar, parse_scalar)

Point = Tuple[Fraction, ...]
Simplex = Tuple[Hashable, ...]


# ---------------------------------------------------------------- metric

def dist(x: Sequence, y: Sequence) -> Fraction:
    total = Fraction(0)
    w = Fraction(1, 2)
    for a, b in zip(x, y):
        total += w * abs(Fraction(a) - Fraction(b))
        w /= 2
    return total


def diameter(points: Iterable[Sequence]) -> Fraction:
    pts = list(points)
    best = Fraction(0)
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            d = dist(pts[i], pts[j])
            if d > best:
                best = d
    return best


def set_distance(a: Iterable[Sequence], b: Iterable[Sequence]) -> Fraction:
    b = list(b)
    return min(dist(x, y) for x in a for y in b)


def as_point(coords: Iterable) -> Point:
    return tuple(Fraction(c) for c in coords)


def affine_combination(points: Sequence[Point], weights: Sequence) -> Point:
    dim = len(points[0])
    return tuple(sum((Fraction(w) * p[i] for p, w in zip(points, weights)), Fraction(0))
                 for i in range(dim))


def barycenter(points: Sequence[Point]) -> Point:
    n = len(points)
    return affine_combination(points, [Fraction(1, n)] * n)


# ---------------------------------------------------------------- orientation helpers

def ordered_simplex(seq: Sequence) -> Tuple[int, Optional[Simplex]]:
    """Sign of the permutation sorting ``seq`` and the sorted tuple; (0, None) on repeats."""
    items = list(seq)
    if len(set(items)) != len(items):
        return 0, None
    sign = 1
    arr = items[:]
    # insertion sort, counting transpositions
    for i in range(1, len(arr)):
        j = i
        while j > 0 and arr[j - 1] > arr[j]:
            arr[j - 1], arr[j] = arr[j], arr[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(arr)


def simplex_boundary(s: Simplex) -> Chain:
    out: Chain = {}
    if len(s) <= 1:
        return out
    for i in range(len(s)):
        face = s[:i] + s[i + 1:]
        out[face] = out.get(face, 0) + (-1 if i % 2 else 1)
    return {f: v for f, v in out.items() if v}


def cone_chain(apex, chain: Chain) -> Chain:
    """apex * chain on sorted simplices; terms already containing apex vanish."""
    out: Chain = {}
    for s, v in chain.items():
        sign, t = ordered_simplex((apex,) + tuple(s))
        if sign:
            nv = out.get(t, 0) + sign * v
            if nv:
                out[t] = nv
            else:
                out.pop(t, None)
    return out


def chain_boundary(chain: Chain, ring: Ring = QQ) -> Chain:
    out: Chain = {}
    for s, v in chain.items():
        add_into(out, simplex_boundary(s), ring, v)
    return out


def all_faces(s: Simplex) -> List[Simplex]:
    return [f for r in range(1, len(s) + 1) for f in combinations(s, r)]


# ---------------------------------------------------------------- simplicial complexes

class SimplicialComplex:
    """Downward-closed family of sorted vertex tuples, optionally with coordinates."""

    def __init__(self, simplices: Iterable[Sequence], coords: Optional[Dict[Hashable, Point]] = None):
        closed: Set[Simplex] = set()
        for s in simplices:
            t = tuple(sorted(s))
            if len(set(t)) != len(t) or not t:
                raise ValueError(f"degenerate simplex {s!r}")
            if t in closed:
                continue
            closed.update(all_faces(t))
        self.simplices: FrozenSet[Simplex] = frozenset(closed)
        by_dim: Dict[int, List[Simplex]] = {}
        for s in closed:
            by_dim.setdefault(len(s) - 1, []).append(s)
        self.by_dim = {q: sorted(v) for q, v in by_dim.items()}
        self.coords: Dict[Hashable, Point] = dict(coords or {})
        self._chain_cache: Dict[Ring, ChainComplex] = {}
        self._stars: Optional[Dict[Hashable, List[Simplex]]] = None

    @property
    def vertices(self) -> List[Hashable]:
        return [s[0] for s in self.by_dim.get(0, [])]

    @property
    def dim(self) -> int:
        return max(self.by_dim) if self.by_dim else -1

    def __contains__(self, s) -> bool:
        return tuple(s) in self.simplices

    def __len__(self):
        return len(self.simplices)

    def cells(self, q: int) -> List[Simplex]:
        return self.by_dim.get(q, [])

    def chain_complex(self, ring: Ring = QQ) -> ChainComplex:
        if ring not in self._chain_cache:
            bd = {q: {s: simplex_boundary(s) for s in ss} for q, ss in self.by_dim.items() if q > 0}
            self._chain_cache[ring] = ChainComplex(ring, self.by_dim, bd)
        return self._chain_cache[ring]

    def star(self, v) -> List[Simplex]:
        """Open star of a vertex: all simplices containing it."""
        if self._stars is None:
            st: Dict[Hashable, List[Simplex]] = {}
            for s in self.simplices:
                for w in s:
                    st.setdefault(w, []).append(s)
            self._stars = st
        return self._stars.get(v, [])

    def neighbors(self, v) -> Set[Hashable]:
        return {w for s in self.cells(1) if v in s for w in s if w != v}

    def closure(self, cells: Iterable[Simplex]) -> Set[Simplex]:
        out: Set[Simplex] = set()
        for s in cells:
            out.update(all_faces(tuple(s)))
        return out

    def subcomplex(self, cells: Iterable[Simplex]) -> "SimplicialComplex":
        cl = self.closure(cells)
        coords = {v: self.coords[v] for (v,) in (s for s in cl if len(s) == 1) if v in self.coords}
        return SimplicialComplex(cl, coords)

    def point(self, v) -> Point:
        return self.coords[v]

    def simplex_points(self, s: Simplex) -> List[Point]:
        return [self.coords[v] for v in s]

    def to_json(self) -> dict:
        verts = self.vertices
        idx = {v: i for i, v in enumerate(verts)}
        maximal = [s for s in self.simplices
                   if not any(len(t) == len(s) + 1 and set(s) <= set(t) for t in self.star(s[0]))]
        out = {"simplices": sorted([sorted(idx[v] for v in s) for s in maximal])}
        if self.coords:
            out["vertices"] = [[fmt_scalar(c) for c in self.coords[v]] for v in verts]
        return out

    @classmethod
    def from_json(cls, d: dict) -> "SimplicialComplex":
        coords = None
        if "vertices" in d:
            coords = {i: as_point(parse_scalar(c) for c in row) for i, row in enumerate(d["vertices"])}
        simplices = [tuple(s) for s in d["simplices"]]
        if coords is not None:
            simplices += [(i,) for i in coords]
        return cls(simplices, coords)


def carrier(chain: Chain, complex_: Optional[SimplicialComplex] = None) -> Set[Simplex]:
    """Closed support of a simplicial chain, as the set of cells of its closure."""
    out: Set[Simplex] = set()
    for s, v in chain.items():
        if v:
            out.update(all_faces(tuple(s)))
    return out


def carrier_vertices(chain: Chain) -> Set[Hashable]:
    return {v for s, c in chain.items() if c for v in s}


# ---------------------------------------------------------------- barycentric subdivision

@dataclass
class Subdivision:
    fine: SimplicialComplex
    coarse: SimplicialComplex
    sd: ChainMorphism
    carrier_of: Dict[Simplex, Simplex]

    def apply(self, chain: Chain) -> Chain:
        out: Chain = {}
        for s, v in chain.items():
            add_into(out, self.sd.of(s), self.sd.target.ring, v)
        return out


def bary_label(s: Simplex):
    return (len(s) - 1, s)


def _sd_image(s: Simplex, memo: Dict[Simplex, Chain]) -> Chain:
    if s in memo:
        return memo[s]
    if len(s) == 1:
        out = {(bary_label(s),): 1}
    else:
        inner: Chain = {}
        for f, v in simplex_boundary(s).items():
            add_into(inner, _sd_image(f, memo), QQ, v)
        out = cone_chain(bary_label(s), inner)
    memo[s] = out
    return out


def barycentric_subdivision(k: SimplicialComplex, ring: Ring = QQ) -> Subdivision:
    """K' on barycenter labels (dim, simplex), the subdivision chain map and carriers."""
    fine_simplices = []
    carriers: Dict[Simplex, Simplex] = {}
    # chains sigma_0 < ... < sigma_r of faces; enumerate by extending from each simplex downward
    chains_by_top: Dict[Simplex, List[Tuple[Simplex, ...]]] = {}

    def flags(s: Simplex) -> List[Tuple[Simplex, ...]]:
        if s in chains_by_top:
            return chains_by_top[s]
        res = [(s,)]
        for r in range(1, len(s)):
            for f in combinations(s, r):
                for fl in flags(f):
                    res.append(fl + (s,))
        chains_by_top[s] = res
        return res

    for s in k.simplices:
        for fl in flags(s):
            t = tuple(sorted(bary_label(x) for x in fl))
            fine_simplices.append(t)
            carriers[t] = fl[-1]
    coords = {}
    if k.coords:
        for s in k.simplices:
            coords[bary_label(s)] = barycenter(k.simplex_points(s))
    fine = SimplicialComplex(fine_simplices, coords)
    memo: Dict[Simplex, Chain] = {}
    maps = {q: {s: dict(_sd_image(s, memo)) for s in ss} for q, ss in k.by_dim.items()}
    if ring != QQ:
        maps = {q: {s: {t: ring.norm(v) for t, v in ch.items()} for s, ch in m.items()}
                for q, m in maps.items()}
    sd = ChainMorphism(k.chain_complex(ring), fine.chain_complex(ring), maps)
    return Subdivision(fine, k, sd, carriers)


def iterated_subdivision(k: SimplicialComplex, times: int, ring: Ring = QQ) -> List[Subdivision]:
    out = []
    cur = k
    for _ in range(times):
        sub = barycentric_subdivision(cur, ring)
        out.append(sub)
        cur = sub.fine
    return out


def trail_complex(k: SimplicialComplex, sigma: Simplex) -> SimplicialComplex:
    """Simplices [b_s0 .. b_sr] of K' with sigma <= s0 < ... < sr."""
    sigma = tuple(sorted(sigma))
    if sigma not in k:
        raise ValueError(f"{sigma!r} is not a simplex of the complex")
    above = [s for s in k.simplices if set(sigma) <= set(s)]
    above_set = set(above)
    out = []

    def extend(chain: Tuple[Simplex, ...]):
        out.append(tuple(sorted(bary_label(x) for x in chain)))
        last = chain[-1]
        for s in above:
            if len(s) > len(last) and set(last) < set(s):
                extend(chain + (s,))

    for s in above:
        extend((s,))
    coords = {}
    if k.coords:
        coords = {bary_label(s): barycenter(k.simplex_points(s)) for s in above_set}
    return SimplicialComplex(out, coords)


# ---------------------------------------------------------------- stars of covers

def star_of_set(a: Iterable, members: Sequence[FrozenSet]) -> FrozenSet:
    """St(A, U): union of the members meeting A."""
    a = set(a)
    out: Set = set()
    for u in members:
        if a & u:
            out |= u
    return frozenset(out)


def star_cover(members: Sequence[FrozenSet]) -> List[FrozenSet]:
    """St(U) = {St(U, U) : U in U}."""
    return [star_of_set(u, members) for u in members]


def star_operations(members: Sequence[Iterable], a: Iterable) -> Tuple[FrozenSet, List[FrozenSet]]:
    mem = [frozenset(u) for u in members]
    return star_of_set(a, mem), star_cover(mem)


@dataclass(frozen=True)
class Ball:
    center: Point
    radius: Fraction

    def contains(self, x: Sequence) -> bool:
        return dist(self.center, x) < self.radius


# ---------------------------------------------------------------- general cell complexes

class CellComplex:
    """Finite regular-enough CW complex given by cells and integral boundaries."""

    def __init__(self):
        self.dim_of: Dict[Hashable, int] = {}
        self.bd: Dict[Hashable, Chain] = {}
        self.order: List[Hashable] = []

    def add(self, cell, dim: int, boundary: Chain):
        if cell in self.dim_of:
            raise ValueError(f"duplicate cell {cell!r}")
        for f in boundary:
            if f not in self.dim_of or self.dim_of[f] != dim - 1:
                raise ValueError(f"face {f!r} of {cell!r} missing or of wrong dimension")
        self.dim_of[cell] = dim
        self.bd[cell] = {f: v for f, v in boundary.items() if v}
        self.order.append(cell)

    def __contains__(self, cell):
        return cell in self.dim_of

    def cells(self, q: int) -> List[Hashable]:
        return [c for c in self.order if self.dim_of[c] == q]

    @property
    def dim(self) -> int:
        return max(self.dim_of.values(), default=-1)

    def boundary_chain(self, chain: Chain, ring: Ring = QQ) -> Chain:
        out: Chain = {}
        for c, v in chain.items():
            add_into(out, self.bd[c], ring, v)
        return out

    def chain_complex(self, ring: Ring = QQ) -> ChainComplex:
        bases: Dict[int, List] = {}
        for c in self.order:
            bases.setdefault(self.dim_of[c], []).append(c)
        bd = {q: {c: self.bd[c] for c in cs} for q, cs in bases.items() if q > 0}
        return ChainComplex(ring, bases, bd)

    def closure(self, cells: Iterable) -> Set:
        out: Set = set()
        stack = list(cells)
        while stack:
            c = stack.pop()
            if c in out:
                continue
            out.add(c)
            stack.extend(self.bd[c])
        return out

    @classmethod
    def from_simplicial(cls, k: SimplicialComplex) -> "CellComplex":
        cw = cls()
        for q in sorted(k.by_dim):
            for s in k.cells(q):
                cw.add(s, q, simplex_boundary(s))
        return cw


@dataclass
class Prism:
    complex: CellComplex
    bottom: Dict[Hashable, Hashable]
    top: Dict[Hashable, Hashable]

    def inclusions(self, base: CellComplex, ring: Ring = QQ):
        src = base.chain_complex(ring)
        tgt = self.complex.chain_complex(ring)
        i0 = ChainMorphism(src, tgt, {q: {c: {(c, 0): 1} for c in src.basis(q)} for q in src.degrees})
        i1 = ChainMorphism(src, tgt, {q: {c: {(c, 1): 1} for c in src.basis(q)} for q in src.degrees})
        h = ChainHomotopy(src, tgt, i0, i1,
                          {q: {c: {(c, "I"): 1} for c in src.basis(q)} for q in src.degrees})
        return i0, i1, h


def product_with_interval(m: CellComplex) -> Prism:
    """M x I with cells (c,0), (c,1), (c,'I') and d(c_I) = c_1 - c_0 - (dc)_I."""
    out = CellComplex()
    for end in (0, 1):
        for c in m.order:
            out.add((c, end), m.dim_of[c], {(f, end): v for f, v in m.bd[c].items()})
    for c in m.order:
        b: Chain = {(c, 1): 1, (c, 0): -1}
        for f, v in m.bd[c].items():
            b[(f, "I")] = b.get((f, "I"), 0) - v
        out.add((c, "I"), m.dim_of[c] + 1, b)
    return Prism(out, {c: (c, 0) for c in m.order}, {c: (c, 1) for c in m.order})


def project_prism(chain: Chain) -> Chain:
    """Cellular projection M x I -> M: ends go to their cell, prism cells to 0."""
    out: Chain = {}
    for (c, tag), v in chain.items():
        if tag != "I":
            add_into(out, {c: v}, QQ)
    return out


# cones and joins over a cell complex: apex cells are ('v', apex), cone cells
# ('cone', apex, c), edge ('edge', a, b) and join cells ('join', a, b, c).

def cone_cell_chain(apex, chain: Chain) -> Chain:
    """v * d for a chain d of the base; v * (augmentation unit) is the apex itself."""
    return {(("cone", apex, c) if c is not None else ("v", apex)): v for c, v in chain.items()}


def join_cell_chain(a, b, chain: Chain) -> Chain:
    return {(("join", a, b, c) if c is not None else ("edge", a, b)): v for c, v in chain.items()}


def _reduced_boundary(base: CellComplex, c) -> Chain:
    """Boundary with a vertex sent to the augmentation unit (key None)."""
    if base.dim_of[c] == 0:
        return {None: 1}
    return base.bd[c]


def add_cone(target: CellComplex, base: CellComplex, apex, cells: Optional[Iterable] = None):
    """Add v * c for every base cell (already present in target); d(vd) = d - v d~d."""
    if ("v", apex) in target:
        raise ValueError(f"apex {apex!r} already present")
    target.add(("v", apex), 0, {})
    chosen = set(base.order if cells is None else cells)
    for c in base.order:
        if c not in chosen:
            continue
        b: Chain = {c: 1}
        for f, v in _reduced_boundary(base, c).items():
            key = ("cone", apex, f) if f is not None else ("v", apex)
            b[key] = b.get(key, 0) - v
        target.add(("cone", apex, c), base.dim_of[c] + 1, b)


def add_join(target: CellComplex, base: CellComplex, a, b_, cells: Optional[Iterable] = None):
    """Add the edge ab and ab * c; d(ab d) = b d - a d + ab d~d.  Cones on a and b must exist."""
    if ("edge", a, b_) not in target:
        target.add(("edge", a, b_), 1, {("v", b_): 1, ("v", a): -1})
    chosen = set(base.order if cells is None else cells)
    for c in base.order:
        if c not in chosen:
            continue
        bd: Chain = {("cone", b_, c): 1, ("cone", a, c): -1}
        for f, v in _reduced_boundary(base, c).items():
            key = ("join", a, b_, f) if f is not None else ("edge", a, b_)
            bd[key] = bd.get(key, 0) + v
        target.add(("join", a, b_, c), base.dim_of[c] + 2, bd)


def cone_and_join(base: CellComplex, apex, apex2=None) -> CellComplex:
    """Cone of ``base`` on ``apex`` (and, if ``apex2`` is given, the join with the edge)."""
    out = CellComplex()
    for c in base.order:
        if c in (("v", apex), ("v", apex2)):
            raise ValueError("apex collides with a base cell")
        out.add(c, base.dim_of[c], base.bd[c])
    add_cone(out, base, apex)
    if apex2 is not None:
        add_cone(out, base, apex2)
        add_join(out, base, apex, apex2)
    return out


# ---------------------------------------------------------------- dyadic cubical grids

Cube = Tuple[int, ...]  # doubled coordinates: even 2j is the point j/2^k, odd 2j+1 the interval


def cube_dim(c: Cube) -> int:
    return sum(x & 1 for x in c)


def cube_boundary(c: Cube) -> Chain:
    out: Chain = {}
    seen_odd = 0
    for i, x in enumerate(c):
        if x & 1:
            sign = -1 if seen_odd % 2 else 1
            out[c[:i] + (x + 1,) + c[i + 1:]] = sign
            out[c[:i] + (x - 1,) + c[i + 1:]] = -sign
            seen_odd += 1
    return out


def cube_faces(c: Cube) -> List[Cube]:
    """All faces of the closed cube, itself included."""
    options = [((x - 1, x, x + 1) if x & 1 else (x,)) for x in c]
    return [tuple(t) for t in iproduct(*options)]


def cube_bounds(c: Cube, k: int) -> List[Tuple[Fraction, Fraction]]:
    step = Fraction(1, 2 ** k)
    out = []
    for x in c:
        if x & 1:
            out.append(((x - 1) // 2 * step, (x + 1) // 2 * step))
        else:
            out.append((x // 2 * step, x // 2 * step))
    return out


def cube_of_point(x: Sequence, m: int, k: int) -> Cube:
    """The open cell of the m-dimensional grid at resolution 2^-k containing p_m(x)."""
    out = []
    scale = 2 ** k
    for i in range(m):
        t = Fraction(x[i]) * scale if i < len(x) else Fraction(0)
        if t.denominator == 1:
            out.append(2 * t.numerator)
        else:
            out.append(2 * (t.numerator // t.denominator) + 1)
    return tuple(out)


def cube_in_open(x: Sequence, c: Cube, k: int) -> bool:
    return cube_of_point(x, len(c), k) == c


def cylinder_diameter(c: Cube, k: int) -> Fraction:
    """Diameter of the preimage of the closed cell under the first-m-coordinates projection.

    Coordinates past m range over all of [0,1], so their tail contributes 2^-m.
    """
    total = Fraction(0)
    w = Fraction(1, 2)
    for lo, hi in cube_bounds(c, k):
        total += w * (hi - lo)
        w /= 2
    return total + Fraction(1, 2 ** len(c))


def cube_contraction(c: Cube) -> Dict[Cube, Chain]:
    """Chain homotopy on the closed cube contracting it to its min corner.

    Returns h on every face, with dh + hd = id - (corner * augmentation) in all degrees.
    """
    corner = tuple(x - 1 if x & 1 else x for x in c)
    h: Dict[Cube, Chain] = {}
    for face in sorted(cube_faces(c), key=cube_dim):
        # tensor-product homotopy: sum_i p x .. x p x h_i x id x .. x id, with p the corner projection
        # and h_i(upper endpoint) = interval, h_i(lower endpoint) = 0, h_i(interval) = 0.
        out: Chain = {}
        for i, x in enumerate(face):
            if not c[i] & 1:
                continue
            lo = c[i] - 1
            if x != lo + 2:
                continue  # h_i kills the lower endpoint and the interval
            # axes before i must be projected to the corner: intervals vanish, points go to lo
            if any(face[j] & 1 for j in range(i)):
                continue
            pre = tuple(corner[j] for j in range(i))
            post = face[i + 1:]
            sign = 1  # no odd axes precede position i in the image besides those in pre (none)
            out[pre + (lo + 1,) + post] = sign
        h[face] = out
    return h


class CubicalGridComplex:
    def __init__(self, m: int, k: int, cells: Iterable[Cube]):
        closed: Set[Cube] = set()
        for c in cells:
            if len(c) != m:
                raise ValueError(f"cell {c!r} has wrong length for m={m}")
            closed.update(cube_faces(tuple(c)))
        self.m = m
        self.k = k
        self.cells_set: FrozenSet[Cube] = frozenset(closed)
        by_dim: Dict[int, List[Cube]] = {}
        for c in closed:
            by_dim.setdefault(cube_dim(c), []).append(c)
        self.by_dim = {q: sorted(v) for q, v in by_dim.items()}

    def __contains__(self, c):
        return c in self.cells_set

    def __len__(self):
        return len(self.cells_set)

    def cells(self, q: int) -> List[Cube]:
        return self.by_dim.get(q, [])

    @property
    def dim(self) -> int:
        return max(self.by_dim) if self.by_dim else -1

    def chain_complex(self, ring: Ring = QQ) -> ChainComplex:
        bd = {q: {c: cube_boundary(c) for c in cs} for q, cs in self.by_dim.items() if q > 0}
        return ChainComplex(ring, self.by_dim, bd)

    def to_json(self) -> dict:
        return {"dim": self.m, "k": self.k, "cells": [list(c) for q in sorted(self.by_dim)
                                                     for c in self.by_dim[q]]}

    @classmethod
    def from_json(cls, d: dict) -> "CubicalGridComplex":
        return cls(d["dim"], d["k"], [tuple(c) for c in d["cells"]])


def grid_subcomplex_from_sample(points: Iterable[Sequence], m: int, k: int) -> CubicalGridComplex:
    if k < 1:
        raise ValueError("resolution exponent must be >= 1")
    return CubicalGridComplex(m, k, {cube_of_point(x, m, k) for x in points})


# ---------------------------------------------------------------- standard desk-scale complexes

def point_complex() -> SimplicialComplex:
    return SimplicialComplex([(0,)], {0: (Fraction(0),)})


def segment() -> SimplicialComplex:
    return SimplicialComplex([(0, 1)], {0: as_point([0]), 1: as_point([1])})


def path3() -> SimplicialComplex:
    """Path a - m - b (vertices 0, 1, 2) in [0,1]."""
    return SimplicialComplex([(0, 1), (1, 2)],
                             {0: as_point([0]), 1: as_point([Fraction(1, 2)]), 2: as_point([1])})


def polygon(n: int, filled: bool = False) -> SimplicialComplex:
    """Regular-ish n-gon on vertices 0..n-1; filled adds a center vertex n."""
    # exact rational coordinates on the square boundary are enough for distance bookkeeping
    pts = {}
    for i in range(n):
        t = Fraction(4 * i, n)
        side, frac = int(t), t - int(t)
        x, y = [(frac, Fraction(0)), (Fraction(1), frac), (1 - frac, Fraction(1)),
                (Fraction(0), 1 - frac)][side]
        pts[i] = (Fraction(x), Fraction(y))
    edges = [tuple(sorted((i, (i + 1) % n))) for i in range(n)]
    if not filled:
        return SimplicialComplex(edges, pts)
    pts[n] = (Fraction(1, 2), Fraction(1, 2))
    tris = [tuple(sorted((i, (i + 1) % n, n))) for i in range(n)]
    return SimplicialComplex(tris, pts)


def hollow_triangle() -> SimplicialComplex:
    return polygon(3)


def hexagon_disk() -> SimplicialComplex:
    return polygon(6, filled=True)


def octahedron() -> SimplicialComplex:
    """Boundary of the cross-polytope: vertices 0..5 are +e1,-e1,+e2,-e2,+e3,-e3."""
    half = Fraction(1, 2)
    coords = {}
    for axis in range(3):
        for s, v in ((1, 2 * axis), (-1, 2 * axis + 1)):
            p = [half, half, half]
            p[axis] = half + s * half
            coords[v] = tuple(p)
    tris = [(a, b, c) for a in (0, 1) for b in (2, 3) for c in (4, 5)]
    return SimplicialComplex(tris, coords)


def antipode_vertex(v: int) -> int:
    return v ^ 1
