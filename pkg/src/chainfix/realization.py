"""Algebraic realization data for a convex compact body sampled by finitely many points.

The body lives in [0,1]^d and is embedded in the Hilbert cube by padding with
zeros.  From a target scale eps the pipeline builds a coarse dyadic grid (first
n coordinates) and a fine one (first k coordinates), the poset of components of
the fine fibres over coarse cells, the order complex on that poset, a ball cover
of the body indexed by components and its overlap cover indexed by simplices of
the order complex.  Two chain operators come out:

    nerve map : singular chains carried in the overlaps -> chains of the subdivided order complex
    composite : chains of the subdivided order complex  -> singular chains of the body

The composite factors through a cell decomposition of the order complex, a
cubical cell model and a piecewise-affine map back into the body.  Every
quantitative bound the construction relies on gets an exact certificate.
The body is represented by its finite sample: open sets are finite unions of
metric balls centred at sample points and singular simplices are affine with
sample vertices.
"""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, FrozenSet, Hashable, Iterable, List, Optional, Sequence, Set, Tuple

from .algebra import QQ, Chain, add_into, fmt_scalar
from .complexes import (CellComplex, CubicalGridComplex, Cube, Point, SimplicialComplex, add_cone,
                        add_join, affine_combination, as_point, bary_label, cone_cell_chain,
                        cone_chain, cube_boundary, cube_contraction, cube_dim, cube_faces,
                        cube_of_point, cylinder_diameter, diameter, dist, grid_subcomplex_from_sample,
                        join_cell_chain, ordered_simplex, set_distance, simplex_boundary)

Component = Tuple[int, Cube, int]          # (dim of base cube, base cube, component index)
KSimplex = Tuple[Component, ...]
Label = Tuple[int, KSimplex]       # barycentre of an order-complex simplex
SingularChain = Dict[Tuple, int]


class RealizationError(ValueError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


# ---------------------------------------------------------------- the body

@dataclass
class ConvexBody:
    generators: List[Point]
    sample: List[Point]
    weights: List[List[Fraction]]      # sample[i] = sum_g weights[i][g] * generators[g]

    @property
    def d(self) -> int:
        return len(self.generators[0])

    @staticmethod
    def combine(points: Sequence[Point], weights: Sequence) -> Point:
        return affine_combination(points, weights)

    @classmethod
    def from_weights(cls, generators: Sequence[Sequence], weights: Iterable[Sequence]) -> "ConvexBody":
        gens = [as_point(g) for g in generators]
        ws = [[Fraction(w) for w in row] for row in weights]
        body = cls(gens, [affine_combination(gens, w) for w in ws], ws)
        body.validate()
        return body

    def validate(self) -> None:
        if not self.generators:
            raise RealizationError("body has no generators")
        if not self.sample:
            raise RealizationError("body sample is empty")
        d = self.d
        for g in self.generators:
            if len(g) != d or any(not 0 <= c <= 1 for c in g):
                raise RealizationError("generator outside [0,1]^d", [str(c) for c in g])
        if len(self.weights) != len(self.sample):
            raise RealizationError("one weight row per sample point is required")
        for x, w in zip(self.sample, self.weights):
            if len(w) != len(self.generators) or any(t < 0 for t in w) or sum(w) != 1:
                raise RealizationError("weights are not a convex combination", [str(t) for t in w])
            if affine_combination(self.generators, w) != tuple(x):
                raise RealizationError("sample point does not match its weights", [str(c) for c in x])
        if len(set(self.sample)) != len(self.sample):
            raise RealizationError("duplicate sample point")

    def to_json(self) -> dict:
        return {"d": self.d,
                "generators": [[fmt_scalar(c) for c in g] for g in self.generators],
                "sample": [[fmt_scalar(c) for c in x] for x in self.sample],
                "weights": [[fmt_scalar(t) for t in w] for w in self.weights]}

    @classmethod
    def from_json(cls, data: dict) -> "ConvexBody":
        gens = [as_point(g) for g in data["generators"]]
        if "weights" in data:
            body = cls.from_weights(gens, data["weights"])
            if "sample" in data and [as_point(x) for x in data["sample"]] != body.sample:
                raise RealizationError("sample disagrees with its weight certificate")
            return body
        # without weights every sample point must be one of the generators
        rows = []
        for x in data.get("sample", data["generators"]):
            x = as_point(x)
            if x not in gens:
                raise RealizationError("sample point needs a weight certificate", [str(c) for c in x])
            rows.append([Fraction(int(g == x)) for g in gens])
        return cls.from_weights(gens, rows)


def triangle_body(steps_a: Sequence[int] = (0, 1, 2, 3, 4), steps_b: Sequence[int] = (0, 1, 2),
                  satellites: Sequence[Tuple[int, int]] = ((0, 0), (1, 1)), bridge: bool = True) -> ConvexBody:
    """Triangle in [0,1]^3 sampled at its corners and at a small cluster of interior points.

    Cluster points sit at barycentric offsets that are small multiples of 2^-21,
    so that they fall into grid cells of every dimension at that resolution.
    Each listed cluster point also gets three satellites 2^-40 away, close
    enough to share a cover ball with it, so that edges and triangles of the
    sample are carried by the cover.  The bridge puts a point in the open 3-cell
    next to the grid vertex of the cluster, far enough from the vertex point to be
    kept in its own member, plus points between the two that lie in both members.
    """
    gens = [(Fraction(1, 4),) * 3,
            (Fraction(3, 4), Fraction(1, 4), Fraction(1, 2)),
            (Fraction(1, 4), Fraction(3, 4), Fraction(3, 4))]
    h = Fraction(1, 2 ** 21)
    tiny = Fraction(1, 2 ** 40)
    rows = [[Fraction(int(i == g)) for i in range(3)] for g in range(3)]

    def row(a, b):
        return [1 - a - b, a, b]

    for i in steps_a:
        for j in steps_b:
            rows.append(row(Fraction(1, 2) + i * h, Fraction(1, 4) + j * h))
    for i, j in satellites:
        for da, db in ((1, 0), (0, 1), (1, 1)):
            rows.append(row(Fraction(1, 2) + i * h + da * tiny, Fraction(1, 4) + j * h + db * tiny))
    if bridge:
        far, mid = Fraction(3, 2 ** 25), Fraction(3, 2 ** 26)
        a0, b0 = Fraction(1, 2), Fraction(1, 4)
        rows += [row(a0 + far, b0 + far), row(a0 + mid, b0 + mid),
                 row(a0 + mid + tiny, b0 + mid), row(a0 + mid, b0 + mid + tiny)]
    return ConvexBody.from_weights(gens, rows)


# ---------------------------------------------------------------- certificates

@dataclass
class Certificate:
    name: str
    lhs: Fraction
    margin: Fraction
    rhs: Fraction
    strict: bool = True

    @property
    def holds(self) -> bool:
        total = self.lhs + self.margin
        return total < self.rhs if self.strict else total <= self.rhs

    def to_json(self) -> dict:
        return {"name": self.name, "lhs": fmt_scalar(self.lhs), "margin": fmt_scalar(self.margin),
                "rhs": fmt_scalar(self.rhs), "relation": "<" if self.strict else "<=",
                "holds": self.holds}


@dataclass(frozen=True)
class RealizationParams:
    eps: Fraction
    eps1: Fraction
    delta: Fraction
    n: int
    k: int
    depth: int            # coordinates carried explicitly; the tail beyond is bounded by 2^-depth

    @property
    def margin(self) -> Fraction:
        return Fraction(1, 2 ** self.depth)

    def to_json(self) -> dict:
        return {"eps": fmt_scalar(self.eps), "eps1": fmt_scalar(self.eps1), "delta": fmt_scalar(self.delta),
                "n": self.n, "k": self.k, "depth": self.depth, "margin": fmt_scalar(self.margin)}


def choose_parameters(body: Optional[ConvexBody], eps) -> RealizationParams:
    """Balls of the weighted l1 metric are convex, so convex combinations of points of
    B(x, r) stay in B(x, r) and their images have diameter at most 2r.  Hence
    eps1 = eps/16 and delta = eps1/8 meet both combination bounds; n and k are the
    least integers with 2^-n < eps1/8 and 2^(n+1-k) < delta."""
    eps = Fraction(eps)
    if eps <= 0 or eps > 1:
        raise RealizationError("eps must lie in (0, 1]", fmt_scalar(eps))
    eps1 = eps / 16
    delta = eps1 / 8
    n = 1
    while Fraction(1, 2 ** n) >= eps1 / 8:
        n += 1
    k = n + 1
    while Fraction(2 ** (n + 1), 2 ** k) >= delta:
        k += 1
    d = body.d if body is not None else 0
    return RealizationParams(eps, eps1, delta, n, k, max(d, k))


def parameter_certificates(params: RealizationParams) -> List[Certificate]:
    p = params
    m = p.margin
    return [
        Certificate("eps1 < eps", p.eps1, Fraction(0), p.eps),
        Certificate("combination bound at eps1: 2*eps1 < eps/4", 2 * p.eps1, m, p.eps / 4),
        Certificate("combination bound at delta: 2*delta < eps1/2", 2 * p.delta, m, p.eps1 / 2),
        Certificate("2^-n < eps1/8", Fraction(1, 2 ** p.n), Fraction(0), p.eps1 / 8),
        Certificate("2^(n+1-k) < delta", Fraction(2 ** (p.n + 1), 2 ** p.k), Fraction(0), p.delta),
    ]


_TRIPLE_WEIGHTS = [(1, 0, 0), (Fraction(1, 2), Fraction(1, 2), 0), (Fraction(1, 3),) * 3,
                   (Fraction(1, 4), Fraction(1, 4), Fraction(1, 2)), (0, Fraction(3, 4), Fraction(1, 4))]


def sampled_combination_bound(body: ConvexBody, radius: Fraction, limit: int = 200) -> Fraction:
    """Largest diameter of lam(B(x, radius)^3 x simplex) seen over sampled triples and weights."""
    worst = Fraction(0)
    seen = 0
    for x in body.sample:
        near = [y for y in body.sample if dist(x, y) < radius]
        triples = list(combinations(near, 3)) or [(x, x, x)]
        for trip in triples:
            images = [body.combine(trip, w) for w in _TRIPLE_WEIGHTS] + [x]
            worst = max(worst, diameter(images))
            seen += 1
            if seen >= limit:
                return worst
    return worst


# ---------------------------------------------------------------- grids and the component poset

@dataclass
class Grids:
    n: int
    k: int
    coarse: CubicalGridComplex
    fine: CubicalGridComplex

    def project(self, cell: Cube) -> Cube:
        return cell[:self.n]


def build_grids(body: ConvexBody, params: RealizationParams) -> Grids:
    if not body.sample:
        raise RealizationError("body sample is empty")
    n, k = params.n, params.k
    coarse = grid_subcomplex_from_sample(body.sample, n, k)
    fine = grid_subcomplex_from_sample(body.sample, k, k)
    grids = Grids(n, k, coarse, fine)
    for c in fine.cells_set:
        if grids.project(c) not in coarse:
            raise RealizationError("projection leaves the coarse grid", list(c))
    return grids


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


@dataclass
class ComponentPoset:
    n: int
    elements: List[Component]
    fibre: Dict[Component, FrozenSet[Cube]]          # fine cells of the component over its base cube
    down: Dict[Component, Dict[Cube, Component]]             # face of the base cube -> the unique smaller component over it
    by_base: Dict[Cube, List[Component]]

    @staticmethod
    def base_cube(j: Component) -> Cube:
        return j[1]

    @staticmethod
    def dim(j: Component) -> int:
        return j[0]

    def leq(self, a: Component, b: Component) -> bool:
        return self.down[b].get(a[1]) == a

    def below(self, j: Component) -> List[Component]:
        return sorted(set(self.down[j].values()))

    def block(self, j: Component) -> Set[Cube]:
        """Fine cells of the closed base cube times the component."""
        return {f + l for f in cube_faces(j[1]) for l in self.fibre[j]}

    def audit(self) -> List[str]:
        problems = []
        for j in self.elements:
            for a in self.below(j):
                for b in self.below(a):
                    if not self.leq(b, j):
                        problems.append(f"transitivity fails for {b} <= {a} <= {j}")
            for face, a in self.down[j].items():
                if not self.fibre[j] <= self.fibre[a]:
                    problems.append(f"fibre of {j} not inside fibre of {a}")
        return problems


def build_component_poset(grids: Grids) -> ComponentPoset:
    n = grids.n
    fibres: Dict[Cube, Set[Cube]] = {}
    for c in grids.fine.cells_set:
        fibres.setdefault(c[:n], set()).add(c[n:])
    for base_cube in grids.coarse.cells_set:
        assert fibres.get(base_cube), f"empty fibre over {base_cube}"
    elements: List[Component] = []
    fibre: Dict[Component, FrozenSet[Cube]] = {}
    by_base: Dict[Cube, List[Component]] = {}
    which: Dict[Tuple[Cube, Cube], Component] = {}
    for base_cube in sorted(fibres):
        cells = fibres[base_cube]
        uf = _UnionFind(cells)
        for l in cells:
            for f in cube_faces(l):
                if f != l:
                    uf.union(l, f)
        groups: Dict[Cube, List[Cube]] = {}
        for l in cells:
            groups.setdefault(uf.find(l), []).append(l)
        comps = sorted((frozenset(g) for g in groups.values()), key=min)
        for idx, comp in enumerate(comps):
            j = (cube_dim(base_cube), base_cube, idx)
            elements.append(j)
            fibre[j] = comp
            by_base.setdefault(base_cube, []).append(j)
            for l in comp:
                which[(base_cube, l)] = j
    down: Dict[Component, Dict[Cube, Component]] = {}
    for j in elements:
        base_cube = j[1]
        rep = min(fibre[j])
        dj = {}
        for face in cube_faces(base_cube):
            target = which[(face, rep)]
            if not fibre[j] <= fibre[target]:
                raise RealizationError("fibre component splits over a face", [list(base_cube), list(face)])
            dj[face] = target
        down[j] = dj
    elements.sort()
    return ComponentPoset(n, elements, fibre, down, by_base)


# ---------------------------------------------------------------- order complex and its subdivision

@dataclass
class OrderComplex:
    poset: ComponentPoset
    simplices: List[KSimplex]
    complex: SimplicialComplex
    base_cell: Dict[Component, Cube]

    @property
    def dim(self) -> int:
        return self.complex.dim


def build_order_complex(poset: ComponentPoset) -> OrderComplex:
    tops: Dict[Component, List[KSimplex]] = {}
    for j in sorted(poset.elements):
        chains = [(j,)]
        for a in poset.below(j):
            if a != j:
                chains.extend(c + (j,) for c in tops[a])
        tops[j] = chains
    simplices = sorted({s for cs in tops.values() for s in cs}, key=lambda s: (len(s), s))
    for s in simplices:
        dims = [a[0] for a in s]
        if dims != sorted(set(dims)):
            raise RealizationError("q is not injective on a simplex", [list(map(str, s))])
    cx = SimplicialComplex(simplices)
    if cx.dim > poset.n:
        raise RealizationError("order complex exceeds dimension n")
    return OrderComplex(poset, simplices, cx, {j: j[1] for j in poset.elements})


def subdivision_simplices(order: OrderComplex) -> List[Tuple[Label, ...]]:
    """Barycentric subdivision: flags s0 < s1 < ... of simplices, as sorted barycentre labels."""
    memo: Dict[KSimplex, List[Tuple[KSimplex, ...]]] = {}

    def flags(s: KSimplex):
        if s in memo:
            return memo[s]
        res = [(s,)]
        for r in range(1, len(s)):
            for f in combinations(s, r):
                res.extend(fl + (s,) for fl in flags(f))
        memo[s] = res
        return res

    out = set()
    for s in order.simplices:
        for fl in flags(s):
            out.add(tuple(bary_label(x) for x in fl))
    return sorted(out, key=lambda t: (len(t), t))


# ---------------------------------------------------------------- the covers

@dataclass
class BallCover:
    """Member j is the union of open balls B(c, radius[dim j]) over the centres c of j."""
    centres: Dict[Component, List[Point]]
    radius: Dict[int, Fraction]
    attempts: int

    def members(self) -> List[Component]:
        return sorted(j for j, cs in self.centres.items() if cs)

    def ball_of(self, j: Component, pts: Sequence[Point]) -> Optional[Point]:
        rho = self.radius[j[0]]
        for c in self.centres[j]:
            if all(dist(c, x) < rho for x in pts):
                return c
        return None

    def carrier_set(self, pts: Sequence[Point]) -> Tuple[Component, ...]:
        """Indices j whose member visibly contains the convex hull of pts (all in one ball)."""
        return tuple(j for j in self.members() if self.ball_of(j, pts) is not None)

    def diameter_bound(self, j: Component) -> Fraction:
        return diameter(self.centres[j]) + 2 * self.radius[j[0]]


def _home(grids: Grids, poset: ComponentPoset, x: Point) -> Component:
    c = cube_of_point(x, grids.k, grids.k)
    for j in poset.by_base[c[:grids.n]]:
        if c[grids.n:] in poset.fibre[j]:
            return j
    raise RealizationError("sample point has no home component", [str(t) for t in x])


def _in_block(grids: Grids, poset: ComponentPoset, x: Point, j: Component) -> bool:
    c = cube_of_point(x, grids.k, grids.k)
    return c[grids.n:] in poset.fibre[j] and c[:grids.n] in set(cube_faces(j[1]))


def build_ball_cover(body: ConvexBody, grids: Grids, poset: ComponentPoset,
                     max_attempts: int = 40) -> BallCover:
    n_scale = Fraction(1, 2 ** grids.n)
    top = max(j[0] for j in poset.elements)
    shrink = Fraction(1)
    for attempt in range(1, max_attempts + 1):
        centres: Dict[Component, List[Point]] = {j: [] for j in poset.elements}
        radius: Dict[int, Fraction] = {}
        lower: List[Tuple[Point, Fraction]] = []
        for r in range(top + 1):
            stratum = [j for j in poset.elements if j[0] == r]
            for j in stratum:
                centres[j] = [x for x in body.sample if _in_block(grids, poset, x, j)
                              and not any(dist(c, x) < rho for c, rho in lower)]
            live = [j for j in stratum if centres[j]]
            rho = n_scale / 4
            for a, b in combinations(live, 2):
                rho = min(rho, set_distance(centres[a], centres[b]) / 2)
            for j in live:
                rho = min(rho, (2 * n_scale - diameter(centres[j])) / 4)
            rho *= shrink
            radius[r] = rho
            lower.extend((c, rho) for j in live for c in centres[j])
        cover = BallCover(centres, radius, attempt)
        if _nerve_violation(cover, poset) is None:
            return cover
        shrink /= 2
    raise RealizationError("could not separate the cover within the retry bound",
                           _nerve_violation(cover, poset))


def _nerve_violation(cover: BallCover, poset: ComponentPoset):
    live = cover.members()
    for a, b in combinations(live, 2):
        if poset.leq(a, b) or poset.leq(b, a):
            continue
        reach = cover.radius[a[0]] + cover.radius[b[0]]
        for x in cover.centres[a]:
            for y in cover.centres[b]:
                if dist(x, y) < reach:
                    return {"members": [str(a), str(b)], "points": [[str(t) for t in x], [str(t) for t in y]]}
    return None


def cover_audit(cover: BallCover, poset: ComponentPoset, grids: Grids, body: ConvexBody) -> List[Certificate]:
    certs = []
    n_scale = Fraction(1, 2 ** grids.n)
    for j in cover.members():
        certs.append(Certificate(f"diam ball member {j[1]}#{j[2]} < 2*2^-n", cover.diameter_bound(j), Fraction(0), 2 * n_scale))
    strata: Dict[int, List[Component]] = {}
    for j in cover.members():
        strata.setdefault(j[0], []).append(j)
    for r, js in strata.items():
        for a, b in combinations(js, 2):
            certs.append(Certificate(f"separation in stratum {r}", 2 * cover.radius[r], Fraction(0),
                                     set_distance(cover.centres[a], cover.centres[b]), strict=False))
    for x in body.sample:
        if not cover.carrier_set([x]):
            raise RealizationError("sample point not covered", [str(t) for t in x])
    return certs


@dataclass
class IntersectionCover:
    """Overlap of the members in s, recorded through the sample points it contains."""
    cover: BallCover
    points: Dict[KSimplex, List[Point]]

    def nonempty(self) -> List[KSimplex]:
        return sorted(self.points, key=lambda s: (len(s), s))


def build_overlap_cover(body: ConvexBody, cover: BallCover, order: OrderComplex) -> IntersectionCover:
    simplices = set(order.simplices)
    points: Dict[KSimplex, List[Point]] = {}
    for x in body.sample:
        s = cover.carrier_set([x])
        if s not in simplices:
            raise RealizationError("nerve of the cover is not inside the order complex", [str(j) for j in s])
        for r in range(1, len(s) + 1):
            for f in combinations(s, r):
                points.setdefault(f, []).append(x)
    return IntersectionCover(cover, points)


# ---------------------------------------------------------------- singular chains of X

def singular_boundary(chain: SingularChain) -> SingularChain:
    out: SingularChain = {}
    for t, v in chain.items():
        if len(t) < 2:
            continue
        for i in range(len(t)):
            face = t[:i] + t[i + 1:]
            nv = out.get(face, 0) + (-v if i % 2 else v)
            if nv:
                out[face] = nv
            else:
                out.pop(face, None)
    return out


def _prepend(labels: Tuple, chain: SingularChain) -> SingularChain:
    return {labels + t: v for t, v in chain.items()}


def chain_points(chain: SingularChain) -> Set[Point]:
    return {p for t in chain for p in t}


# ---------------------------------------------------------------- singular chains to the nerve

class NerveMap:
    """Acyclic-carrier operator on affine singular simplices carried in the overlap cover."""

    def __init__(self, overlaps: IntersectionCover):
        self.overlaps = overlaps
        self.memo: Dict[Tuple[Point, ...], Chain] = {}

    def support(self, simplex: Tuple[Point, ...]) -> KSimplex:
        s = self.overlaps.cover.carrier_set(list(set(simplex)))
        if not s:
            raise RealizationError("simplex is carried in no member of the cover",
                                   [[str(c) for c in p] for p in simplex])
        return s

    def of_simplex(self, simplex: Tuple[Point, ...]) -> Chain:
        if simplex in self.memo:
            return self.memo[simplex]
        apex = bary_label(self.support(simplex))
        if len(simplex) == 1:
            out = {(apex,): 1}
        else:
            inner: Chain = {}
            for face, v in singular_boundary({simplex: 1}).items():
                add_into(inner, self.of_simplex(face), QQ, v)
            out = cone_chain(apex, inner)
        self.memo[simplex] = out
        return out

    def __call__(self, chain: SingularChain) -> Chain:
        out: Chain = {}
        for t, v in chain.items():
            add_into(out, self.of_simplex(t), QQ, v)
        return out


# ---------------------------------------------------------------- cell decomposition of the order complex

class CellDecomposition:
    """One cell per component (the full subcomplex over the faces of its base cube) and the
    chain map from the subdivision onto these cells."""

    def __init__(self, poset: ComponentPoset):
        self.poset = poset
        self.memo: Dict[Tuple[Label, ...], Chain] = {}
        self._contractions: Dict[Cube, Dict[Cube, Chain]] = {}

    def boundary(self, j: Component) -> Chain:
        dj = self.poset.down[j]
        return {dj[f]: v for f, v in cube_boundary(j[1]).items()}

    def closure(self, j: Component) -> Set[Component]:
        return set(self.poset.down[j].values())

    def chain_complex(self):
        cw = CellComplex()
        for j in sorted(self.poset.elements):
            cw.add(j, j[0], self.boundary(j))
        return cw

    def _contraction(self, base_cube: Cube) -> Dict[Cube, Chain]:
        if base_cube not in self._contractions:
            self._contractions[base_cube] = cube_contraction(base_cube)
        return self._contractions[base_cube]

    @staticmethod
    def target_cell(t: Tuple[Label, ...]) -> Component:
        return t[-1][1][-1]

    def __call__(self, t: Tuple[Label, ...]) -> Chain:
        if t in self.memo:
            return self.memo[t]
        j = self.target_cell(t)
        dj = self.poset.down[j]
        base_cube = j[1]
        if len(t) == 1:
            corner = tuple(x - 1 if x & 1 else x for x in base_cube)
            out = {dj[corner]: 1}
        else:
            z: Chain = {}
            for face, v in simplex_boundary(t).items():
                add_into(z, self(face), QQ, v)
            h = self._contraction(base_cube)
            out = {}
            for c, v in z.items():
                if dj.get(c[1]) != c:
                    raise RealizationError("image left the carrier cell", [str(c), str(j)])
                add_into(out, {dj[f]: w for f, w in h[c[1]].items()}, QQ, v)
        self.memo[t] = out
        return out


# ---------------------------------------------------------------- the cubical cell model

class CellModel:
    """Skeleton cells plus a cone per component and a join per comparable pair, with the
    chain map `lift` from the cell decomposition into it."""

    def __init__(self, poset: ComponentPoset, decomposition: CellDecomposition):
        self.poset = poset
        self.decomposition = decomposition
        self.skeleton: Dict[Component, FrozenSet[Cube]] = {
            j: frozenset(l for l in poset.fibre[j] if cube_dim(l) <= 1) for j in poset.elements}
        self.skeleton_blocks: Dict[Component, Set[Cube]] = {
            j: {f + l for f in cube_faces(j[1]) for l in self.skeleton[j]} for j in poset.elements}
        for j in poset.elements:
            if not self._connected(self.skeleton[j]):
                raise RealizationError("1-skeleton of a fibre component is disconnected", str(j))
        self.blocks: Dict[Component, Set[Cube]] = {}
        for j in poset.elements:
            cells: Set[Cube] = set()
            for a in poset.below(j):
                cells |= self.skeleton_blocks[a]
            self.blocks[j] = cells
        self.skeleton_cells = CellComplex()
        for c in sorted(set().union(*self.skeleton_blocks.values()), key=lambda c: (cube_dim(c), c)):
            self.skeleton_cells.add(c, cube_dim(c), cube_boundary(c))
        self.complex = CellComplex()
        for c in self.skeleton_cells.order:
            self.complex.add(c, self.skeleton_cells.dim_of[c], self.skeleton_cells.bd[c])
        for j in sorted(poset.elements):
            add_cone(self.complex, self.skeleton_cells, j, self.blocks[j])
        for j in sorted(poset.elements):
            for a in poset.below(j):
                if a != j:
                    add_join(self.complex, self.skeleton_cells, a, j, self.blocks[a])
        self.anchor: Dict[Component, Cube] = {j: j[1] + min(l for l in self.skeleton[j] if cube_dim(l) == 0)
                                      for j in poset.elements}
        self.lift: Dict[Component, Chain] = {}
        for j in sorted(poset.elements):
            self.lift[j] = self._lift_cell(j)

    @staticmethod
    def _connected(cells: FrozenSet[Cube]) -> bool:
        verts = [c for c in cells if cube_dim(c) == 0]
        if not verts:
            return False
        uf = _UnionFind(verts)
        for e in cells:
            if cube_dim(e) == 1:
                a, b = [f for f in cube_boundary(e)]
                uf.union(a, b)
        return len({uf.find(v) for v in verts}) == 1

    def _lift_boundary(self, j: Component) -> Chain:
        out: Chain = {}
        for f, v in self.decomposition.boundary(j).items():
            add_into(out, self.lift[f], QQ, v)
        return out

    def _path(self, j: Component, start: Cube, goal: Cube) -> Chain:
        cells = self.blocks[j]
        adj: Dict[Cube, List[Tuple[Cube, Cube, int]]] = {}
        for e in sorted(c for c in cells if cube_dim(c) == 1):
            bd = cube_boundary(e)
            hi = next(f for f, v in bd.items() if v == 1)
            lo = next(f for f, v in bd.items() if v == -1)
            adj.setdefault(lo, []).append((hi, e, 1))
            adj.setdefault(hi, []).append((lo, e, -1))
        prev: Dict[Cube, Tuple[Cube, Cube, int]] = {start: None}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            if v == goal:
                break
            for w, e, sign in adj.get(v, []):
                if w not in prev:
                    prev[w] = (v, e, sign)
                    queue.append(w)
        if goal not in prev:
            raise RealizationError("no path inside the block", str(j))
        out: Chain = {}
        v = goal
        while prev[v] is not None:
            u, e, sign = prev[v]
            add_into(out, {e: sign}, QQ)
            v = u
        return out

    def _lift_cell(self, j: Component) -> Chain:
        r = j[0]
        if r == 0:
            return {self.anchor[j]: 1}
        bd = self._lift_boundary(j)
        if r == 1:
            start = next(c for c, v in bd.items() if v == -1)
            goal = next(c for c, v in bd.items() if v == 1)
            return self._path(j, start, goal)
        if r == 2:
            return cone_cell_chain(j, bd)
        if r == 3:
            # each facet lifts to a cone over a cycle; joining that cycle with the edge from the facet apex
            # to this apex leaves the facet cones plus terms at this apex that cancel in the signed sum
            out: Chain = {}
            for f, eps in self.decomposition.boundary(j).items():
                add_into(out, join_cell_chain(f, j, self._lift_boundary(f)), QQ, -eps)
            return out
        raise RealizationError("explicit chain formulas cover cells of dimension <= 3 only", str(j))

    def in_region(self, cell, j: Component) -> bool:
        if isinstance(cell[0], int):
            return cell in self.blocks[j]
        kind = cell[0]
        apex = cell[2] if kind in ("edge", "join") else cell[1]
        return self.poset.leq(apex, j)

    def region_cells(self, j: Component) -> Set:
        return {c for c in self.complex.order if self.in_region(c, j)}


# ---------------------------------------------------------------- back into the body

class Assembly:
    """Singular chains of model cells, the piecewise-affine map into the body and the composite."""

    def __init__(self, body: ConvexBody, grids: Grids, model: CellModel, decomposition: CellDecomposition):
        self.grids = grids
        self.model = model
        self.decomposition = decomposition
        k = grids.k
        occupants: Dict[Cube, Point] = {}
        for x in sorted(body.sample):
            occupants.setdefault(cube_of_point(x, k, k), x)
        best: Dict[Cube, Tuple[int, Cube]] = {}
        for c in occupants:
            key = (-cube_dim(c), c)
            for f in cube_faces(c):
                if f not in best or key < best[f]:
                    best[f] = key
        self.rep: Dict[Cube, Point] = {f: occupants[key[1]] for f, key in best.items()}
        self.singular_memo: Dict = {}
        self.composite_memo: Dict[Component, SingularChain] = {}

    def point_of(self, cell: Cube) -> Point:
        if cell not in self.rep:
            raise RealizationError("fine cell without a representative point", list(cell))
        return self.rep[cell]

    def image_of(self, label) -> Point:
        kind, obj = label
        return self.point_of(obj) if kind == "b" else self.point_of(self.model.anchor[obj])

    def singular(self, cell) -> SingularChain:
        if cell in self.singular_memo:
            return self.singular_memo[cell]
        if isinstance(cell[0], int):
            if cube_dim(cell) == 0:
                out = {(("b", cell),): 1}
            else:
                inner: SingularChain = {}
                for f, v in cube_boundary(cell).items():
                    add_into(inner, self.singular(f), QQ, v)
                out = _prepend((("b", cell),), inner)
        elif cell[0] == "v":
            out = {(("v", cell[1]),): 1}
        elif cell[0] == "cone":
            out = _prepend((("v", cell[1]),), self.singular(cell[2]))
        elif cell[0] == "edge":
            out = {(("v", cell[1]), ("v", cell[2])): 1}
        else:
            out = _prepend((("v", cell[1]), ("v", cell[2])), self.singular(cell[3]))
        self.singular_memo[cell] = out
        return out

    def singular_chain(self, chain: Chain) -> SingularChain:
        out: SingularChain = {}
        for c, v in chain.items():
            add_into(out, self.singular(c), QQ, v)
        return out

    def push(self, chain: SingularChain) -> SingularChain:
        out: SingularChain = {}
        for t, v in chain.items():
            add_into(out, {tuple(self.image_of(l) for l in t): v}, QQ)
        return out

    def cell_image(self, j: Component) -> SingularChain:
        if j not in self.composite_memo:
            self.composite_memo[j] = self.push(self.singular_chain(self.model.lift[j]))
        return self.composite_memo[j]

    def composite(self, t: Tuple[Label, ...]) -> SingularChain:
        out: SingularChain = {}
        for j, v in self.decomposition(t).items():
            add_into(out, self.cell_image(j), QQ, v)
        return out

    def composite_chain(self, chain: Chain) -> SingularChain:
        out: SingularChain = {}
        for t, v in chain.items():
            add_into(out, self.composite(t), QQ, v)
        return out

    def image_points(self, j: Component) -> Set[Point]:
        """Images of the vertices of the model region of j, all representatives of its block."""
        return {self.point_of(c) for c in self.model.blocks[j]}


# ---------------------------------------------------------------- bundle and checks

@dataclass
class ConditionReport:
    ok: bool
    checked: int
    witness: Optional[dict] = None

    def to_json(self) -> dict:
        return {"ok": self.ok, "checked": self.checked, "witness": self.witness}


@dataclass
class RealizationBundle:
    body: ConvexBody
    params: RealizationParams
    grids: Grids
    poset: ComponentPoset
    order: OrderComplex
    subdivision: List[Tuple[Label, ...]]
    balls: BallCover
    overlaps: IntersectionCover
    nerve_map: NerveMap
    decomposition: CellDecomposition
    model: CellModel
    assembly: Assembly
    certificates: List[Certificate] = field(default_factory=list)
    audits: Dict[str, ConditionReport] = field(default_factory=dict)

    def sizes(self) -> dict:
        return {"coarse_grid": len(self.grids.coarse), "fine_grid": len(self.grids.fine),
                "components": len(self.poset.elements), "order_complex": len(self.order.simplices),
                "subdivision": len(self.subdivision), "balls": len(self.balls.members()),
                "overlaps": len(self.overlaps.points), "skeleton": len(self.model.skeleton_cells.order),
                "model": len(self.model.complex.order), "sample": len(self.body.sample)}

    def centre(self, s: KSimplex) -> Point:
        """A retained centre of the top member of s."""
        return min(self.balls.centres[s[-1]])

    def test_simplices(self, max_dim: int = 2) -> List[Tuple[Point, ...]]:
        pts = sorted(self.body.sample)
        out = []
        for r in range(1, max_dim + 2):
            for t in combinations(pts, r):
                if self.balls.carrier_set(list(t)):
                    out.append(t)
        return out


def build_realization(body: ConvexBody, eps, params: Optional[RealizationParams] = None) -> RealizationBundle:
    body.validate()
    params = params or choose_parameters(body, eps)
    grids = build_grids(body, params)
    poset = build_component_poset(grids)
    order = build_order_complex(poset)
    subdivision = subdivision_simplices(order)
    balls = build_ball_cover(body, grids, poset)
    overlaps = build_overlap_cover(body, balls, order)
    decomposition = CellDecomposition(poset)
    model = CellModel(poset, decomposition)
    assembly = Assembly(body, grids, model, decomposition)
    bundle = RealizationBundle(body, params, grids, poset, order, subdivision, balls, overlaps,
                               NerveMap(overlaps), decomposition, model, assembly)
    bundle.certificates = inequality_certificates(bundle)
    return bundle


def inequality_certificates(b: RealizationBundle) -> List[Certificate]:
    p = b.params
    m = p.margin
    certs = parameter_certificates(p)
    certs.append(Certificate("sampled combinations at eps1 within 2*eps1",
                             sampled_combination_bound(b.body, p.eps1), Fraction(0), 2 * p.eps1, strict=False))
    certs.append(Certificate("sampled combinations at delta within 2*delta",
                             sampled_combination_bound(b.body, p.delta), Fraction(0), 2 * p.delta, strict=False))
    n_scale, k_scale = Fraction(1, 2 ** p.n), Fraction(1, 2 ** p.k)
    # the explicit part of a cylinder diameter runs to depth D; the tail beyond D is the margin
    worst_n = max(cylinder_diameter(c, p.k) for c in b.grids.coarse.cells_set) - m
    certs.append(Certificate("diam of coarse-cell preimages < 2^-n + 2^-k", worst_n, m, n_scale + k_scale))
    worst_m = max(cylinder_diameter(c, p.k) for c in b.grids.fine.cells_set) - m
    certs.append(Certificate("diam of fine-cell preimages <= 2*2^-k", worst_m, m, 2 * k_scale, strict=False))
    certs.extend(cover_audit(b.balls, b.poset, b.grids, b.body))
    a = b.assembly
    within = Fraction(0)
    chains = Fraction(0)
    for j in b.poset.elements:
        cells = sorted(b.model.blocks[j])
        pts = sorted({a.point_of(c) for c in cells})
        within = max(within, diameter(pts))
        for c in cells:
            for f in cube_faces(c):
                if f in b.model.blocks[j]:
                    chains = max(chains, dist(a.point_of(c), a.point_of(f)))
    certs.append(Certificate("representatives within one block closer than 4*2^-n", within, m, 4 * n_scale))
    certs.append(Certificate("4*2^-n < eps1/2", 4 * n_scale, Fraction(0), p.eps1 / 2))
    certs.append(Certificate("representatives of a cell and its faces closer than delta", chains, m, p.delta))
    worst5 = max(diameter(sorted(a.image_points(j))) for j in b.poset.elements)
    certs.append(Certificate("diam of the image of each model region < eps/2", worst5, m, p.eps / 2))
    near = Fraction(0)
    final = Fraction(0)
    for s in b.overlaps.nonempty():
        xs = b.centre(s)
        top = s[-1]
        near = max([near] + [dist(xs, a.point_of(c)) for c in b.model.blocks[top]])
        for j in b.poset.elements:
            if b.poset.leq(top, j):
                final = max([final] + [dist(xs, y) for y in a.image_points(j)])
    certs.append(Certificate("overlap centre to top-block representatives < 3*2^-n", near, m, 3 * n_scale))
    certs.append(Certificate("overlap centre to images of regions above it < eps", final, m, p.eps))
    return certs


# ---------------------------------------------------------------- chain audits

def audit_chain_maps(b: RealizationBundle, seed: int = 0, random_count: int = 100) -> Dict[str, ConditionReport]:
    out: Dict[str, ConditionReport] = {}
    # subdivision onto cells: every simplex, boundary and carrier
    bad = None
    for t in b.subdivision:
        img = b.decomposition(t)
        j = b.decomposition.target_cell(t)
        if not set(img) <= b.decomposition.closure(j):
            bad = {"simplex": str(t), "reason": "carrier"}
            break
        lhs: Chain = {}
        for c, v in img.items():
            add_into(lhs, b.decomposition.boundary(c), QQ, v)
        rhs: Chain = {}
        for f, v in simplex_boundary(t).items():
            add_into(rhs, b.decomposition(f), QQ, v)
        if len(t) == 1:
            if sum(img.values()) != 1:
                bad = {"simplex": str(t), "reason": "augmentation"}
                break
        elif lhs != rhs:
            bad = {"simplex": str(t), "reason": "boundary"}
            break
    out["subdivision_to_cells"] = ConditionReport(bad is None, len(b.subdivision), bad)
    # cell decomposition boundaries square to zero
    bad = None
    for j in b.poset.elements:
        sq: Chain = {}
        for c, v in b.decomposition.boundary(j).items():
            add_into(sq, b.decomposition.boundary(c), QQ, v)
        if sq:
            bad = {"cell": str(j)}
            break
    out["cell_boundary_squared"] = ConditionReport(bad is None, len(b.poset.elements), bad)
    # model boundaries square to zero
    bad = None
    model = b.model.complex
    for c in model.order:
        if model.boundary_chain(model.bd[c]):
            bad = {"cell": str(c)}
            break
    out["model_boundary_squared"] = ConditionReport(bad is None, len(model.order), bad)
    # lift: chain map and carrier in the model region
    bad = None
    for j in b.poset.elements:
        img = b.model.lift[j]
        if not all(b.model.in_region(c, j) for c in img):
            bad = {"cell": str(j), "reason": "carrier"}
            break
        if j[0] == 0:
            if sum(img.values()) != 1:
                bad = {"cell": str(j), "reason": "augmentation"}
                break
        elif model.boundary_chain(img) != b.model._lift_boundary(j):
            bad = {"cell": str(j), "reason": "boundary"}
            break
    out["cells_to_model"] = ConditionReport(bad is None, len(b.poset.elements), bad)
    # singular chains of every skeleton cell and every cell used by a lift, labels inside the closure
    cells = set(b.model.skeleton_cells.order)
    for img in b.model.lift.values():
        cells |= model.closure(img)
    bad = None
    a = b.assembly
    for c in sorted(cells, key=str):
        m = a.singular(c)
        closure = model.closure([c])
        labels = {("b", e) for e in closure if isinstance(e[0], int)} | \
                 {("v", e[1]) for e in closure if not isinstance(e[0], int) and e[0] == "v"}
        if not all(l in labels for t in m for l in t):
            bad = {"cell": str(c), "reason": "carrier"}
            break
        if model.dim_of[c] > 0 and singular_boundary(m) != a.singular_chain(model.bd[c]):
            bad = {"cell": str(c), "reason": "boundary"}
            break
    out["model_to_singular"] = ConditionReport(bad is None, len(cells), bad)
    # composite: all vertices and edges of the subdivision plus seeded random simplices
    rng = random.Random(seed)
    battery = [t for t in b.subdivision if len(t) <= 2]
    higher = [t for t in b.subdivision if len(t) > 2]
    battery += rng.sample(higher, min(random_count, len(higher)))
    bad = None
    for t in battery:
        z = a.composite(t)
        if len(t) == 1:
            if sum(z.values()) != 1:
                bad = {"simplex": str(t), "reason": "augmentation"}
                break
            continue
        rhs: SingularChain = {}
        for f, v in simplex_boundary(t).items():
            add_into(rhs, a.composite(f), QQ, v)
        if singular_boundary(z) != rhs:
            bad = {"simplex": str(t), "reason": "boundary"}
            break
    out["composite"] = ConditionReport(bad is None, len(battery), bad)
    # nerve map on every test simplex, plus seeded random 2-chains
    tests = b.test_simplices()
    bad = _nerve_map_audit(b, tests)
    chains = []
    tris = [t for t in tests if len(t) == 3]
    for _ in range(random_count if tris else 0):
        chains.append({t: rng.choice([-2, -1, 1, 2]) for t in rng.sample(tris, min(3, len(tris)))})
    for ch in chains:
        if bad:
            break
        lhs = chain_boundary_k(b.nerve_map(ch))
        rhs = b.nerve_map(singular_boundary(ch))
        if lhs != rhs:
            bad = {"chain": str(ch), "reason": "boundary"}
    out["nerve_map"] = ConditionReport(bad is None, len(tests) + len(chains), bad)
    b.audits.update(out)
    return out


def chain_boundary_k(chain: Chain) -> Chain:
    out: Chain = {}
    for s, v in chain.items():
        add_into(out, simplex_boundary(s), QQ, v)
    return out


def _nerve_map_audit(b: RealizationBundle, tests) -> Optional[dict]:
    for t in tests:
        img = b.nerve_map.of_simplex(t)
        s = b.nerve_map.support(t)
        if not all(set(s) <= set(v[1]) for simplex in img for v in simplex):
            return {"simplex": _pts(t), "reason": "carrier"}
        if len(t) == 1:
            if sum(img.values()) != 1:
                return {"simplex": _pts(t), "reason": "augmentation"}
        elif chain_boundary_k(img) != b.nerve_map(singular_boundary({t: 1})):
            return {"simplex": _pts(t), "reason": "boundary"}
    return None


def _pts(pts) -> list:
    return [[fmt_scalar(c) for c in p] for p in pts]


# ---------------------------------------------------------------- the four conditions

def verify_realization_conditions(b: RealizationBundle, compact: Optional[Sequence[Point]] = None) -> Dict[str, ConditionReport]:
    eps = b.params.eps
    a = b.assembly
    radii: Dict[Tuple[Component, Point], Fraction] = {}

    def reach(j: Component, centre: Point) -> Fraction:
        key = (j, centre)
        if key not in radii:
            radii[key] = max((dist(centre, p) for p in chain_points(a.cell_image(j))), default=Fraction(0))
        return radii[key]

    # decomposition cells met by the composite of a subdivision simplex or any of its faces
    reach_cells: Dict[Tuple[Label, ...], Set[Component]] = {}
    for t in b.subdivision:
        cells = set(b.decomposition(t))
        for f in simplex_boundary(t):
            cells |= reach_cells[f]
        reach_cells[t] = cells
    report: Dict[str, ConditionReport] = {}

    # each overlap and the composite of the simplices above it within eps of the overlap centre
    witness = None
    nonempty = b.overlaps.nonempty()
    worst: Dict[KSimplex, Fraction] = {}
    for s in nonempty:
        xs = b.centre(s)
        rho = b.balls.radius[s[-1][0]]
        worst[s] = max(dist(xs, c) for c in b.balls.centres[s[-1]]) + rho
    for t in b.subdivision:
        base = t[0][1]
        for r in range(1, len(base) + 1):
            for s in combinations(base, r):
                if s in worst:
                    xs = b.centre(s)
                    worst[s] = max([worst[s]] + [reach(j, xs) for j in reach_cells[t]])
    for s in nonempty:
        if not worst[s] < eps:
            witness = {"simplex": str(s), "radius": fmt_scalar(worst[s])}
            break
    report["overlaps_in_balls"] = ConditionReport(witness is None, len(nonempty), witness)

    # each subdivision simplex, with the composites of its faces, inside a ball of radius eps
    witness = None
    for t in b.subdivision:
        centre = a.point_of(b.model.anchor[b.decomposition.target_cell(t)])
        r = max(reach(j, centre) for j in reach_cells[t])
        if not r < eps:
            witness = {"simplex": str(t), "radius": fmt_scalar(r)}
            break
    report["small_composites"] = ConditionReport(witness is None, len(b.subdivision), witness)

    # each test simplex and the round trip of its faces inside one ball (no homotopy is built)
    witness = None
    tests = b.test_simplices()
    for t in tests:
        s = b.nerve_map.support(t)
        xs = b.centre(s)
        pts = set(t)
        for r in range(1, len(t) + 1):
            for face in combinations(t, r):
                pts |= chain_points(a.composite_chain(b.nerve_map.of_simplex(face)))
        r = max(dist(xs, p) for p in pts)
        if not r < eps:
            witness = {"simplex": _pts(t), "radius": fmt_scalar(r)}
            break
    report["round_trip_near"] = ConditionReport(witness is None, len(tests), witness)

    # simplices near the compact set are sent into order-complex cells near it
    witness = None
    compact = list(b.body.sample) if compact is None else [tuple(x) for x in compact]
    near_c: Set[Component] = set()
    for x in compact:
        near_c |= set(b.balls.carrier_set([x]))
    checked = 0
    for t in tests:
        s = b.nerve_map.support(t)
        if not set(s) & near_c:
            continue
        checked += 1
        img = b.nerve_map.of_simplex(t)
        if not all(set(simplex[0][1]) & near_c for simplex in img):
            witness = {"simplex": _pts(t)}
            break
    report["local_over_compact"] = ConditionReport(witness is None, checked, witness)
    return report


def realization_manifest(b: RealizationBundle, conditions: Dict[str, ConditionReport]) -> dict:
    certs = [c.to_json() for c in b.certificates]
    return {"params": b.params.to_json(), "sizes": b.sizes(), "cover_attempts": b.balls.attempts,
            "radii": {str(r): fmt_scalar(v) for r, v in sorted(b.balls.radius.items())},
            "certificates": certs,
            "certificates_hold": all(c.holds for c in b.certificates),
            "audits": {k: v.to_json() for k, v in sorted(b.audits.items())},
            "conditions": {k: v.to_json() for k, v in sorted(conditions.items())},
            "passed": all(c.holds for c in b.certificates) and all(v.ok for v in conditions.values())
            and all(v.ok for v in b.audits.values())}


# ---------------------------------------------------------------- algebraic retractions

@dataclass
class RetractionReport:
    identity_ok: bool
    locality_ok: bool
    witness: Optional[dict]
    neighbourhoods: Dict[str, List[str]]

    @property
    def ok(self) -> bool:
        return self.identity_ok and self.locality_ok


def check_algebraic_retraction(sub: SimplicialComplex, ambient: SimplicialComplex, operator: Dict[Tuple, Chain],
                               neighbourhoods: Optional[Dict[Hashable, Iterable[Hashable]]] = None
                               ) -> RetractionReport:
    """Check a chain operator from the ambient complex to a subcomplex as an algebraic retraction.

    Open sets are unions of open vertex stars, given by their vertex sets; a
    simplex lies in st(S) exactly when all its vertices are in S.  The operator
    must fix every simplex of the subcomplex.  For each vertex with a prescribed
    neighbourhood, a smaller neighbourhood whose simplices are sent inside it is
    searched among the star of the closed vertex star and the star of the vertex.
    """
    for s in sub.simplices:
        if s not in ambient:
            raise RealizationError("not a subcomplex of the ambient complex", list(s))
    for s in sorted(sub.simplices, key=lambda s: (len(s), s)):
        if operator.get(s, {}) != {s: 1}:
            return RetractionReport(False, False, {"simplex": list(s), "image": str(operator.get(s))}, {})
    if neighbourhoods is None:
        neighbourhoods = {v: set(sub.neighbors(v)) | {v} for v in sub.vertices}
    chosen: Dict[str, List[str]] = {}
    for x, target in sorted(neighbourhoods.items(), key=lambda kv: str(kv[0])):
        target = set(target)
        found = None
        for inner in (set(ambient.neighbors(x)) | {x}, {x}):
            inside = [s for s in ambient.simplices if set(s) <= inner]
            if all(set(v for t in operator.get(s, {}) for v in t) <= target for s in inside):
                found = inner
                break
        if found is None:
            return RetractionReport(True, False, {"vertex": str(x), "neighbourhood": sorted(map(str, target))}, chosen)
        chosen[str(x)] = sorted(map(str, found))
    return RetractionReport(True, True, None, chosen)


def retraction_operator(ambient: SimplicialComplex, vertex_map: Dict[Hashable, Hashable]) -> Dict[Tuple, Chain]:
    """Chain operator of a simplicial vertex map; degenerate images vanish."""
    out = {}
    for s in ambient.simplices:
        img = [vertex_map[v] for v in s]
        sign, t = ordered_simplex(img)
        out[s] = {t: sign} if sign else {}
    return out
