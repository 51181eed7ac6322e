"""Fixed-point index of chain morphisms on finite simplicial complexes.

Everything runs on a tower of iterated barycentric subdivisions of a base
complex.  A vertex at level j is the barycenter of a simplex one level down and is
interned as a small int, so chains at any level are dicts of sorted int
tuples.  Subdivision chain maps, the induced maps of a simplicial f and the
nerve projection back to a coarse level are all evaluated lazily.

The index of an admissible morphism on an open region is the Lefschetz
number of a composite on the chains of one subdivision level: cut away the
simplices near the complement of the region, subdivide, apply the morphism, subdivide
again and project back onto the nerve of a vertex-star cover by an
acyclic-carrier construction.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations
from typing import Callable, Dict, FrozenSet, Hashable, Iterable, List, Optional, Sequence, Set, Tuple

from .algebra import (QQ, ZZ, Chain, ChainHomotopy, ChainMorphism, Ring, add_into,
                      induced_on_homology, lefschetz_number, tensor_complex)
from .complexes import (SimplicialComplex, all_faces, barycenter, cone_chain,
                        ordered_simplex, simplex_boundary)

Simplex = Tuple[Hashable, ...]


# ---------------------------------------------------------------- subdivision tower

class Tower:
    """Lazy iterated barycentric subdivisions of a base simplicial complex."""

    def __init__(self, base: SimplicialComplex):
        self.base = base
        self._ids: List[Dict[Simplex, int]] = [{}]
        self._parent: List[List[Simplex]] = [[]]
        self._by_dim: Dict[int, Dict[int, List[Simplex]]] = {0: base.by_dim}
        self._flags: Dict[Tuple[int, Simplex], List[Tuple[Simplex, ...]]] = {}
        self._carrier: Dict[Tuple[int, Hashable, int], FrozenSet] = {}
        self._adj: Dict[int, Dict[Hashable, Set[Hashable]]] = {}
        self._star: Dict[int, Dict[Hashable, List[Simplex]]] = {}
        self._sd: Dict[Tuple[int, Simplex], Chain] = {}
        self._points: Dict[Tuple[int, Hashable], tuple] = {}
        self._simplex_sets: Dict[int, Set[Simplex]] = {}

    def _level(self, j: int):
        while len(self._ids) <= j:
            self._ids.append({})
            self._parent.append([])

    def bary(self, j: int, s: Simplex) -> int:
        """Vertex of level j that is the barycenter of the level-(j-1) simplex s."""
        self._level(j)
        ids = self._ids[j]
        v = ids.get(s)
        if v is None:
            v = len(self._parent[j])
            ids[s] = v
            self._parent[j].append(s)
        return v

    def parent(self, j: int, v: int) -> Simplex:
        return self._parent[j][v]

    def _flags_of(self, j: int, s: Simplex):
        key = (j, s)
        out = self._flags.get(key)
        if out is None:
            out = [(s,)]
            for r in range(1, len(s)):
                for f in combinations(s, r):
                    out.extend(fl + (s,) for fl in self._flags_of(j, f))
            self._flags[key] = out
        return out

    def by_dim(self, j: int) -> Dict[int, List[Simplex]]:
        if j not in self._by_dim:
            prev = self.by_dim(j - 1)
            seen: Set[Simplex] = set()
            for q in sorted(prev):
                for s in prev[q]:
                    for fl in self._flags_of(j - 1, s):
                        seen.add(tuple(sorted(self.bary(j, x) for x in fl)))
            out: Dict[int, List[Simplex]] = {}
            for t in seen:
                out.setdefault(len(t) - 1, []).append(t)
            self._by_dim[j] = {q: sorted(v) for q, v in out.items()}
        return self._by_dim[j]

    def simplices(self, j: int) -> Set[Simplex]:
        if j not in self._simplex_sets:
            self._simplex_sets[j] = {t for ts in self.by_dim(j).values() for t in ts}
        return self._simplex_sets[j]

    def vertices(self, j: int) -> List[Hashable]:
        return [t[0] for t in self.by_dim(j).get(0, [])]

    def complex(self, j: int) -> SimplicialComplex:
        coords = {}
        if self.base.coords:
            coords = {v: self.point(j, v) for v in self.vertices(j)}
        return SimplicialComplex([t for ts in self.by_dim(j).values() for t in ts], coords)

    def carrier(self, j: int, v, i: int) -> FrozenSet:
        """Vertex set of the level-i simplex whose interior contains the level-j vertex v."""
        if j == i:
            return frozenset((v,))
        key = (j, v, i)
        out = self._carrier.get(key)
        if out is None:
            out = frozenset().union(*(self.carrier(j - 1, w, i) for w in self.parent(j, v)))
            self._carrier[key] = out
        return out

    def simplex_carrier(self, j: int, t: Simplex, i: int) -> FrozenSet:
        """Level-i carrier of the open simplex t of level j."""
        return frozenset().union(*(self.carrier(j, v, i) for v in t))

    def adjacency(self, j: int) -> Dict[Hashable, Set[Hashable]]:
        if j not in self._adj:
            adj: Dict[Hashable, Set[Hashable]] = {v: set() for v in self.vertices(j)}
            for a, b in self.by_dim(j).get(1, []):
                adj[a].add(b)
                adj[b].add(a)
            self._adj[j] = adj
        return self._adj[j]

    def star(self, j: int, v) -> List[Simplex]:
        if j not in self._star:
            st: Dict[Hashable, List[Simplex]] = {}
            for ts in self.by_dim(j).values():
                for t in ts:
                    for w in t:
                        st.setdefault(w, []).append(t)
            self._star[j] = st
        return self._star[j].get(v, [])

    def ball(self, j: int, sources: Iterable, radius: int) -> Set:
        """Vertices within graph distance ``radius`` of ``sources`` at level j."""
        adj = self.adjacency(j)
        seen = set(sources)
        frontier = list(seen)
        for _ in range(radius):
            nxt = []
            for v in frontier:
                for w in adj[v]:
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
            frontier = nxt
        return seen

    def graph_distance(self, j: int, a: Iterable, b: Iterable, cap: int = 64) -> int:
        b = set(b)
        adj = self.adjacency(j)
        seen = set(a)
        if seen & b:
            return 0
        frontier = list(seen)
        dist = 0
        while frontier and dist < cap:
            dist += 1
            nxt = []
            for v in frontier:
                for w in adj[v]:
                    if w not in seen:
                        if w in b:
                            return dist
                        seen.add(w)
                        nxt.append(w)
            frontier = nxt
        return cap

    def point(self, j: int, v) -> tuple:
        if j == 0:
            return self.base.coords[v]
        key = (j, v)
        p = self._points.get(key)
        if p is None:
            p = barycenter([self.point(j - 1, w) for w in self.parent(j, v)])
            self._points[key] = p
        return p

    # -- the subdivision chain map X^(j) -> X^(j+1)
    def sd_simplex(self, j: int, t: Simplex) -> Chain:
        key = (j, t)
        out = self._sd.get(key)
        if out is None:
            b = self.bary(j + 1, t)
            if len(t) == 1:
                out = {(b,): 1}
            else:
                inner: Chain = {}
                for f, v in simplex_boundary(t).items():
                    add_into(inner, self.sd_simplex(j, f), ZZ, v)
                out = cone_chain(b, inner)
            self._sd[key] = out
        return out

    def sd(self, j: int, chain: Chain, times: int = 1) -> Chain:
        for _ in range(times):
            out: Chain = {}
            for t, v in chain.items():
                add_into(out, self.sd_simplex(j, t), ZZ, v)
            chain = out
            j += 1
        return chain


# ---------------------------------------------------------------- morphisms on a tower

class SimplicialMap:
    """A simplicial self-map of the base complex given by vertex images.

    The map is required to have equal fiber sizes on every simplex so that it
    sends barycenters to barycenters; then the induced vertex map on every
    subdivision level realizes the same continuous map.
    """

    def __init__(self, tower: Tower, vmap: Dict[Hashable, Hashable], name: str = "f",
                 target: Optional[Tower] = None):
        self.tower = tower
        self.target = target or tower
        self.vmap = dict(vmap)
        self.name = name
        for s in tower.base.simplices:
            img = [self.vmap[v] for v in s]
            if tuple(sorted(set(img))) not in self.target.base:
                raise ValueError(f"{name} is not simplicial on {s!r}")
            counts: Dict[Hashable, int] = {}
            for w in img:
                counts[w] = counts.get(w, 0) + 1
            if len(set(counts.values())) > 1:
                raise ValueError(f"{name} has unequal fibers on {s!r}; barycenters are not preserved")
        self._img: Dict[Tuple[int, Hashable], Hashable] = {}

    def vertex(self, j: int, v):
        if j == 0:
            return self.vmap[v]
        key = (j, v)
        out = self._img.get(key)
        if out is None:
            s = tuple(sorted({self.vertex(j - 1, w) for w in self.tower.parent(j, v)}))
            out = self.target.bary(j, s)
            self._img[key] = out
        return out

    def image_set(self, j: int, t: Simplex) -> FrozenSet:
        return frozenset(self.vertex(j, v) for v in t)

    def support(self, j: int, t: Simplex) -> List[FrozenSet]:
        return [self.image_set(j, t)]

    def apply_simplex(self, j: int, t: Simplex) -> Chain:
        sign, img = ordered_simplex([self.vertex(j, v) for v in t])
        return {img: sign} if sign else {}

    def apply(self, j: int, chain: Chain) -> Chain:
        out: Chain = {}
        for t, v in chain.items():
            add_into(out, self.apply_simplex(j, t), QQ, v)
        return out

    def then(self, other: "SimplicialMap") -> "SimplicialMap":
        """other after self."""
        return SimplicialMap(self.tower, {v: other.vmap[w] for v, w in self.vmap.items()},
                             f"{other.name}∘{self.name}")

    def power(self, m: int) -> "SimplicialMap":
        vm = {v: v for v in self.vmap}
        for _ in range(m):
            vm = {v: self.vmap[w] for v, w in vm.items()}
        return SimplicialMap(self.tower, vm, f"{self.name}^{m}")

    def chain_map(self, ring: Ring = QQ) -> ChainMorphism:
        c = self.tower.base.chain_complex(ring)
        return ChainMorphism(c, c, {q: {t: self.apply_simplex(0, t) for t in c.basis(q)}
                                    for q in c.degrees})

    def exact_fixed_cells(self, j: int = 0) -> List[Simplex]:
        """Open simplices of level j meeting Fix f: exactly those that f permutes."""
        return [t for ts in self.tower.by_dim(j).values() for t in ts
                if self.image_set(j, t) == frozenset(t)]


class Combination:
    """A rational combination sum c_i (f_i)_# of simplicial maps on one tower."""

    def __init__(self, terms: Sequence[Tuple[SimplicialMap, Fraction]]):
        self.terms = [(f, Fraction(c)) for f, c in terms]
        self.tower = self.terms[0][0].tower
        self.name = " + ".join(f"{c}*{f.name}" for f, c in self.terms)

    def support(self, j: int, t: Simplex) -> List[FrozenSet]:
        return [f.image_set(j, t) for f, c in self.terms if c]

    def apply(self, j: int, chain: Chain) -> Chain:
        out: Chain = {}
        for f, c in self.terms:
            add_into(out, f.apply(j, chain), QQ, c)
        return out


# ---------------------------------------------------------------- regions

class OpenRegion:
    """Open subset U of |X| that is a union of open simplices of the base complex."""

    def __init__(self, base: SimplicialComplex, inside: Iterable[Simplex]):
        inside = {tuple(sorted(s)) for s in inside}
        outside = set(base.simplices) - inside
        for s in outside:
            for f in all_faces(s):
                if f in inside:
                    raise ValueError(f"region is not open: {f!r} inside but its coface {s!r} outside")
        self.base = base
        self.inside = frozenset(inside)

    @classmethod
    def whole(cls, base: SimplicialComplex) -> "OpenRegion":
        return cls(base, base.simplices)

    @classmethod
    def open_star(cls, base: SimplicialComplex, cells: Iterable[Simplex]) -> "OpenRegion":
        """Union of the open stars of the given cells."""
        cells = [frozenset(c) for c in cells]
        known = {frozenset(s) for s in base.simplices}
        missing = [sorted(c) for c in cells if c not in known]
        if missing:
            raise ValueError(f"not cells of the complex: {missing}")
        return cls(base, [s for s in base.simplices if any(c <= set(s) for c in cells)])

    @property
    def is_whole(self) -> bool:
        return len(self.inside) == len(self.base.simplices)

    def contains_cell(self, tower: Tower, j: int, t: Simplex) -> bool:
        return tuple(sorted(tower.simplex_carrier(j, t, 0))) in self.inside

    def outside_vertices(self, tower: Tower, j: int) -> Set:
        return {v for v in tower.vertices(j) if not self.contains_cell(tower, j, (v,))}

    def disjoint_from(self, other: "OpenRegion") -> bool:
        return not (self.inside & other.inside)

    def within(self, other: "OpenRegion") -> bool:
        return self.inside <= other.inside


# ---------------------------------------------------------------- fixed cells and the cut

def fix_points(phi, r: int, region: Optional[OpenRegion] = None) -> List[Simplex]:
    """Cells of X^(r) whose open star meets its image under phi.

    A cell s is returned when some simplex t containing s has an image
    simplex containing s, so Fix phi lies in the union of the returned open
    cells.  With ``region`` the search is restricted to cells inside it.
    """
    tower = phi.tower
    out: Set[Simplex] = set()
    for ts in tower.by_dim(r).values():
        for t in ts:
            st = set(t)
            for img in phi.support(r, t):
                common = st & img
                if common:
                    common = tuple(sorted(common))
                    for f in all_faces(common):
                        out.add(f)
    cells = sorted(out, key=lambda s: (len(s), s))
    if region is not None:
        cells = [c for c in cells if region.contains_cell(tower, r, c)]
    return cells


def cut_outside(tower: Tower, level: int, a_vertices: Set, a_level: int, chain: Chain) -> Chain:
    """Kill generators at ``level`` whose closed carrier meets the open star of a_vertices."""
    if not a_vertices:
        return dict(chain)
    return {t: v for t, v in chain.items()
            if not (tower.simplex_carrier(level, t, a_level) & a_vertices)}


def cut_endomorphism(tower: Tower, level: int, a_vertices: Set, a_level: int, ring: Ring = QQ):
    from .algebra import GradedEndomorphism
    c = tower.complex(level).chain_complex(ring)
    maps = {q: {t: cut_outside(tower, level, a_vertices, a_level, {t: 1}) for t in c.basis(q)}
            for q in c.degrees}
    return GradedEndomorphism(c, maps)


# ---------------------------------------------------------------- problem data

@dataclass(frozen=True)
class Choice:
    """Discrete choices entering the index composite.

    level         level at which the cut set and the fixed set are unions of open vertex stars
    cut_pad       extra graph-distance thickening of the cut set (near the complement)
    fix_pad       extra thickening of the fixed set
    cover_level   level of the vertex-star cover of the target
    domain_level  level of the vertex-star cover of the domain (refinement parameter)
    nerve_level   level of the nerve; the trace is taken one level finer
    pre_rounds    subdivision rounds before the morphism
    post_rounds   subdivision rounds after it
    """
    level: int = 0
    cut_pad: int = 0
    fix_pad: int = 0
    cover_level: int = 0
    domain_level: int = 0
    nerve_level: int = 0
    pre_rounds: int = 0
    post_rounds: int = 0


@dataclass
class Certificates:
    admissible: bool
    stars_separated: bool
    cover_inside: bool
    no_short_moves: bool
    fine_realization: bool
    subdivisions: bool
    witness: Optional[dict] = None

    @property
    def ok(self) -> bool:
        return all((self.admissible, self.stars_separated, self.cover_inside, self.no_short_moves,
                    self.fine_realization, self.subdivisions))


@dataclass
class IndexResult:
    value: Fraction
    choice: Choice
    certificates: Certificates
    fix_cells: List[Simplex]
    a_vertices: Set
    b_vertices: Set


def _separated_sets(tower: Tower, phi, region: OpenRegion, ch: Choice):
    if region.is_whole:
        return set(), set(tower.vertices(ch.level)), set()
    out = region.outside_vertices(tower, ch.level)
    fix = fix_points(phi, ch.level, region)
    fixv = {v for c in fix for v in c}
    cut_set = tower.ball(ch.level, out, ch.cut_pad) if out else set()
    fix_set = tower.ball(ch.level, fixv, ch.fix_pad) if fixv else set()
    return cut_set, fix_set, fixv


def check_conditions(phi, region: OpenRegion, ch: Choice) -> Certificates:
    """Exact checks of admissibility, star separation, cover containment, short moves and levels."""
    tower = phi.tower
    levels_ok = ch.level <= ch.cover_level <= ch.nerve_level and ch.domain_level <= ch.cover_level and ch.domain_level <= ch.nerve_level + ch.pre_rounds
    if not levels_ok:
        return Certificates(False, False, False, False, ch.cover_level <= ch.nerve_level, False,
                            {"reason": "level constraints r <= rv <= rw, ru <= rv, ru <= rw + m1"})
    if region.is_whole:
        # nothing is cut and everything counts as fixed: all three conditions hold trivially
        return Certificates(True, True, True, True, True, True)
    outside = region.outside_vertices(tower, ch.level)
    cut_set, fix_set, fixv = _separated_sets(tower, phi, region, ch)
    adm_dist = tower.graph_distance(ch.level, outside, fixv) if fixv and outside else 64
    admissible = not (fixv & outside)
    if adm_dist < 3 or (cut_set and fix_set and tower.graph_distance(ch.level, cut_set, fix_set) < 3):
        cert = Certificates(admissible, False, False, False, True, True,
                            {"reason": "closures of the cut and fixed sets meet", "distance": adm_dist})
        return cert
    lv = ch.cover_level
    simp_r = tower.simplices(ch.level)

    adj_r = tower.adjacency(ch.level)

    def in_closed_star(w, centers):
        car = tower.carrier(lv, w, ch.level)
        cands = set(car).union(*(adj_r[x] for x in car)) & centers
        return any(tuple(sorted(car | {u})) in simp_r for u in cands)

    verts = tower.vertices(lv)
    cut_stars = {w for w in verts if in_closed_star(w, cut_set)}
    fix_stars = {w for w in verts if in_closed_star(w, fix_set)}
    adj = tower.adjacency(lv)
    stars_separated = not (cut_stars & fix_stars) and not any(adj[w] & fix_stars for w in cut_stars)
    if not stars_separated:
        return Certificates(admissible, False, False, False, True, True,
                            {"reason": "stars of the cut and fixed closures meet"})
    # a cover member meeting the uncut part must lie inside U (it always lies in a coarser star)
    cover_inside = True
    wit = None
    for w in verts:
        if region.contains_cell(tower, lv, (w,)):
            continue
        for t in tower.star(lv, w):
            if not (tower.simplex_carrier(lv, t, ch.level) & cut_set):
                cover_inside = False
                wit = {"reason": "cover member leaves the region", "vertex": w, "simplex": t}
                break
        if not cover_inside:
            break
    if not cover_inside:
        return Certificates(admissible, True, False, False, True, True, wit)
    # no simplex outside both sets may move less than three stars
    sab = cut_set | fix_set
    for w in verts:
        st = tower.star(lv, w)
        if all(tower.simplex_carrier(lv, t, ch.level) & sab for t in st):
            continue
        ball = tower.ball(lv, [w], 3)
        for t in st:
            for img in phi.support(lv, t):
                if img & ball:
                    return Certificates(admissible, True, True, False, True, True,
                                        {"reason": "short move", "vertex": w, "simplex": t})
    return Certificates(admissible, True, True, True, True, True)


def choose_separation(phi, region: OpenRegion, max_level: int = 20, extra_v: Sequence[int] = (0, 1, 2, 3),
               base: Optional[Choice] = None) -> Choice:
    """Smallest refinement level at which the cut set, fixed set and cover satisfy every condition."""
    if region.is_whole:
        return base or Choice()
    if hasattr(phi, "exact_fixed_cells"):
        # a permuted cell inside the region with a permuted face outside means Fix meets the
        # frontier: no level can separate them, so fail before refining
        fixed = phi.exact_fixed_cells(0)
        inside = [t for t in fixed if region.contains_cell(phi.tower, 0, t)]
        for s in fixed:
            if not region.contains_cell(phi.tower, 0, s) and any(set(s) < set(t) for t in inside):
                raise ValueError(f"no admissible separation found: fixed cell {s!r} lies on the "
                                 f"frontier of the region")
    tried = []
    for r in range(0, max_level + 1):
        tower = phi.tower
        outside = region.outside_vertices(tower, r)
        fixv = {v for c in fix_points(phi, r, region) for v in c}
        if fixv & outside:
            tried.append({"level": r, "reason": "Fix overapproximation touches the complement of U"})
            continue
        if tower.graph_distance(r, outside, fixv) < 3:
            tried.append({"level": r, "reason": "cut and fixed closures meet"})
            continue
        for e in extra_v:
            ch = Choice(level=r, cover_level=r + e, nerve_level=r + e, domain_level=0)
            if base is not None:
                ch = replace(base, level=r, cover_level=r + e, nerve_level=max(base.nerve_level, r + e))
            cert = check_conditions(phi, region, ch)
            if cert.ok:
                return ch
            tried.append({"level": r, "rv": r + e, "failed": cert.witness})
        if len(tried) > 4 * max_level:
            break
    raise ValueError(f"no admissible separation found: {tried[-3:]}")


# ---------------------------------------------------------------- the index

class _NerveProjection:
    """Nerve projection from small chains at level n onto C(X^(rw+1))."""

    def __init__(self, tower: Tower, rw: int):
        self.tower = tower
        self.rw = rw
        self.memo: Dict[Tuple[int, Simplex], Chain] = {}

    def simplex(self, n: int, t: Simplex) -> Chain:
        key = (n, t)
        out = self.memo.get(key)
        if out is not None:
            return out
        tw = self.tower
        s = None
        for v in t:
            c = tw.carrier(n, v, self.rw)
            s = c if s is None else s & c
        if not s:
            raise ValueError(f"simplex {t!r} at level {n} is not small for the level-{self.rw} star cover")
        b = tw.bary(self.rw + 1, tuple(sorted(s)))
        if len(t) == 1:
            out = {(b,): 1}
        else:
            inner: Chain = {}
            for f, v in simplex_boundary(t).items():
                add_into(inner, self.simplex(n, f), QQ, v)
            out = cone_chain(b, inner)
        self.memo[key] = out
        return out

    def apply(self, n: int, chain: Chain) -> Chain:
        out: Chain = {}
        for t, v in chain.items():
            add_into(out, self.simplex(n, t), QQ, v)
        return out


def composite_chain(phi, region: OpenRegion, ch: Choice, t: Simplex, cut_set: Set, nerve: _NerveProjection) -> Chain:
    tower = phi.tower
    lvl = ch.nerve_level + 1
    c = cut_outside(tower, lvl, cut_set, ch.level, {t: 1})
    if not c:
        return {}
    c = tower.sd(lvl, c, ch.pre_rounds)
    lvl += ch.pre_rounds
    c = phi.apply(lvl, c)
    c = tower.sd(lvl, c, ch.post_rounds)
    lvl += ch.post_rounds
    return nerve.apply(lvl, c)


def index(phi, region: OpenRegion, choice: Optional[Choice] = None, ring: Ring = ZZ,
          check: bool = True) -> IndexResult:
    """ind(phi, U) as the Lefschetz number of the cut-subdivide-project composite."""
    ch = choice if choice is not None else choose_separation(phi, region)
    cert = check_conditions(phi, region, ch)
    if check and not cert.ok:
        raise ValueError(f"choice {ch} fails: {cert.witness}")
    tower = phi.tower
    cut_set, fix_set, fixv = _separated_sets(tower, phi, region, ch)
    nerve = _NerveProjection(tower, ch.nerve_level)
    total = Fraction(0)
    lvl = ch.nerve_level + 1
    for q, ts in tower.by_dim(lvl).items():
        tr = Fraction(0)
        for t in ts:
            img = composite_chain(phi, region, ch, t, cut_set, nerve)
            if t in img:
                tr += img[t]
        total += tr if q % 2 == 0 else -tr
    fix = fix_points(phi, ch.level, region)
    return IndexResult(ring.fnorm(total), ch, cert, fix, cut_set, fix_set)


def index_of_map(f: SimplicialMap, region: OpenRegion, choice: Optional[Choice] = None,
                 ring: Ring = ZZ) -> IndexResult:
    """ind(f, U) = ind(f_#, U); rejects f when no level certifies admissibility."""
    try:
        return index(f, region, choice, ring)
    except ValueError as exc:
        raise ValueError(f"{f.name} is not admissible on the region: {exc}") from None


def lefschetz_of_map(f: SimplicialMap, ring: Ring = QQ) -> Fraction:
    """Homology-level Lefschetz number, computed through the algebra module."""
    return lefschetz_number(induced_on_homology(f.chain_map(ring)))


# ---------------------------------------------------------------- homotopies

def contiguous(f0: SimplicialMap, f1: SimplicialMap) -> bool:
    base = f0.tower.base
    return all(tuple(sorted({f0.vmap[v] for v in s} | {f1.vmap[v] for v in s})) in base
               for s in base.simplices)


def prism_homotopy(f0: SimplicialMap, f1: SimplicialMap, ring: Ring = QQ) -> ChainHomotopy:
    """D(s) = sum_i (-1)^i [f0 v0 .. f0 vi, f1 vi .. f1 vn] between contiguous maps."""
    if not contiguous(f0, f1):
        raise ValueError("maps are not contiguous")
    c = f0.tower.base.chain_complex(ring)
    maps: Dict[int, Dict[Simplex, Chain]] = {}
    for q in c.degrees:
        cols = {}
        for s in c.basis(q):
            out: Chain = {}
            for i in range(len(s)):
                seq = [f0.vmap[v] for v in s[:i + 1]] + [f1.vmap[v] for v in s[i:]]
                sign, t = ordered_simplex(seq)
                if sign and t in c:
                    add_into(out, {t: sign * (-1 if i % 2 else 1)}, ring)
            cols[s] = out
        maps[q] = cols
    return ChainHomotopy(c, c, f0.chain_map(ring), f1.chain_map(ring), maps)


def homotopy_fix_cells(f0: SimplicialMap, f1: SimplicialMap, r: int, region: Optional[OpenRegion] = None):
    """Cells of X^(r) that may meet Fix F_t for some t of the straight-line homotopy."""
    tower = f0.tower
    out: Set[Simplex] = set()
    for ts in tower.by_dim(r).values():
        for t in ts:
            img = f0.image_set(r, t) | f1.image_set(r, t)
            common = set(t) & img
            if common:
                out.update(all_faces(tuple(sorted(common))))
    cells = sorted(out, key=lambda s: (len(s), s))
    if region is not None:
        cells = [c for c in cells if region.contains_cell(tower, r, c)]
    return cells


def homotopy_admissible(f0: SimplicialMap, f1: SimplicialMap, region: OpenRegion, max_level: int = 6) -> bool:
    if region.is_whole:
        return contiguous(f0, f1)
    tower = f0.tower
    for r in range(max_level + 1):
        fixv = {v for c in homotopy_fix_cells(f0, f1, r, region) for v in c}
        if tower.graph_distance(r, region.outside_vertices(tower, r), fixv) >= 3:
            return contiguous(f0, f1)
    return False


# ---------------------------------------------------------------- products

class ProductComplex:
    """Simplicial product: vertex sets S of V1 x V2 whose projections are simplices.

    Its realization is homotopy equivalent to |X1| x |X2| and it carries the
    Eilenberg-Zilber maps with respect to the lexicographic vertex order.
    """

    def __init__(self, x1: SimplicialComplex, x2: SimplicialComplex):
        self.x1, self.x2 = x1, x2
        tops1 = [s for s in x1.simplices if not any(set(s) < set(t) for t in x1.star(s[0]))]
        tops2 = [s for s in x2.simplices if not any(set(s) < set(t) for t in x2.star(s[0]))]
        cells: Set[Simplex] = set()
        for a in tops1:
            for b in tops2:
                verts = [(v, w) for v in a for w in b]
                for r in range(1, len(verts) + 1):
                    for sub in combinations(verts, r):
                        cells.add(tuple(sorted(sub)))
        self.complex = SimplicialComplex(cells)


def _oriented(seq) -> Chain:
    sign, t = ordered_simplex(seq)
    return {t: sign} if sign else {}


def alexander_whitney(t: Simplex) -> Chain:
    """Front face / back face split of a lexicographically ordered product simplex."""
    out: Chain = {}
    for p in range(len(t)):
        front = _oriented([v for v, _ in t[:p + 1]])
        back = _oriented([w for _, w in t[p:]])
        for a, x in front.items():
            for b, y in back.items():
                add_into(out, {(a, b): x * y}, QQ)
    return out


def _shuffles(p: int, q: int):
    """Lattice paths from (0,0) to (p,q) as step sequences with their signs."""
    for pos in combinations(range(p + q), p):
        steps = [0] * (p + q)
        for i in pos:
            steps[i] = 1
        # sign of the (p,q)-shuffle permutation
        inv = 0
        seen_q = 0
        for s in steps:
            if s == 1:
                inv += seen_q
            else:
                seen_q += 1
        yield steps, (-1 if inv % 2 else 1)


def shuffle(a: Simplex, b: Simplex) -> Chain:
    p, q = len(a) - 1, len(b) - 1
    out: Chain = {}
    for steps, sign in _shuffles(p, q):
        i = j = 0
        verts = [(a[0], b[0])]
        for s in steps:
            if s == 1:
                i += 1
            else:
                j += 1
            verts.append((a[i], b[j]))
        add_into(out, {k: sign * v for k, v in _oriented(verts).items()}, QQ)
    return out


def ez_maps(x1: SimplicialComplex, x2: SimplicialComplex, ring: Ring = QQ):
    """(Phi, Psi, product complex) with Phi Alexander-Whitney and Psi the shuffle map."""
    prod = ProductComplex(x1, x2)
    cq = prod.complex.chain_complex(ring)
    ct = tensor_complex(x1.chain_complex(ring), x2.chain_complex(ring))
    aw_maps = {q: {t: alexander_whitney(t) for t in cq.basis(q)} for q in cq.degrees}
    shuffle_maps = {n: {(a, b): shuffle(a, b) for (a, b) in ct.basis(n)} for n in ct.degrees}
    return ChainMorphism(cq, ct, aw_maps), ChainMorphism(ct, cq, shuffle_maps), prod


def ez_homotopy(prod: ProductComplex, to_tensor: ChainMorphism, from_tensor: ChainMorphism,
                ring: Ring = QQ) -> ChainHomotopy:
    """Chain homotopy from id to shuffle after Alexander-Whitney, built by coning inside the
    simplex spanned by the product of the two projections of each simplex."""
    cq = to_tensor.source
    comp = {q: {t: from_tensor.image(to_tensor.of(t), q) for t in cq.basis(q)} for q in cq.degrees}
    h: Dict[int, Dict[Simplex, Chain]] = {}
    for q in cq.degrees:
        h[q] = {}
        for t in cq.basis(q):
            target = dict(comp[q][t])
            add_into(target, {t: 1}, ring, -1)
            for f, v in simplex_boundary(t).items():
                add_into(target, h[q - 1][f], ring, -v)
            apex = min((v, w) for v in {x for x, _ in t} for w in {y for _, y in t})
            h[q][t] = cone_chain(apex, target)
    ident = ChainMorphism(cq, cq, {q: {t: {t: 1} for t in cq.basis(q)} for q in cq.degrees})
    return ChainHomotopy(cq, cq, ident, ChainMorphism(cq, cq, comp), h)


def product_morphism(f1: SimplicialMap, f2: SimplicialMap, level1: int = 0, level2: int = 0):
    """shuffle ∘ (f1_# ⊗ f2_#) ∘ Alexander-Whitney on the simplicial product of the given subdivision levels."""
    x1 = f1.tower.complex(level1)
    x2 = f2.tower.complex(level2)
    prod = ProductComplex(x1, x2)

    def apply_simplex(t: Simplex) -> Chain:
        out: Chain = {}
        for (a, b), v in alexander_whitney(t).items():
            fa = f1.apply(level1, {a: 1})
            fb = f2.apply(level2, {b: 1})
            for a2, x in fa.items():
                for b2, y in fb.items():
                    add_into(out, shuffle(a2, b2), QQ, v * x * y)
        return out

    return prod, apply_simplex


def product_index(f1: SimplicialMap, u1: OpenRegion, f2: SimplicialMap, u2: OpenRegion,
                  ch1: Optional[Choice] = None, ch2: Optional[Choice] = None, ring: Ring = ZZ) -> Fraction:
    """Index of the Eilenberg-Zilber product morphism on U1 x U2.

    The morphism acts on the chains of the simplicial product itself, so the
    trace is taken there after killing simplices whose projections meet A1 or A2.
    """
    ch1 = ch1 or choose_separation(f1, u1)
    ch2 = ch2 or choose_separation(f2, u2)
    l1, l2 = ch1.cover_level, ch2.cover_level

    def cut_region(f, u, ch, lvl):
        if u.is_whole:
            return set()
        cut_set, _, _ = _separated_sets(f.tower, f, u, ch)
        return {w for w in f.tower.vertices(lvl) if f.tower.carrier(lvl, w, ch.level) & cut_set}

    a1 = cut_region(f1, u1, ch1, l1)
    a2 = cut_region(f2, u2, ch2, l2)
    prod, apply_simplex = product_morphism(f1, f2, l1, l2)
    total = Fraction(0)
    for q, ts in prod.complex.by_dim.items():
        tr = 0
        for t in ts:
            if any(v in a1 or w in a2 for v, w in t):
                continue
            tr += apply_simplex(t).get(t, 0)
        total += tr if q % 2 == 0 else -tr
    return ring.fnorm(total)


# ---------------------------------------------------------------- affine subdivision operator

AffineSimplex = Tuple[tuple, ...]


def _affine_boundary(s: AffineSimplex) -> Chain:
    out: Chain = {}
    if len(s) <= 1:
        return out
    for i in range(len(s)):
        f = s[:i] + s[i + 1:]
        out[f] = out.get(f, 0) + (-1 if i % 2 else 1)
    return {k: v for k, v in out.items() if v}


def affine_d(chain: Chain) -> Chain:
    out: Chain = {}
    for s, v in chain.items():
        add_into(out, _affine_boundary(s), QQ, v)
    return out


def _acone(b: tuple, chain: Chain) -> Chain:
    out: Chain = {}
    for s, v in chain.items():
        add_into(out, {(b,) + s: v}, QQ)
    return out


class AffineSubdivision:
    """Subdivision operator on affine singular chains of a geometric complex.

    Input simplices must each lie in one closed simplex of ``cover``.  A
    simplex is small when its vertices also share a carrier vertex.  Each simplex is subdivided barycentrically as
    many rounds as it needs to become small; the operator is the identity
    corrected by the boundary of the summed cone homotopies of those rounds,
    so it is a chain map with different round counts on different simplices.
    """

    def __init__(self, cover: SimplicialComplex):
        self.cover = cover
        from .algebra import _Field
        self._F = _Field(QQ)
        self._carrier_memo: Dict[tuple, Optional[Simplex]] = {}
        self._sd_memo: Dict[AffineSimplex, Chain] = {}
        self._t_memo: Dict[AffineSimplex, Chain] = {}

    def point_carrier(self, p: tuple) -> Optional[Simplex]:
        """Vertices of the smallest cover simplex containing p (None if outside)."""
        if p in self._carrier_memo:
            return self._carrier_memo[p]
        from .algebra import solve_in_span
        best = None
        for q in sorted(self.cover.by_dim):
            for s in self.cover.cells(q):
                pts = self.cover.simplex_points(s)
                vecs = [list(x) + [1] for x in pts]
                sol = solve_in_span(vecs, list(p) + [1], self._F)
                if sol is not None and all(c >= 0 for c in sol):
                    best = tuple(v for v, c in zip(s, sol) if c > 0)
                    break
            if best is not None:
                break
        self._carrier_memo[p] = best
        return best

    def is_small(self, s: AffineSimplex) -> bool:
        cars = [self.point_carrier(p) for p in s]
        if any(c is None for c in cars):
            raise ValueError("simplex leaves the polyhedron of the cover")
        union = tuple(sorted(set().union(*map(set, cars))))
        if union not in self.cover:
            return False
        common = set(cars[0]).intersection(*map(set, cars[1:]))
        return bool(common)

    def sd_simplex(self, s: AffineSimplex) -> Chain:
        out = self._sd_memo.get(s)
        if out is None:
            if len(s) == 1:
                out = {s: 1}
            else:
                out = _acone(barycenter(list(s)), self.sd(_affine_boundary(s)))
            self._sd_memo[s] = out
        return out

    def sd(self, chain: Chain) -> Chain:
        out: Chain = {}
        for s, v in chain.items():
            add_into(out, self.sd_simplex(s), QQ, v)
        return out

    def homotopy_simplex(self, s: AffineSimplex) -> Chain:
        out = self._t_memo.get(s)
        if out is None:
            if len(s) == 1:
                out = {}
            else:
                inner = {s: 1}
                add_into(inner, self.homotopy_chain(_affine_boundary(s)), QQ, -1)
                out = _acone(barycenter(list(s)), inner)
            self._t_memo[s] = out
        return out

    def homotopy_chain(self, chain: Chain) -> Chain:
        out: Chain = {}
        for s, v in chain.items():
            add_into(out, self.homotopy_simplex(s), QQ, v)
        return out

    def rounds(self, s: AffineSimplex, limit: int = 12) -> int:
        # pieces straddling an interior face of the cover never become small
        cars = [self.point_carrier(p) for p in s]
        if any(c is None for c in cars) or tuple(sorted(set().union(*map(set, cars)))) not in self.cover:
            raise ValueError("affine simplex is not inside one closed simplex of the cover")
        c = {s: 1}
        for m in range(limit + 1):
            if all(self.is_small(x) for x in c):
                return m
            c = self.sd(c)
        raise ValueError("cover too fine for the subdivision budget")

    def round_homotopy(self, chain: Chain) -> Chain:
        out: Chain = {}
        for s, v in chain.items():
            c = {s: 1}
            for _ in range(self.rounds(s)):
                add_into(out, self.homotopy_chain(c), QQ, v)
                c = self.sd(c)
        return out

    def apply(self, chain: Chain) -> Chain:
        out = dict(chain)
        add_into(out, affine_d(self.round_homotopy(chain)), QQ, -1)
        add_into(out, self.round_homotopy(affine_d(chain)), QQ, -1)
        return out

    def homotopy(self, chain: Chain) -> Chain:
        """h with Sd - id = dh + hd."""
        return {s: -v for s, v in self.round_homotopy(chain).items()}


def subdivision_operator(cover: SimplicialComplex) -> Tuple[Callable[[Chain], Chain], Callable[[Chain], Chain]]:
    op = AffineSubdivision(cover)
    return op.apply, op.homotopy


def in_hull(p: tuple, pts: Sequence[tuple]) -> bool:
    from .algebra import _Field, solve_in_span
    uniq = list(dict.fromkeys(pts))
    # search over affinely independent subsets by trying all subsets (small)
    for r in range(1, len(uniq) + 1):
        for sub in combinations(uniq, r):
            sol = solve_in_span([list(x) + [1] for x in sub], list(p) + [1], _Field(QQ))
            if sol is not None and all(c >= 0 for c in sol):
                return True
    return False


# ---------------------------------------------------------------- mod p

@dataclass
class ModPReport:
    p: int
    m: int
    index_f: Fraction
    index_fm: Fraction
    congruent: bool
    invariant_set_ok: bool


def mod_p_check(f: SimplicialMap, region: OpenRegion, p: int, k: int = 1) -> ModPReport:
    """ind(f^m, U') = ind(f, U') mod p for m = p^k, both computed over Z."""
    m = p ** k
    fm = f.power(m)
    # S = Fix f^m must be compact in U' and invariant under f
    tower = f.tower
    fixed = fm.exact_fixed_cells(0)
    fixed_set = set(fixed)
    inv_ok = all(tuple(sorted(f.image_set(0, s))) in fixed_set for s in fixed)
    inv_ok = inv_ok and all(region.contains_cell(tower, 0, s) or region.is_whole for s in fixed)
    if not inv_ok:
        raise ValueError("Fix f^m is not an f-invariant subset of the region")
    i1 = index_of_map(f, region, ring=ZZ).value
    im = index_of_map(fm, region, ring=ZZ).value
    return ModPReport(p, m, i1, im, (im - i1) % p == 0, inv_ok)


# ---------------------------------------------------------------- axiom battery

@dataclass
class AxiomCase:
    axiom: str
    instance: str
    lhs: Fraction
    rhs: Fraction
    ok: bool
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"axiom": self.axiom, "instance": self.instance, "lhs": str(self.lhs),
                "rhs": str(self.rhs), "ok": self.ok, "detail": self.detail}


def _map(x: SimplicialComplex, vmap, name, target: Optional[SimplicialComplex] = None,
         towers: Optional[Dict[int, Tower]] = None) -> SimplicialMap:
    towers = towers if towers is not None else {}
    tw = towers.setdefault(id(x), Tower(x))
    tt = towers.setdefault(id(target), Tower(target)) if target is not None else None
    return SimplicialMap(tw, vmap, name, tt)


def _ind(f: SimplicialMap, region: Optional[OpenRegion] = None) -> Fraction:
    return index_of_map(f, region or OpenRegion.whole(f.tower.base), ring=ZZ).value


def _compose(f0: SimplicialMap, f1: SimplicialMap) -> SimplicialMap:
    """f1 after f0, for f0: X0 -> X1 and f1: X1 -> X0 (or any composable pair)."""
    return SimplicialMap(f0.tower, {v: f1.vmap[w] for v, w in f0.vmap.items()},
                         f"{f1.name}∘{f0.name}", f1.target)


def axiom_normalization() -> List[AxiomCase]:
    from .complexes import hexagon_disk, octahedron, polygon
    cases = []
    octa, hexd, ring6 = octahedron(), hexagon_disk(), polygon(6)
    for name, x, vm in [
        ("octahedron identity", octa, {v: v for v in range(6)}),
        ("octahedron antipode", octa, {v: v ^ 1 for v in range(6)}),
        ("hexagonal disk rotation by 2 steps", hexd, {**{i: (i + 2) % 6 for i in range(6)}, 6: 6}),
        ("hollow hexagon rotation by 3 steps", ring6, {i: (i + 3) % 6 for i in range(6)}),
    ]:
        f = _map(x, vm, name)
        lhs, rhs = _ind(f), lefschetz_of_map(f)
        cases.append(AxiomCase("normalization", name, lhs, rhs, lhs == rhs))
    return cases


def axiom_additivity() -> List[AxiomCase]:
    from .complexes import octahedron, polygon
    cases = []
    octa, ring6 = octahedron(), polygon(6)
    for name, x, vm, parts in [
        ("octahedron quarter turn", octa, {0: 2, 2: 1, 1: 3, 3: 0, 4: 4, 5: 5}, [[(4,)], [(5,)]]),
        ("hollow hexagon reflection through vertices", ring6, {i: (-i) % 6 for i in range(6)}, [[(0,)], [(3,)]]),
        ("hollow hexagon reflection through edges", ring6, {i: (5 - i) % 6 for i in range(6)},
         [[(0, 5)], [(2, 3)]]),
    ]:
        f = _map(x, vm, name)
        regions = [OpenRegion.open_star(x, p) for p in parts]
        if not regions[0].disjoint_from(regions[1]):
            raise ValueError(f"additivity regions overlap for {name}")
        lhs = _ind(f)
        pieces = [_ind(f, r) for r in regions]
        cases.append(AxiomCase("additivity", name, lhs, sum(pieces), lhs == sum(pieces),
                               {"pieces": [str(p) for p in pieces]}))
    return cases


def axiom_existence() -> List[AxiomCase]:
    """Nonzero index forces a nonempty Fix overapproximation; checked as an implication."""
    from .complexes import hexagon_disk, octahedron, polygon
    cases = []
    for name, x, vm in [
        ("hollow hexagon rotation by 3 steps", polygon(6), {i: (i + 3) % 6 for i in range(6)}),
        ("octahedron antipode", octahedron(), {v: v ^ 1 for v in range(6)}),
        ("hexagonal disk rotation by 2 steps", hexagon_disk(), {**{i: (i + 2) % 6 for i in range(6)}, 6: 6}),
        ("hollow triangle reflection", polygon(3), {0: 0, 1: 2, 2: 1}),
    ]:
        f = _map(x, vm, name)
        value = _ind(f)
        fixed = f.exact_fixed_cells(1)
        ok = value == 0 or bool(fixed)
        cases.append(AxiomCase("existence", name, value, Fraction(len(fixed)), ok,
                               {"fixed_cells_level1": len(fixed)}))
    return cases


def axiom_homotopy() -> List[AxiomCase]:
    from .algebra import is_chain_homotopy
    from .complexes import hexagon_disk, path3, segment
    cases = []
    hexd = hexagon_disk()
    for name, x, vm0, vm1, region_cells in [
        ("segment identity to constant", segment(), {0: 0, 1: 1}, {0: 0, 1: 0}, None),
        ("path folding to constant", path3(), {0: 1, 1: 1, 2: 1}, {0: 0, 1: 1, 2: 0}, None),
        ("hexagonal disk identity to centre", hexd, {v: v for v in range(7)}, {v: 6 for v in range(7)}, None),
        ("hexagonal disk on the star of the centre", hexd, {v: v if v == 6 else 6 for v in range(7)},
         {v: 6 for v in range(7)}, [(6,)]),
    ]:
        towers: Dict[int, Tower] = {}
        f0 = _map(x, vm0, "f0", towers=towers)
        f1 = _map(x, vm1, "f1", towers=towers)
        region = OpenRegion.open_star(x, region_cells) if region_cells else OpenRegion.whole(x)
        if not homotopy_admissible(f0, f1, region):
            raise ValueError(f"homotopy is not admissible for {name}")
        prism_ok = is_chain_homotopy(prism_homotopy(f0, f1))
        lhs, rhs = _ind(f0, region), _ind(f1, region)
        cases.append(AxiomCase("homotopy", name, lhs, rhs, lhs == rhs and prism_ok,
                               {"prism_identity": prism_ok}))
    return cases


def axiom_contraction() -> List[AxiomCase]:
    """ind(f, U) = ind(f restricted to Y, U meet Y) when f(X) lies in the subcomplex Y."""
    from .complexes import hexagon_disk, octahedron, path3
    cases = []
    octa = octahedron()
    hexd = hexagon_disk()
    for name, x, vm, y_simplices in [
        ("path folded onto an edge", path3(), {0: 2, 1: 1, 2: 2}, [(1, 2)]),
        ("hexagonal disk folded onto a triangle", hexd, {**{i: i % 2 for i in range(6)}, 6: 6}, [(0, 1, 6)]),
        ("octahedron folded onto a hemisphere", octa, {0: 0, 1: 1, 2: 2, 3: 3, 4: 4, 5: 4},
         [(a, b, 4) for a in (0, 1) for b in (2, 3)]),
    ]:
        y = SimplicialComplex(y_simplices, {v: x.point(v) for s in y_simplices for v in s})
        f = _map(x, vm, name)
        image = {tuple(sorted({vm[v] for v in s})) for s in x.simplices}
        if not image <= set(y.simplices):
            raise ValueError(f"image of {name} is not inside the subcomplex")
        g = _map(y, {v: vm[v] for v in y.vertices}, name + " restricted")
        lhs, rhs = _ind(f), _ind(g)
        cases.append(AxiomCase("contraction", name, lhs, rhs, lhs == rhs))
    return cases


def axiom_multiplicativity() -> List[AxiomCase]:
    from .complexes import hollow_triangle, path3, segment
    cases = []
    for name, (x1, vm1), (x2, vm2) in [
        ("segment constant x segment constant", (segment(), {0: 0, 1: 0}), (segment(), {0: 1, 1: 1})),
        ("segment identity x hollow triangle rotation", (segment(), {0: 0, 1: 1}),
         (hollow_triangle(), {0: 1, 1: 2, 2: 0})),
        ("path reflection x hollow triangle identity", (path3(), {0: 2, 1: 1, 2: 0}),
         (hollow_triangle(), {0: 0, 1: 1, 2: 2})),
    ]:
        f1, f2 = _map(x1, vm1, "f1"), _map(x2, vm2, "f2")
        u1, u2 = OpenRegion.whole(x1), OpenRegion.whole(x2)
        lhs = product_index(f1, u1, f2, u2)
        a, b = _ind(f1), _ind(f2)
        cases.append(AxiomCase("multiplicativity", name, lhs, a * b, lhs == a * b,
                               {"factors": [str(a), str(b)]}))
    return cases


def axiom_commutativity() -> List[AxiomCase]:
    from .complexes import octahedron, path3, point_complex, segment
    cases = []
    octa = octahedron()
    for name, (x0, x1), vm0, vm1 in [
        ("segment through a point", (segment(), point_complex()), {0: 0, 1: 0}, {0: 1}),
        ("path folded onto a segment", (path3(), segment()), {0: 0, 1: 1, 2: 0}, {0: 0, 1: 1}),
        ("octahedron antipode and quarter turn", (octa, octa), {v: v ^ 1 for v in range(6)},
         {0: 2, 2: 1, 1: 3, 3: 0, 4: 4, 5: 5}),
    ]:
        towers: Dict[int, Tower] = {}
        f0 = _map(x0, vm0, "f0", x1, towers)
        f1 = _map(x1, vm1, "f1", x0, towers)
        lhs = _ind(_compose(f0, f1))
        rhs = _ind(_compose(f1, f0))
        cases.append(AxiomCase("commutativity", name, lhs, rhs, lhs == rhs))
    return cases


AXIOMS = {
    "normalization": axiom_normalization,
    "additivity": axiom_additivity,
    "existence": axiom_existence,
    "homotopy": axiom_homotopy,
    "contraction": axiom_contraction,
    "multiplicativity": axiom_multiplicativity,
    "commutativity": axiom_commutativity,
}


def property_suite_axioms(which: Optional[Iterable[str]] = None) -> Dict[str, List[AxiomCase]]:
    return {k: AXIOMS[k]() for k in (which or AXIOMS)}


# ---------------------------------------------------------------- invariance of the index

def invariance_choices(f, region: OpenRegion) -> List[Choice]:
    """The automatic choice and admissible variations of it: extra subdivision rounds,
    finer star covers, thicker cut and fixed sets, and a refined domain cover."""
    base = choose_separation(f, region)
    variants = [base,
                replace(base, pre_rounds=1),
                replace(base, post_rounds=1),
                replace(base, cover_level=base.cover_level + 1, nerve_level=base.nerve_level + 1),
                replace(base, cut_pad=1, fix_pad=1),
                replace(base, domain_level=min(base.cover_level, 1))]
    out = []
    for ch in variants:
        if ch not in out and check_conditions(f, region, ch).ok:
            out.append(ch)
    return out


def index_invariance(f, region: OpenRegion) -> Dict[str, Fraction]:
    return {str(ch): index(f, region, ch).value for ch in invariance_choices(f, region)}
