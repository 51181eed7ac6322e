"""Multivalued maps on finite complexes and their chain approximations.

A MultiMap from X to Y is described by open-cell data.  For x in an open cell c
of X,

    F(x) = {f_1(x), ..., f_b(x)}  union  S(c)

where the f_i are simplicial branch maps and S(c) is a closed subcomplex of Y
(possibly empty).  Cells without an explicit S value inherit the union of the
values of their vertices.  All constructions run on subdivision towers of X and
Y; approximations are rational chain maps from a fine level of X to the same
level of Y.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, FrozenSet, Hashable, Iterable, List, Optional, Sequence, Set, Tuple

from .algebra import (QQ, Chain, ChainMorphism, _Field, add_into, homology,
                      lefschetz_number, solve_in_span)
from .complexes import SimplicialComplex, dist, simplex_boundary
from .index import SimplicialMap, Tower

Simplex = Tuple[Hashable, ...]
Piece = Tuple[int, FrozenSet]          # (tower level, vertex set of a closed target simplex)


def lift(tower: Tower, v, k: int):
    """The level-k vertex sitting at the base vertex v."""
    for j in range(1, k + 1):
        v = tower.bary(j, (v,))
    return v


def _closure(cells: Iterable[Simplex]) -> Set[Simplex]:
    out: Set[Simplex] = set()
    for s in cells:
        s = tuple(sorted(s))
        for r in range(1, len(s) + 1):
            out.update(combinations(s, r))
    return out


class MultiMap:
    def __init__(self, domain: Tower, target: Tower,
                 branches: Sequence[SimplicialMap] = (),
                 values: Optional[Dict[Simplex, Iterable[Simplex]]] = None,
                 name: str = "F"):
        self.domain = domain
        self.target = target
        self.branches = list(branches)
        self.name = name
        for f in self.branches:
            if f.tower is not domain or f.target is not target:
                raise ValueError(f"branch {f.name} lives on other towers")
        explicit = {tuple(sorted(c)): _closure(v) for c, v in (values or {}).items()}
        self._sub: Dict[Simplex, FrozenSet[Simplex]] = {}
        for c in sorted(domain.base.simplices, key=len):
            if c in explicit:
                s = explicit[c]
            else:
                s = set().union(*(explicit.get((v,), set()) for v in c))
            for t in s:
                if t not in target.base:
                    raise ValueError(f"value of {c!r} contains {t!r}, not a cell of the target")
            if not s and not self.branches:
                raise ValueError(f"empty value on {c!r}")
            self._sub[c] = frozenset(s)

    # -- open-cell semantics at the base level
    def subcomplex(self, c: Simplex) -> FrozenSet[Simplex]:
        return self._sub[tuple(sorted(c))]

    def value_cells(self, c: Simplex) -> Set[Simplex]:
        """Open target cells met by multimap(x) for x in the open cell c."""
        out = set(self._sub[c])
        for f in self.branches:
            out.add(tuple(sorted(f.image_set(0, c))))
        return out

    def pieces(self, j: int, t: Simplex) -> List[Piece]:
        """Closed target simplices covering multimap(open t), t a level-j cell of X."""
        base = tuple(sorted(self.domain.simplex_carrier(j, t, 0)))
        out: List[Piece] = [(j, f.image_set(j, t)) for f in self.branches]
        out.extend((0, frozenset(s)) for s in _maximal(self._sub[base]))
        return out

    def value_complex(self, c: Simplex) -> SimplicialComplex:
        return SimplicialComplex(sorted(_closure(self.value_cells(c))))

    @classmethod
    def from_json(cls, data: dict) -> "MultiMap":
        dom = SimplicialComplex.from_json(data["domain"])
        same = "target" not in data or data["target"] == data["domain"]
        tgt = dom if same else SimplicialComplex.from_json(data["target"])
        dt = Tower(dom)
        tt = dt if tgt is dom else Tower(tgt)
        branches = [SimplicialMap(dt, {int(k): int(v) for k, v in b.items()}, f"b{i}", target=tt)
                    for i, b in enumerate(data.get("branches", []))]
        values = {tuple(int(x) for x in k.split(",")): [tuple(c) for c in v]
                  for k, v in data.get("values", {}).items()}
        return cls(dt, tt, branches, values, data.get("name", "F"))


def _maximal(cells: Iterable[Simplex]) -> List[Simplex]:
    cells = set(cells)
    return sorted(s for s in cells
                  if not any(len(t) > len(s) and set(s) <= set(t) for t in cells))


# ---------------------------------------------------------------- semicontinuity

@dataclass
class SemicontinuityReport:
    ok: bool
    witness: Optional[dict] = None


def _face_pairs(x: SimplicialComplex):
    for t in sorted(x.simplices, key=lambda s: (len(s), s)):
        for r in range(1, len(t)):
            for s in combinations(t, r):
                yield s, t


def is_usc(multimap: MultiMap) -> SemicontinuityReport:
    """Upper semicontinuity decided on the cell lattice.

    For s a face of t, points of t near s must land in every open set holding
    multimap(s); the smallest such set is the open star of value_cells(s), so every
    cell of value_cells(t) needs a face in value_cells(s).
    """
    for s, t in _face_pairs(multimap.domain.base):
        vs = multimap.value_cells(s)
        for c in sorted(multimap.value_cells(t)):
            if not any(set(a) <= set(c) for a in vs):
                return SemicontinuityReport(False, {"face": list(s), "cell": list(t),
                                                    "escaping": list(c),
                                                    "open_set": "star of " + repr(sorted(vs))})
    return SemicontinuityReport(True)


def is_lsc(multimap: MultiMap) -> SemicontinuityReport:
    for s, t in _face_pairs(multimap.domain.base):
        vt = multimap.value_cells(t)
        for a in sorted(multimap.value_cells(s)):
            if not any(set(a) <= set(c) for c in vt):
                return SemicontinuityReport(False, {"face": list(s), "cell": list(t),
                                                    "missed": list(a),
                                                    "open_set": "star of " + repr(list(a))})
    return SemicontinuityReport(True)


def is_vietoris_continuous(multimap: MultiMap) -> SemicontinuityReport:
    up = is_usc(multimap)
    return up if not up.ok else is_lsc(multimap)


# ---------------------------------------------------------------- value components

def _components(multimap: MultiMap, n: int, v) -> List[Tuple[Optional[int], object]]:
    """Cell-adjacency components of multimap(v) for a level-n vertex v of X.

    Each component is returned as (branch index or None, representative
    level-n target vertex); the list is ordered by branch index first.
    """
    base = tuple(sorted(multimap.domain.carrier(n, v, 0)))
    sub = multimap.subcomplex(base)
    parent: Dict[object, object] = {}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb, key=repr)] = min(ra, rb, key=repr)

    verts = sorted({w for s in sub for w in s})
    for w in verts:
        parent[("s", w)] = ("s", w)
    for s in sub:
        for w in s[1:]:
            union(("s", s[0]), ("s", w))
    points = {}
    for i, f in enumerate(multimap.branches):
        p = f.vertex(n, v)
        key = ("b", p)
        parent.setdefault(key, key)
        points.setdefault(p, i)
        home = tuple(sorted(multimap.target.carrier(n, p, 0)))
        if home in sub:
            union(key, ("s", home[0]))
    groups: Dict[object, List[object]] = {}
    for a in parent:
        groups.setdefault(find(a), []).append(a)
    out = []
    for members in groups.values():
        bs = sorted(points[m[1]] for m in members if m[0] == "b")
        if bs:
            out.append((bs[0], multimap.branches[bs[0]].vertex(n, v)))
        else:
            w = min(m[1] for m in members)
            out.append((None, lift(multimap.target, w, n)))
    out.sort(key=lambda c: (c[0] is None, c[0] if c[0] is not None else 0, repr(c[1])))
    return out


def check_acyclic_values(multimap: MultiMap, per_component: bool = False) -> Optional[dict]:
    """First base cell whose value (or a component of it) is not Q-acyclic."""
    for c in sorted(multimap.domain.base.simplices, key=lambda s: (len(s), s)):
        k = multimap.value_complex(c)
        parts = [k]
        if per_component:
            parts = [k.subcomplex(comp) for comp in _vertex_components(k)]
        for part in parts:
            h = homology(part.chain_complex(QQ))
            if not h.reduced_is_zero():
                return {"cell": list(c), "betti": list(h.betti())}
    return None


def _vertex_components(k: SimplicialComplex) -> List[List[Simplex]]:
    adj = {v: set() for v in k.vertices}
    for a, b in k.by_dim.get(1, []):
        adj[a].add(b)
        adj[b].add(a)
    seen: Set = set()
    comps = []
    for v in k.vertices:
        if v in seen:
            continue
        stack, comp = [v], set()
        while stack:
            w = stack.pop()
            if w in comp:
                continue
            comp.add(w)
            stack.extend(adj[w] - comp)
        seen |= comp
        comps.append([s for s in k.simplices if s[0] in comp])
    return comps


# ---------------------------------------------------------------- approximation

class ApproximationError(ValueError):
    def __init__(self, message: str, witness: Optional[dict] = None):
        super().__init__(message)
        self.witness = witness


@dataclass
class ApproximationCertificate:
    """A chain operator on level n = level + 2 of X, certified against the
    star cover at `level` (the cover U) and its refinement at level + 1 (V).

    witness[w] is the level-`level` vertex x whose open star U contains the
    open star V of the level-(level+1) vertex w.
    """
    multimap: MultiMap
    level: int
    eps: Fraction
    chains: Dict[Simplex, Chain]
    witness: Dict[Hashable, Hashable]
    strategy: str

    @property
    def n(self) -> int:
        return self.level + 2

    def image(self, chain: Chain) -> Chain:
        out: Chain = {}
        for t, v in chain.items():
            add_into(out, self.chains[t], QQ, v)
        return out

    def morphism(self) -> ChainMorphism:
        src = self.multimap.domain.complex(self.n).chain_complex(QQ)
        tgt = self.multimap.target.complex(self.n).chain_complex(QQ)
        return ChainMorphism(src, tgt, {q: {t: self.chains[t] for t in src.basis(q)} for q in src.degrees})

    def lefschetz(self) -> Fraction:
        if self.multimap.domain is not self.multimap.target:
            raise ValueError("Lefschetz number needs a self-map")
        return Fraction(lefschetz_number(self.morphism()))

    def mixed(self, other: "ApproximationCertificate", q) -> "ApproximationCertificate":
        """q*self + (1-q)*other on the common scale."""
        if (other.level, other.eps) != (self.level, self.eps) or other.multimap is not self.multimap:
            raise ValueError("mixing needs a common scale")
        q = Fraction(q)
        chains = {}
        for t in self.chains:
            c: Chain = {}
            add_into(c, self.chains[t], QQ, q)
            add_into(c, other.chains[t], QQ, 1 - q)
            chains[t] = c
        return ApproximationCertificate(self.multimap, self.level, self.eps, chains, dict(self.witness),
                                        f"{q}*{self.strategy}+{1 - q}*{other.strategy}")


class _Ball:
    """Inner approximation of B(multimap(U), eps) on level-n target cells.

    A target cell c is accepted against a closed piece P when every vertex of c
    lies in P (exact, via tower carriers) or within distance < eps of a vertex
    of P; since the distance to a convex set is convex, all of c is then within
    eps of P.
    """

    def __init__(self, multimap: MultiMap, n: int, eps: Fraction):
        self.multimap, self.n, self.eps = multimap, n, Fraction(eps)
        self._vertex: Dict[Tuple[Hashable, Piece], Fraction] = {}

    def vertex_gap(self, w, piece: Piece) -> Fraction:
        key = (w, piece)
        out = self._vertex.get(key)
        if out is None:
            lvl, verts = piece
            T = self.multimap.target
            if T.carrier(self.n, w, lvl) <= verts:
                out = Fraction(0)
            else:
                p = T.point(self.n, w)
                out = min(dist(p, T.point(lvl, u)) for u in verts)
            self._vertex[key] = out
        return out

    def margin(self, cell: Simplex, pieces: Sequence[Piece]) -> Fraction:
        """eps minus the best bound on the distance from cell to the pieces."""
        best = min(max(self.vertex_gap(w, p) for w in cell) for p in pieces)
        return self.eps - best

    def contains(self, cell: Simplex, pieces: Sequence[Piece]) -> bool:
        return self.margin(cell, pieces) > 0


def _star_pieces(multimap: MultiMap, level: int, x) -> List[Piece]:
    out: Set[Piece] = set()
    for t in multimap.domain.star(level, x):
        out.update(multimap.pieces(level, t))
    return sorted(out, key=lambda p: (p[0], sorted(p[1])))


def _cover_data(multimap: MultiMap, level: int):
    """Witness x(w) and its pieces for every level-(level+1) vertex w."""
    D = multimap.domain
    wit = {w: min(D.carrier(level + 1, w, level)) for w in D.vertices(level + 1)}
    pieces = {x: _star_pieces(multimap, level, x) for x in set(wit.values())}
    return wit, pieces


def _members(D: Tower, n: int, t: Simplex) -> FrozenSet:
    """Level-(n-1) vertices w whose open star contains the closed simplex t."""
    return frozenset.intersection(*(D.carrier(n, v, n - 1) for v in t))


def approximate(multimap: MultiMap, level: int, eps, strategy: str = "average",
                route: str = "continuous") -> ApproximationCertificate:
    """Acyclic-carrier construction of an approximation at the given scale.

    strategy: "average" (1/q over value components), "first" or "last"
    (a single component), or "branch:<i>".  route "usc" requires Q-acyclic
    values, route "continuous" Q-acyclic components.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    bad = check_acyclic_values(multimap, per_component=(route == "continuous"))
    if bad is not None:
        raise ApproximationError("value is not Q-acyclic", bad)
    D = multimap.domain
    n = level + 2
    wit, pieces = _cover_data(multimap, level)
    ball = _Ball(multimap, n, eps)
    chains: Dict[Simplex, Chain] = {}
    weights: Dict[Simplex, Dict[Optional[int], Fraction]] = {}
    carriers: Dict[FrozenSet, List[Piece]] = {}

    def carrier_pieces(t):
        ws = _members(D, n, t)
        out = carriers.get(ws)
        if out is None:
            out = [pieces[wit[w]] for w in sorted(ws)]
            carriers[ws] = out
        return out

    def inside(chain: Chain, t) -> bool:
        groups = carrier_pieces(t)
        return all(ball.contains(c, g) for c in chain for g in groups)

    by_dim = D.by_dim(n)
    for (v,) in by_dim[0]:
        comps = _components(multimap, n, v)
        if strategy == "average":
            chosen = comps
        elif strategy == "first":
            chosen = comps[:1]
        elif strategy == "last":
            chosen = comps[-1:]
        elif strategy.startswith("branch:"):
            i = int(strategy.split(":")[1])
            chosen = [c for c in comps if c[0] == i] or comps[:1]
        else:
            raise ValueError(f"unknown strategy {strategy!r}")
        w = Fraction(1, len(chosen))
        chain: Chain = {}
        wt: Dict[Optional[int], Fraction] = {}
        for b, p in chosen:
            add_into(chain, {(p,): 1}, QQ, w)
            wt[b] = wt.get(b, 0) + w
        chains[(v,)] = chain
        weights[(v,)] = wt
    for q in sorted(by_dim):
        if q == 0:
            continue
        for t in by_dim[q]:
            target = {}
            for f, s in simplex_boundary(t).items():
                add_into(target, chains[f], QQ, s)
            if not target:
                chains[t] = {}
                weights[t] = {}
                continue
            cand = _branch_candidate(multimap, n, t, weights)
            if cand is not None and _boundary(cand) == target and inside(cand, t):
                chains[t] = cand
                weights[t] = weights[(t[0],)]
                continue
            sol = _solve_in_carrier(multimap, n, t, target, carrier_pieces(t), ball)
            if sol is None:
                raise ApproximationError("no chain fills the boundary inside the carrier",
                                         {"simplex": list(t), "level": n})
            chains[t] = sol
            weights[t] = {}
    return ApproximationCertificate(multimap, level, eps, chains, wit, strategy)


def _boundary(chain: Chain) -> Chain:
    out: Chain = {}
    for t, v in chain.items():
        if len(t) > 1:
            add_into(out, simplex_boundary(t), QQ, v)
    return out


def _branch_candidate(multimap: MultiMap, n: int, t: Simplex, weights) -> Optional[Chain]:
    wt = weights[(t[0],)]
    if not wt or None in wt or any(weights[(v,)] != wt for v in t):
        return None
    out: Chain = {}
    for i, c in wt.items():
        add_into(out, multimap.branches[i].apply_simplex(n, t), QQ, c)
    return out


def _solve_in_carrier(multimap: MultiMap, n: int, t: Simplex, target: Chain,
                      groups: List[List[Piece]], ball: _Ball) -> Optional[Chain]:
    q = len(t) - 1
    cells = [c for c in multimap.target.by_dim(n).get(q, [])
             if all(ball.contains(c, g) for g in groups)]
    rows = sorted({f for c in cells for f in simplex_boundary(c)} | set(target))
    index = {r: i for i, r in enumerate(rows)}
    vecs = []
    for c in cells:
        col = [0] * len(rows)
        for f, s in simplex_boundary(c).items():
            col[index[f]] = s
        vecs.append(col)
    rhs = [0] * len(rows)
    for f, s in target.items():
        rhs[index[f]] = s
    sol = solve_in_span(vecs, rhs, _Field(QQ))
    if sol is None:
        return None
    return {c: Fraction(a) for c, a in zip(cells, sol) if a != 0}


@dataclass
class VerificationReport:
    ok: bool
    witness: Optional[dict] = None


def verify_approximation(cert: ApproximationCertificate) -> VerificationReport:
    """Re-derive the chain-map identity, augmentation and every carrier inclusion."""
    multimap, n = cert.multimap, cert.n
    D = multimap.domain
    ball = _Ball(multimap, n, cert.eps)
    pieces = {x: _star_pieces(multimap, cert.level, x) for x in set(cert.witness.values())}
    for w, x in cert.witness.items():
        if x not in D.carrier(cert.level + 1, w, cert.level):
            return VerificationReport(False, {"reason": "witness star does not contain member",
                                              "member": w, "witness": x})
    for q, ts in sorted(D.by_dim(n).items()):
        for t in ts:
            if t not in cert.chains:
                return VerificationReport(False, {"reason": "missing simplex", "simplex": list(t)})
            img = cert.chains[t]
            if q == 0:
                if sum(img.values()) != 1:
                    return VerificationReport(False, {"reason": "augmentation", "simplex": list(t)})
            else:
                rhs: Chain = {}
                for f, s in simplex_boundary(t).items():
                    add_into(rhs, cert.chains[f], QQ, s)
                if _boundary(img) != rhs:
                    return VerificationReport(False, {"reason": "chain map", "simplex": list(t)})
            for w in sorted(_members(D, n, t)):
                ps = pieces[cert.witness[w]]
                for c in img:
                    m = ball.margin(c, ps)
                    if m <= 0:
                        return VerificationReport(False, {"reason": "carrier inclusion",
                                                          "simplex": list(t), "cell": list(c),
                                                          "member": w, "witness": cert.witness[w],
                                                          "margin": str(m)})
    return VerificationReport(True)


# ---------------------------------------------------------------- Lefschetz dichotomy

@dataclass
class MixingWitness:
    first: ApproximationCertificate
    second: ApproximationCertificate
    samples: List[Tuple[Fraction, Fraction, Fraction]]   # (q, direct trace, affine formula)

    @property
    def ok(self) -> bool:
        return all(a == b for _, a, b in self.samples)


@dataclass
class LefschetzDichotomy:
    determinate: bool
    value: Optional[Fraction]
    per_scale: List[Dict[str, Fraction]] = field(default_factory=list)
    mixing: Optional[MixingWitness] = None

    def to_json(self) -> dict:
        out = {"outcome": "Determinate" if self.determinate else "Indeterminate",
               "value": str(self.value) if self.determinate else "Q",
               "per_scale": [{k: str(v) for k, v in s.items()} for s in self.per_scale],
               "sampled": True}
        if self.mixing:
            out["mixing"] = [{"q": str(q), "direct": str(a), "affine": str(b)}
                             for q, a, b in self.mixing.samples]
        return out


MIX_SAMPLES = (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(1))


def mixing_witness(c1: ApproximationCertificate, c2: ApproximationCertificate,
                   qs: Sequence = MIX_SAMPLES) -> MixingWitness:
    l1, l2 = c1.lefschetz(), c2.lefschetz()
    samples = []
    for q in qs:
        q = Fraction(q)
        samples.append((q, c1.mixed(c2, q).lefschetz(), q * l1 + (1 - q) * l2))
    return MixingWitness(c1, c2, samples)


def lefschetz_of_multimap(multimap: MultiMap, schedule: Sequence[Tuple[int, Fraction]],
                          strategies: Sequence[str] = ("first", "last", "average")) -> LefschetzDichotomy:
    """Sample the Lefschetz number over a schedule of (level, eps) scales, refined jointly.

    Agreement across the schedule is evidence, not proof, of a determinate value.
    """
    per_scale = []
    for level, eps in schedule:
        certs = {s: approximate(multimap, level, eps, s) for s in strategies}
        lams = {s: c.lefschetz() for s, c in certs.items()}
        per_scale.append(lams)
        names = list(lams)
        for a, b in combinations(names, 2):
            if lams[a] != lams[b]:
                return LefschetzDichotomy(False, None, per_scale, mixing_witness(certs[a], certs[b]))
    values = {v for s in per_scale for v in s.values()}
    if len(values) != 1:
        return LefschetzDichotomy(False, None, per_scale)
    return LefschetzDichotomy(True, values.pop(), per_scale)


# ---------------------------------------------------------------- fixed points

def _box(points: Sequence[Sequence]) -> List[Tuple[Fraction, Fraction]]:
    return [(min(c), max(c)) for c in zip(*points)]


def box_gap(a: Sequence[Sequence], b: Sequence[Sequence]) -> Fraction:
    """Lower bound on the distance between conv(a) and conv(b)."""
    total = Fraction(0)
    w = Fraction(1, 2)
    for (lo1, hi1), (lo2, hi2) in zip(_box(a), _box(b)):
        total += w * max(Fraction(0), lo2 - hi1, lo1 - hi2)
        w /= 2
    return total


@dataclass
class FixedPointReport:
    outcome: str                      # "located", "refuted", "inconclusive"
    level: int
    cell: Optional[Simplex] = None
    gap: Optional[Fraction] = None
    mesh: Optional[Fraction] = None
    eps: Optional[Fraction] = None
    inequality: Optional[dict] = None
    certificates: List[dict] = field(default_factory=list)
    hypothesis_met: Optional[bool] = None

    def to_json(self) -> dict:
        out = {"outcome": self.outcome, "level": self.level}
        if self.cell is not None:
            out["cell"] = list(self.cell)
        for k in ("gap", "mesh", "eps"):
            v = getattr(self, k)
            if v is not None:
                out[k] = str(v)
        if self.inequality:
            out["inequality"] = {k: str(v) for k, v in self.inequality.items()}
        out["certificates"] = self.certificates
        out["hypothesis_met"] = self.hypothesis_met
        return out


def exact_fixed_cell(multimap: MultiMap, j: int) -> Optional[Simplex]:
    """A level-j cell all of whose points are fixed, or None."""
    if multimap.domain is not multimap.target:
        raise ValueError("fixed points need a self-map")
    D = multimap.domain
    for q in sorted(D.by_dim(j)):
        for t in D.by_dim(j)[q]:
            ts = frozenset(t)
            if any(f.image_set(j, t) == ts for f in multimap.branches):
                return t
            base = tuple(sorted(D.simplex_carrier(j, t, 0)))
            if base in multimap.subcomplex(base):
                return t
    return None


def displacement_gap(multimap: MultiMap, j: int) -> Fraction:
    """Lower bound on d(x, multimap(x)) over X from level-j cell boxes."""
    D = multimap.domain
    best = None
    for ts in D.by_dim(j).values():
        for t in ts:
            src = [D.point(j, v) for v in t]
            for lvl, verts in multimap.pieces(j, t):
                g = box_gap(src, [multimap.target.point(lvl, u) for u in verts])
                best = g if best is None or g < best else best
    return best if best is not None else Fraction(0)


def star_mesh(D: Tower, j: int) -> Fraction:
    """Largest diameter of a closed vertex star at level j."""
    out = Fraction(0)
    for v in D.vertices(j):
        pts = [D.point(j, w) for w in {u for t in D.star(j, v) for u in t}]
        for a, b in combinations(pts, 2):
            d = dist(a, b)
            if d > out:
                out = d
    return out


def fixed_point_certificate(multimap: MultiMap, max_level: int = 3,
                            strategies: Sequence[str] = ("first", "last", "average"),
                            hypothesis_met: Optional[bool] = None) -> FixedPointReport:
    """Locate a fixed cell, or certify the 3*eps displacement gap.

    At each level j a fixed cell is searched exactly.  Failing that, the scale
    eps = gap/3 minus a sliver is tried: if the closed stars of level j have
    diameter < eps, every approximation at (j, eps) moves each simplex to
    chains at distance > eps from it, which is checked on the constructed
    certificates together with a zero Lefschetz number.
    """
    D = multimap.domain
    for j in range(max_level + 1):
        cell = exact_fixed_cell(multimap, j)
        if cell is not None:
            return FixedPointReport("located", j, cell=cell, hypothesis_met=hypothesis_met)
        gap = displacement_gap(multimap, j)
        mesh = star_mesh(D, j)
        if gap <= 0:
            continue
        eps = gap / 3 - gap / 300
        if not mesh < eps:
            continue
        # d(a,x) >= d(y,z) - d(a,z) - d(x,y) > 3 eps - eps - eps
        bound = gap - eps - mesh
        certs = []
        for s in strategies:
            cert = approximate(multimap, j, eps, s)
            ok = verify_approximation(cert).ok
            lam = cert.lefschetz()
            moved = _every_simplex_moved(cert, eps)
            certs.append({"strategy": s, "verified": ok, "lefschetz": str(lam),
                          "fix_points": [] if moved else ["?"]})
            if not (ok and lam == 0 and moved):
                return FixedPointReport("inconclusive", j, gap=gap, mesh=mesh, eps=eps,
                                        certificates=certs, hypothesis_met=hypothesis_met)
        return FixedPointReport("refuted", j, gap=gap, mesh=mesh, eps=eps,
                                inequality={"d(y,z)": gap, "d(a,z)": eps, "d(x,y)": mesh,
                                            "lower_bound": bound, "exceeds_eps": bound > eps},
                                certificates=certs, hypothesis_met=hypothesis_met)
    return FixedPointReport("inconclusive", max_level, hypothesis_met=hypothesis_met)


def _every_simplex_moved(cert: ApproximationCertificate, eps: Fraction) -> bool:
    """Each image cell of chains(t) is farther than eps from t (box bound)."""
    D, T, n = cert.multimap.domain, cert.multimap.target, cert.n
    for t, img in cert.chains.items():
        src = [D.point(n, v) for v in t]
        for c in img:
            if t == c or box_gap(src, [T.point(n, u) for u in c]) <= eps:
                return False
    return True
