"""Exact chain complexes over Z, Q and Z/p.

Chains are plain dicts ``{cell: coefficient}`` with no zero entries.  Linear
maps between graded modules are stored column-wise: ``maps[q][cell]`` is the
chain that ``cell`` (a basis element in degree ``q``) is sent to.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, Hashable, List, Optional

Cell = Hashable
Chain = Dict[Cell, Any]
ColumnMap = Dict[int, Dict[Cell, Chain]]


# ---------------------------------------------------------------- rings

def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class Ring:
    """One of Z, Q or Z/p.  Scalars are ints (Z, Z/p) or Fractions (Q)."""

    def __init__(self, kind: str, p: Optional[int] = None):
        if kind not in ("Z", "Q", "Zp"):
            raise ValueError(f"unknown ring kind {kind!r}")
        if kind == "Zp":
            if p is None or not _is_prime(int(p)):
                raise ValueError(f"Z/p needs a prime p, got {p!r}")
            p = int(p)
        else:
            p = None
        self.kind = kind
        self.p = p

    @classmethod
    def parse(cls, text: str) -> "Ring":
        text = text.strip()
        if text in ("Z", "Q"):
            return cls(text)
        if text.startswith("Zp:"):
            return cls("Zp", int(text[3:]))
        raise ValueError(f"cannot parse ring {text!r}")

    def __str__(self):
        return f"Zp:{self.p}" if self.kind == "Zp" else self.kind

    __repr__ = __str__

    def __eq__(self, other):
        return isinstance(other, Ring) and (self.kind, self.p) == (other.kind, other.p)

    def __hash__(self):
        return hash((self.kind, self.p))

    @property
    def is_field(self) -> bool:
        return self.kind != "Z"

    def norm(self, x):
        """Bring a scalar into canonical form for this ring."""
        if self.kind == "Zp":
            if isinstance(x, Fraction):
                return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
            return int(x) % self.p
        if isinstance(x, Fraction):
            if x.denominator == 1:
                return x.numerator
            if self.kind == "Z":
                raise ValueError(f"non-integral scalar {x} over Z")
            return x
        if isinstance(x, int):
            return x
        if isinstance(x, str):
            return self.norm(Fraction(x))
        raise TypeError(f"unsupported scalar {x!r}")

    # field-of-fractions arithmetic (Q for Z and Q, Z/p itself otherwise)
    def fnorm(self, x):
        if self.kind == "Zp":
            return self.norm(x)
        return Fraction(x)

    def fdiv(self, a, b):
        if self.kind == "Zp":
            return (a * pow(b, -1, self.p)) % self.p
        return Fraction(a) / Fraction(b)


ZZ = Ring("Z")
QQ = Ring("Q")


def fmt_scalar(x) -> str:
    """Exact rational as a ``"p/q"`` (or ``"p"``) string."""
    return str(Fraction(x))


def parse_scalar(s) -> Fraction:
    return Fraction(s)


# ---------------------------------------------------------------- chains

def chain_add(a: Chain, b: Chain, ring: Ring, scale=1) -> Chain:
    out = dict(a)
    add_into(out, b, ring, scale)
    return out


def add_into(target: Chain, chain: Chain, ring: Ring, scale=1) -> None:
    if scale == 0:
        return
    for c, v in chain.items():
        nv = ring.norm(target.get(c, 0) + scale * v)
        if nv == 0:
            target.pop(c, None)
        else:
            target[c] = nv


def chain_scale(a: Chain, s, ring: Ring) -> Chain:
    out = {}
    for c, v in a.items():
        nv = ring.norm(s * v)
        if nv != 0:
            out[c] = nv
    return out


def apply_columns(cols: Dict[Cell, Chain], chain: Chain, ring: Ring) -> Chain:
    out: Chain = {}
    for c, v in chain.items():
        col = cols.get(c)
        if col:
            add_into(out, col, ring, v)
    return out


# ---------------------------------------------------------------- complexes

class ChainComplex:
    """Free graded augmented complex with finitely many cells per degree."""

    def __init__(self, ring: Ring, bases: Dict[int, List[Cell]],
                 boundary: Optional[ColumnMap] = None,
                 augmentation: Optional[Dict[Cell, Any]] = None):
        self.ring = ring
        self.bases = {q: list(b) for q, b in bases.items() if b}
        self.boundary: ColumnMap = {}
        for q, cols in (boundary or {}).items():
            self.boundary[q] = {c: {f: ring.norm(v) for f, v in ch.items() if ring.norm(v) != 0}
                                for c, ch in cols.items()}
        if augmentation is None:
            augmentation = {c: 1 for c in self.bases.get(0, [])}
        self.augmentation = {c: ring.norm(v) for c, v in augmentation.items()}
        self._degree: Dict[Cell, int] = {}
        for q, b in self.bases.items():
            for c in b:
                self._degree[c] = q

    @property
    def degrees(self) -> List[int]:
        return sorted(self.bases)

    @property
    def top(self) -> int:
        return max(self.bases) if self.bases else -1

    def basis(self, q: int) -> List[Cell]:
        return self.bases.get(q, [])

    def degree_of(self, cell: Cell) -> int:
        return self._degree[cell]

    def __contains__(self, cell):
        return cell in self._degree

    def d(self, chain: Chain, q: int) -> Chain:
        return apply_columns(self.boundary.get(q, {}), chain, self.ring)

    def boundary_of(self, cell: Cell) -> Chain:
        return self.boundary.get(self._degree[cell], {}).get(cell, {})

    def augment(self, chain: Chain):
        return self.ring.norm(sum(self.augmentation.get(c, 0) * v for c, v in chain.items()))

    def size(self) -> int:
        return sum(len(b) for b in self.bases.values())

    def permuted(self, order: Callable[[List[Cell]], List[Cell]]) -> "ChainComplex":
        """Same complex with each degree's basis reordered by ``order``."""
        return ChainComplex(self.ring, {q: order(list(b)) for q, b in self.bases.items()},
                            self.boundary, self.augmentation)


@dataclass
class Report:
    ok: bool
    violation: Optional[dict] = None


def verify_complex(c: ChainComplex) -> Report:
    """Check d∘d = 0 and augmentation∘d = 0; name the first offending cell."""
    for q in c.degrees:
        for cell in c.basis(q):
            bd = c.boundary.get(q, {}).get(cell, {})
            for f in bd:
                if f not in c or c.degree_of(f) != q - 1:
                    return Report(False, {"cell": cell, "degree": q, "reason": "face not in basis",
                                          "face": f})
            if q == 1:
                if c.augment(bd) != 0:
                    return Report(False, {"cell": cell, "degree": q, "reason": "augmentation"})
            elif q >= 2:
                dd = c.d(bd, q - 1)
                if dd:
                    return Report(False, {"cell": cell, "degree": q, "reason": "boundary squared",
                                          "residue": dd})
    for cell in c.augmentation:
        if cell not in c or c.degree_of(cell) != 0:
            return Report(False, {"cell": cell, "degree": 0, "reason": "augmentation off degree 0"})
    return Report(True)


# ---------------------------------------------------------------- morphisms

@dataclass
class ChainMorphism:
    source: ChainComplex
    target: ChainComplex
    maps: ColumnMap
    degree: int = 0

    def image(self, chain: Chain, q: int) -> Chain:
        return apply_columns(self.maps.get(q, {}), chain, self.target.ring)

    def of(self, cell: Cell) -> Chain:
        return self.maps.get(self.source.degree_of(cell), {}).get(cell, {})


@dataclass
class GradedEndomorphism:
    """Degree-0 endomorphism of the underlying graded module (need not commute with d)."""
    complex: ChainComplex
    maps: ColumnMap


@dataclass
class ChainHomotopy:
    source: ChainComplex
    target: ChainComplex
    phi0: ChainMorphism
    phi1: ChainMorphism
    maps: ColumnMap  # degree +1


def check_chain_map(m: ChainMorphism, augmentation: bool = True) -> Report:
    """d∘m = m∘d on every basis cell, and augmentation is preserved."""
    s, t = m.source, m.target
    for q in s.degrees:
        for cell in s.basis(q):
            img = m.maps.get(q, {}).get(cell, {})
            lhs = t.d(img, q + m.degree)
            rhs = m.image(s.boundary.get(q, {}).get(cell, {}), q - 1)
            if lhs != rhs:
                return Report(False, {"cell": cell, "degree": q, "d_of_image": lhs,
                                      "image_of_d": rhs})
            if augmentation and q == 0 and m.degree == 0:
                if t.augment(img) != s.augmentation.get(cell, 0):
                    return Report(False, {"cell": cell, "degree": 0, "reason": "augmentation"})
    return Report(True)


def is_chain_homotopy(h: ChainHomotopy) -> bool:
    """phi1 - phi0 = d h + h d in every degree."""
    s, t, ring = h.source, h.target, h.target.ring
    for q in s.degrees:
        for cell in s.basis(q):
            want = chain_add(h.phi1.of(cell), h.phi0.of(cell), ring, -1)
            got = t.d(h.maps.get(q, {}).get(cell, {}), q + 1)
            add_into(got, apply_columns(h.maps.get(q - 1, {}), s.boundary_of(cell), ring), ring)
            if got != want:
                return False
    return True


def identity_morphism(c: ChainComplex) -> ChainMorphism:
    return ChainMorphism(c, c, {q: {x: {x: 1} for x in c.basis(q)} for q in c.degrees})


def compose(g: ChainMorphism, f: ChainMorphism) -> ChainMorphism:
    maps = {}
    for q in f.source.degrees:
        maps[q] = {x: g.image(f.maps.get(q, {}).get(x, {}), q + f.degree)
                   for x in f.source.basis(q)}
    return ChainMorphism(f.source, g.target, maps, f.degree + g.degree)


# ---------------------------------------------------------------- dense linear algebra

class _Field:
    """Fraction-field arithmetic of a ring, used by the dense routines."""

    def __init__(self, ring: Ring):
        self.ring = ring
        self.zp = ring.kind == "Zp"

    def n(self, x):
        return self.ring.fnorm(x)

    def inv(self, x):
        return pow(x, -1, self.ring.p) if self.zp else 1 / Fraction(x)


def rref(rows: List[List[Any]], F: _Field):
    """Row-reduce in place; return pivot columns."""
    m = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for col in range(ncols):
        piv = None
        for i in range(r, m):
            if rows[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = F.inv(rows[r][col])
        rows[r] = [F.n(v * inv) for v in rows[r]]
        for i in range(m):
            if i != r and rows[i][col] != 0:
                fac = rows[i][col]
                rows[i] = [F.n(a - fac * b) for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == m:
            break
    return pivots


def nullspace(mat: List[List[Any]], ncols: int, F: _Field) -> List[List[Any]]:
    rows = [[F.n(v) for v in row] for row in mat]
    if not rows:
        return [[F.n(1) if i == j else F.n(0) for i in range(ncols)] for j in range(ncols)]
    piv = rref(rows, F)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for fcol in free:
        v = [F.n(0)] * ncols
        v[fcol] = F.n(1)
        for i, pc in enumerate(piv):
            v[pc] = F.n(-rows[i][fcol])
        basis.append(v)
    return basis


def solve_in_span(vectors: List[List[Any]], target: List[Any], F: _Field):
    """Coefficients a with sum a_i vectors[i] = target, or None."""
    n = len(vectors)
    dim = len(target)
    rows = [[F.n(vectors[j][i]) for j in range(n)] + [F.n(target[i])] for i in range(dim)]
    if not rows:
        return []
    piv = rref(rows, F)
    if n in piv:
        return None
    sol = [F.n(0)] * n
    for i, pc in enumerate(piv):
        sol[pc] = rows[i][n]
    return sol


def rank_field(cols: Dict[Cell, Chain], F: _Field) -> int:
    """Rank of a sparse column map by column reduction over a field."""
    pivots: Dict[Cell, Dict[Cell, Any]] = {}
    order: Dict[Cell, int] = {}
    rank = 0
    for col in cols.values():
        v = {k: F.n(x) for k, x in col.items() if x != 0}
        while v:
            for k in v:
                order.setdefault(k, len(order))
            low = max(v, key=lambda k: order[k])
            if low not in pivots:
                pivots[low] = v
                rank += 1
                break
            p = pivots[low]
            fac = F.n(v[low] * F.inv(p[low]))
            for k, x in p.items():
                nv = F.n(v.get(k, 0) - fac * x)
                if nv == 0:
                    v.pop(k, None)
                else:
                    v[k] = nv
    return rank


def smith_diagonal(mat: List[List[int]]) -> List[int]:
    """Nonzero invariant factors of an integer matrix.

    Elimination picks the entry of smallest absolute value as pivot to keep
    coefficient growth down; the resulting diagonal is then normalized so
    each entry divides the next.
    """
    a = [list(map(int, row)) for row in mat]
    m = len(a)
    n = len(a[0]) if m else 0
    diag = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = a[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            piv = a[t][t]
            done = True
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // piv
                    if q:
                        a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    if a[i][t]:
                        done = False
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // piv
                    if q:
                        for row in a:
                            row[j] -= q * row[t]
                    if a[t][j]:
                        done = False
            if done:
                break
            # a remainder survived: move the smallest entry of row/column t to the pivot
            best = (abs(piv), t, t)
            for i in range(t + 1, m):
                if a[i][t] and abs(a[i][t]) < best[0]:
                    best = (abs(a[i][t]), i, t)
            for j in range(t + 1, n):
                if a[t][j] and abs(a[t][j]) < best[0]:
                    best = (abs(a[t][j]), t, j)
            _, i, j = best
            a[t], a[i] = a[i], a[t]
            for row in a:
                row[t], row[j] = row[j], row[t]
        diag.append(abs(a[t][t]))
        t += 1
    # enforce divisibility d_i | d_{i+1}
    from math import gcd
    changed = True
    while changed:
        changed = False
        for i in range(len(diag)):
            for j in range(i + 1, len(diag)):
                g = gcd(diag[i], diag[j])
                if g != diag[i]:
                    l = diag[i] * diag[j] // g
                    diag[i], diag[j] = g, l
                    changed = True
    return diag


# ---------------------------------------------------------------- homology

@dataclass
class Homology:
    ring: Ring
    ranks: Dict[int, int]
    torsion: Dict[int, List[int]] = field(default_factory=dict)

    def betti(self, top: Optional[int] = None) -> tuple:
        top = max(self.ranks) if top is None and self.ranks else (top or 0)
        return tuple(self.ranks.get(q, 0) for q in range(top + 1))

    def reduced_is_zero(self) -> bool:
        if any(self.torsion.get(q) for q in self.torsion):
            return False
        return all(v == (1 if q == 0 else 0) for q, v in self.ranks.items())


def _dense(cols: Dict[Cell, Chain], rows: List[Cell], columns: List[Cell]) -> List[List[Any]]:
    idx = {r: i for i, r in enumerate(rows)}
    out = [[0] * len(columns) for _ in rows]
    for j, c in enumerate(columns):
        for r, v in cols.get(c, {}).items():
            out[idx[r]][j] = v
    return out


def homology(c: ChainComplex) -> Homology:
    """Betti numbers (and torsion over Z) of a verified complex."""
    rep = verify_complex(c)
    if not rep.ok:
        raise ValueError(f"inconsistent complex: {rep.violation}")
    ring = c.ring
    ranks: Dict[int, int] = {}
    torsion: Dict[int, List[int]] = {}
    rk: Dict[int, int] = {}
    if ring.kind == "Z":
        for q in c.degrees:
            if q >= 1 and c.basis(q) and c.basis(q - 1):
                diag = smith_diagonal(_dense(c.boundary.get(q, {}), c.basis(q - 1), c.basis(q)))
                rk[q] = len(diag)
                tors = [d for d in diag if d > 1]
                if tors:
                    torsion[q - 1] = tors
            else:
                rk[q] = 0
    else:
        F = _Field(ring)
        for q in c.degrees:
            rk[q] = rank_field(c.boundary.get(q, {}), F) if q >= 1 else 0
    for q in c.degrees:
        ranks[q] = len(c.basis(q)) - rk.get(q, 0) - rk.get(q + 1, 0)
    return Homology(ring, ranks, torsion)


def betti_via_rank(c: ChainComplex) -> Dict[int, int]:
    """Rational Betti numbers by sparse rank reduction, whatever the ring of ``c``."""
    F = _Field(QQ)
    rk = {q: (rank_field(c.boundary.get(q, {}), F) if q >= 1 else 0) for q in c.degrees}
    return {q: len(c.basis(q)) - rk.get(q, 0) - rk.get(q + 1, 0) for q in c.degrees}


# ---------------------------------------------------------------- induced maps and traces

@dataclass
class HomologyEndomorphism:
    ring: Ring
    matrices: Dict[int, List[List[Any]]]
    representatives: Dict[int, List[Chain]] = field(default_factory=dict)


def _homology_data(c: ChainComplex, F: _Field):
    """Per degree: cycle basis, boundary spanning set and chosen homology representatives."""
    data = {}
    for q in c.degrees:
        basis = c.basis(q)
        n = len(basis)
        lower = c.basis(q - 1)
        if q >= 1 and lower:
            dq = _dense(c.boundary.get(q, {}), lower, basis)
            cycles = nullspace(dq, n, F)
        else:
            cycles = [[F.n(1) if i == j else F.n(0) for i in range(n)] for j in range(n)]
        upper = c.basis(q + 1)
        if upper:
            bd = _dense(c.boundary.get(q + 1, {}), basis, upper)
            bvecs = [[bd[i][j] for i in range(n)] for j in range(len(upper))]
        else:
            bvecs = []
        # independent boundaries, then cycles that extend them
        chosen: List[List[Any]] = []
        for v in bvecs:
            if _independent(chosen, v, F):
                chosen.append([F.n(x) for x in v])
        nb = len(chosen)
        reps = []
        for z in cycles:
            if _independent(chosen, z, F):
                chosen.append(z)
                reps.append(z)
        data[q] = (basis, chosen, nb, reps)
    return data


def _independent(vecs, v, F) -> bool:
    if not any(x != 0 for x in v):
        return False
    if not vecs:
        return True
    return solve_in_span(vecs, v, F) is None


def induced_on_homology(m: ChainMorphism) -> HomologyEndomorphism:
    """Matrix of m_* on chosen homology bases (free part, over the fraction field)."""
    c = m.source
    if m.target is not c and m.target.bases != c.bases:
        raise ValueError("induced_on_homology needs an endomorphism")
    rep = verify_complex(c)
    if not rep.ok:
        raise ValueError(f"inconsistent complex: {rep.violation}")
    F = _Field(c.ring)
    data = _homology_data(c, F)
    mats: Dict[int, List[List[Any]]] = {}
    reps_out: Dict[int, List[Chain]] = {}
    for q, (basis, span, nb, reps) in data.items():
        idx = {x: i for i, x in enumerate(basis)}
        cols = []
        chains = []
        for z in reps:
            chain = {basis[i]: v for i, v in enumerate(z) if v != 0}
            chains.append(chain)
            img = {}
            for x, v in chain.items():
                for y, w in m.maps.get(q, {}).get(x, {}).items():
                    img[y] = F.n(img.get(y, 0) + v * w)
            vec = [F.n(0)] * len(basis)
            for y, w in img.items():
                vec[idx[y]] = w
            coeffs = solve_in_span(span, vec, F)
            if coeffs is None:
                raise ValueError(f"image of a cycle is not a cycle in degree {q}")
            cols.append(coeffs[nb:])
        k = len(reps)
        mats[q] = [[cols[j][i] for j in range(k)] for i in range(k)]
        reps_out[q] = chains
    return HomologyEndomorphism(c.ring, mats, reps_out)


def trace(e, q: int):
    if isinstance(e, HomologyEndomorphism):
        mat = e.matrices.get(q, [])
        F = _Field(e.ring)
        return F.n(sum((mat[i][i] for i in range(len(mat))), 0))
    if isinstance(e, (GradedEndomorphism, ChainMorphism)):
        cx = e.complex if isinstance(e, GradedEndomorphism) else e.source
        F = _Field(cx.ring)
        cols = e.maps.get(q, {})
        return F.n(sum((cols.get(x, {}).get(x, 0) for x in cx.basis(q)), 0))
    raise TypeError(f"cannot take trace of {type(e).__name__}")


def lefschetz_number(e):
    """Alternating trace sum over the fraction field (or Z/p itself)."""
    if isinstance(e, HomologyEndomorphism):
        ring, degrees = e.ring, e.matrices.keys()
    elif isinstance(e, GradedEndomorphism):
        ring, degrees = e.complex.ring, e.complex.degrees
    elif isinstance(e, ChainMorphism):
        ring, degrees = e.source.ring, e.source.degrees
    else:
        raise TypeError(f"cannot take Lefschetz number of {type(e).__name__}")
    F = _Field(ring)
    total = F.n(0)
    for q in degrees:
        t = trace(e, q)
        total = F.n(total + t if q % 2 == 0 else total - t)
    return total


# ---------------------------------------------------------------- tensor products

def tensor_complex(a: ChainComplex, b: ChainComplex) -> ChainComplex:
    if a.ring != b.ring:
        raise ValueError(f"ring mismatch: {a.ring} vs {b.ring}")
    ring = a.ring
    bases: Dict[int, List[Cell]] = {}
    bd: ColumnMap = {}
    for p in a.degrees:
        for q in b.degrees:
            for x in a.basis(p):
                for y in b.basis(q):
                    cell = (x, y)
                    bases.setdefault(p + q, []).append(cell)
                    ch: Chain = {}
                    for fx, v in a.boundary_of(x).items():
                        add_into(ch, {(fx, y): v}, ring)
                    sign = -1 if p % 2 else 1
                    for fy, v in b.boundary_of(y).items():
                        add_into(ch, {(x, fy): sign * v}, ring)
                    bd.setdefault(p + q, {})[cell] = ch
    aug = {(x, y): ring.norm(a.augmentation.get(x, 0) * b.augmentation.get(y, 0))
           for x in a.basis(0) for y in b.basis(0)}
    return ChainComplex(ring, bases, bd, aug)


def tensor_morphism(f: ChainMorphism, g: ChainMorphism,
                    source: Optional[ChainComplex] = None,
                    target: Optional[ChainComplex] = None) -> ChainMorphism:
    if f.source.ring != g.source.ring:
        raise ValueError("ring mismatch")
    ring = f.source.ring
    source = source or tensor_complex(f.source, g.source)
    target = target or tensor_complex(f.target, g.target)
    maps: ColumnMap = {}
    for n in source.degrees:
        for (x, y) in source.basis(n):
            p = f.source.degree_of(x)
            sign = -1 if (g.degree * p) % 2 else 1
            out: Chain = {}
            for fx, v in f.of(x).items():
                for gy, w in g.of(y).items():
                    add_into(out, {(fx, gy): sign * v * w}, ring)
            maps.setdefault(n, {})[(x, y)] = out
    return ChainMorphism(source, target, maps, f.degree + g.degree)


# ---------------------------------------------------------------- JSON interchange

def to_jsonable(cell):
    if isinstance(cell, tuple):
        return [to_jsonable(x) for x in cell]
    if isinstance(cell, frozenset):
        return sorted(to_jsonable(x) for x in cell)
    if isinstance(cell, Fraction):
        return fmt_scalar(cell)
    return cell


def from_jsonable(obj):
    if isinstance(obj, list):
        return tuple(from_jsonable(x) for x in obj)
    return obj


def complex_to_json(c: ChainComplex) -> dict:
    bases = {str(q): [to_jsonable(x) for x in c.basis(q)] for q in c.degrees}
    triplets = {}
    for q in c.degrees:
        if q < 1:
            continue
        rows = {x: i for i, x in enumerate(c.basis(q - 1))}
        trip = []
        for j, x in enumerate(c.basis(q)):
            for f, v in c.boundary.get(q, {}).get(x, {}).items():
                trip.append([rows[f], j, fmt_scalar(v)])
        trip.sort()
        triplets[str(q)] = trip
    aug = [[i, fmt_scalar(c.augmentation[x])] for i, x in enumerate(c.basis(0))
           if c.augmentation.get(x, 0) != 0]
    return {"ring": str(c.ring), "bases": bases, "boundary": triplets, "augmentation": aug}


def complex_from_json(d: dict) -> ChainComplex:
    ring = Ring.parse(d["ring"])
    bases = {int(q): [from_jsonable(x) for x in b] for q, b in d["bases"].items()}
    bd: ColumnMap = {}
    for q, trip in d.get("boundary", {}).items():
        q = int(q)
        cols: Dict[Cell, Chain] = {x: {} for x in bases.get(q, [])}
        for i, j, v in trip:
            cols[bases[q][j]][bases[q - 1][i]] = ring.norm(parse_scalar(v))
        bd[q] = cols
    aug = None
    if "augmentation" in d:
        aug = {bases[0][i]: ring.norm(parse_scalar(v)) for i, v in d["augmentation"]}
    return ChainComplex(ring, bases, bd, aug)
