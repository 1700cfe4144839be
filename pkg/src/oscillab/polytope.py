"""Newton polytopes with exact rational facet/vertex arithmetic (n <= 4).

The polytope of a support set S is the convex hull of the union of the
shifted orthants nu + R_{>=0}^n over nu in S.  Its H-description is
{nu >= 0 : l_j(nu) >= 1 for all facets j} where each l_j has nonnegative
rational weights; facets are found by brute force over subsets of support
points and coordinate directions, which is exact and adequate at desk scale.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import List, Optional, Sequence, Tuple

from .linalg import rank_exact, solve_exact
from .poly import Polynomial

__all__ = [
    "FaceFunctional",
    "FaceDescriptor",
    "NewtonPolytope",
    "build_polytope",
    "newton_polytope",
    "is_convenient",
    "compact_faces",
    "newton_distance",
    "pair_distance_and_radii",
]

MAX_DIM = 4


@dataclass(frozen=True)
class FaceFunctional:
    """Facet inequality l(nu) = sum w_i nu_i >= 1 of a Newton polytope."""

    weights: Tuple[Fraction, ...]
    denominator: int          # LCM of the weight denominators
    diag_value: Fraction      # l(1,...,1)
    r_value: int              # denominator * diag_value
    compact: bool             # all weights strictly positive

    def __call__(self, point: Sequence) -> Fraction:
        return sum(w * Fraction(p) for w, p in zip(self.weights, point))

    @staticmethod
    def from_weights(weights: Sequence[Fraction]) -> "FaceFunctional":
        w = tuple(Fraction(x) for x in weights)
        dj = lcm(*(x.denominator for x in w)) if w else 1
        diag = sum(w)
        return FaceFunctional(
            weights=w,
            denominator=dj,
            diag_value=diag,
            r_value=int(dj * diag),
            compact=all(x > 0 for x in w),
        )


@dataclass(frozen=True)
class FaceDescriptor:
    """A compact face: strictly positive supporting weights at level 1."""

    weights: Tuple[Fraction, ...]
    generators: Tuple[Tuple[int, ...], ...]
    dim: int

    def value(self, point: Sequence) -> Fraction:
        return sum(w * Fraction(p) for w, p in zip(self.weights, point))


@dataclass(frozen=True)
class NewtonPolytope:
    n: int
    generators: Tuple[Tuple[int, ...], ...]
    facets: Tuple[FaceFunctional, ...]

    def contains(self, point: Sequence) -> bool:
        pt = [Fraction(x) for x in point]
        if any(x < 0 for x in pt):
            return False
        return all(f(pt) >= 1 for f in self.facets)

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "generators": [list(g) for g in self.generators],
            "facets": [
                {
                    "weights": [str(w) for w in f.weights],
                    "dj": f.denominator,
                    "rj": f.r_value,
                    "compact": f.compact,
                }
                for f in self.facets
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def _minimal_points(support) -> List[Tuple[int, ...]]:
    pts = sorted({tuple(int(x) for x in p) for p in support})
    out = []
    for p in pts:
        dominated = any(
            q != p and all(qi <= pi for qi, pi in zip(q, p)) for q in pts
        )
        if not dominated:
            out.append(p)
    return out


def _enumerate_facets(minpts: List[Tuple[int, ...]], n: int) -> List[FaceFunctional]:
    found = {}
    for k in range(1, n + 1):
        for subset in combinations(minpts, k):
            for zeros in combinations(range(n), n - k):
                rows = [[Fraction(g[i]) for i in range(n)] for g in subset]
                rhs = [Fraction(1)] * k
                for i in zeros:
                    row = [Fraction(0)] * n
                    row[i] = Fraction(1)
                    rows.append(row)
                    rhs.append(Fraction(0))
                w = solve_exact(rows, rhs)
                if w is None or any(x < 0 for x in w):
                    continue
                if any(sum(wi * pi for wi, pi in zip(w, p)) < 1 for p in minpts):
                    continue
                key = tuple(w)
                if key in found:
                    continue
                # facet check: active points plus free coordinate directions
                # must span an (n-1)-dimensional affine space
                active = [p for p in minpts if sum(wi * pi for wi, pi in zip(w, p)) == 1]
                dirs = []
                for i in range(n):
                    if w[i] == 0:
                        e = [Fraction(0)] * n
                        e[i] = Fraction(1)
                        dirs.append(e)
                base = active[0]
                span = [
                    [Fraction(pi - bi) for pi, bi in zip(p, base)] for p in active[1:]
                ] + dirs
                if n == 1 or rank_exact(span) == n - 1:
                    found[key] = FaceFunctional.from_weights(w)
    return list(found.values())


def _vertices_from_facets(facets: List[FaceFunctional], n: int) -> List[Tuple[int, ...]]:
    constraints = [(list(f.weights), Fraction(1)) for f in facets]
    for i in range(n):
        row = [Fraction(0)] * n
        row[i] = Fraction(1)
        constraints.append((row, Fraction(0)))
    verts = set()
    for subset in combinations(constraints, n):
        rows = [c[0] for c in subset]
        rhs = [c[1] for c in subset]
        v = solve_exact(rows, rhs)
        if v is None or any(x < 0 for x in v):
            continue
        if any(f(v) < 1 for f in facets):
            continue
        verts.add(tuple(v))
    out = []
    for v in sorted(verts):
        if any(x.denominator != 1 for x in v):
            raise RuntimeError(f"non-integer polytope vertex {v}")
        out.append(tuple(int(x) for x in v))
    return out


def build_polytope(support) -> NewtonPolytope:
    """Exact Newton polytope of a set of exponent vectors.

    Generators are the coordinatewise-minimal support points that lie on the
    boundary (attain equality on some facet); minimal points strictly inside
    the polytope are redundant and dropped.
    """
    pts = list(support)
    if not pts:
        raise ValueError("empty support")
    n = len(next(iter(pts)))
    if not 1 <= n <= MAX_DIM:
        raise ValueError(f"dimension {n} outside supported range 1..{MAX_DIM}")
    minpts = _minimal_points(pts)
    facets = _enumerate_facets(minpts, n)
    if facets:
        gens = [p for p in minpts if any(f(p) == 1 for f in facets)]
    else:
        # only possible when 0 is in the support: the polytope is the orthant
        gens = [tuple([0] * n)]
    facets = sorted(facets, key=lambda f: f.weights)
    return NewtonPolytope(n=n, generators=tuple(gens), facets=tuple(facets))


def newton_polytope(p: Polynomial) -> NewtonPolytope:
    if p.is_zero():
        raise ValueError("zero polynomial has an empty Newton polytope")
    return build_polytope(p.support)


def is_convenient(p: NewtonPolytope) -> Tuple[bool, Optional[List[int]]]:
    """True iff some generator is a pure power on every axis; returns intercepts."""
    intercepts: List[Optional[int]] = [None] * p.n
    for g in p.generators:
        nz = [i for i, x in enumerate(g) if x != 0]
        if len(nz) == 0:
            # origin generator: polytope is the whole orthant, intercept 0 everywhere
            return True, [0] * p.n
        if len(nz) == 1:
            i = nz[0]
            if intercepts[i] is None or g[i] < intercepts[i]:
                intercepts[i] = g[i]
    if all(c is not None for c in intercepts):
        return True, [int(c) for c in intercepts]
    return False, None


def compact_faces(p: NewtonPolytope) -> List[FaceDescriptor]:
    """All compact faces (dimensions 0..n-1), each with positive weights at level 1."""
    ok, _ = is_convenient(p)
    if not ok:
        raise ValueError("compact face enumeration requires a convenient polytope")
    n = p.n
    if not p.facets:
        return [FaceDescriptor(weights=tuple([Fraction(1)] * n),
                               generators=(tuple([0] * n),), dim=0)]
    faces = {}
    gens = list(p.generators)
    nf = len(p.facets)
    for jmask in range(1, 1 << nf):
        jj = [p.facets[j] for j in range(nf) if jmask >> j & 1]
        for imask in range(1 << n):
            ii = [i for i in range(n) if imask >> i & 1]
            vset = tuple(
                g for g in gens
                if all(f(g) == 1 for f in jj) and all(g[i] == 0 for i in ii)
            )
            if not vset or vset in faces:
                continue
            # canonical active sets of the face spanned by vset
            jstar = [f for f in p.facets if all(f(v) == 1 for v in vset)]
            istar = [i for i in range(n) if all(v[i] == 0 for v in vset)]
            # recession directions: coordinate rays lying in every active facet
            recession = [
                k for k in range(n)
                if k not in istar and all(f.weights[k] == 0 for f in jstar)
            ]
            if recession:
                continue
            w = [Fraction(0)] * n
            for f in jstar:
                for k in range(n):
                    w[k] += f.weights[k]
            for i in istar:
                w[i] += 1
            m = Fraction(len(jstar))
            w = tuple(x / m for x in w)
            base = vset[0]
            span = [[Fraction(vi - bi) for vi, bi in zip(v, base)] for v in vset[1:]]
            dim = rank_exact(span) if span else 0
            faces[vset] = FaceDescriptor(weights=w, generators=vset, dim=dim)
    return sorted(faces.values(), key=lambda f: (f.dim, f.generators))


def newton_distance(p: NewtonPolytope):
    """Newton distance t0 = min{t : t*(1,..,1) in polytope} and principal facets."""
    ok, _ = is_convenient(p)
    if not ok:
        raise ValueError("newton distance requires a convenient polytope")
    if not p.facets:
        return Fraction(0), []
    t0 = max(1 / f.diag_value for f in p.facets)
    principal = sorted(
        (f for f in p.facets if 1 / f.diag_value == t0), key=lambda f: f.weights
    )
    return t0, principal


def pair_distance_and_radii(pf: NewtonPolytope, pphi: NewtonPolytope):
    """(d(f,phi), r, r') for a convenient phase polytope and an amplitude polytope.

    d(f,phi) is the smallest d with d*(polytope(phi) + 1) inside polytope(f);
    since both sets are up-closed it is attained at a shifted generator against
    a facet.  r is the largest axis intercept of polytope(f): the slice of
    {|nu| >= r} by the simplex faces has its extreme points on the axes, so
    max intercept is the least r with {nu >= 0, |nu| >= r} contained in the
    polytope.  r' is the smallest coordinate sum of a generator of phi.
    """
    ok, intercepts = is_convenient(pf)
    if not ok:
        raise ValueError("pair distance requires a convenient phase polytope")
    if pf.n != pphi.n:
        raise ValueError("dimension mismatch")
    one = [1] * pf.n
    dvals = []
    for g in pphi.generators:
        shifted = [gi + 1 for gi in g]
        for f in pf.facets:
            dvals.append(1 / f(shifted))
    d = max(dvals) if dvals else Fraction(0)
    r = Fraction(max(intercepts))
    rprime = min(Fraction(sum(g)) for g in pphi.generators)
    return d, r, rprime
