"""
Invariants read off a CFK^infty complex: HFK-hat ranks, the Alexander
polynomial and determinant, the Upsilon function and tau, plus a few
structural verdicts (thinness, L-space obstructions, the Fox-Milnor square
test on determinants).

All arithmetic is exact (ints and Fractions).
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .complex import CFKComplex, decompose, graded_homology, simplify_basis


class NormalizationError(ValueError):
    pass


class NonIntegerSlope(ValueError):
    pass


def fmt_rational(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class LaurentPolynomial:
    """Integer Laurent polynomial in t, stored as {exponent: coefficient}."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: dict[int, int] | None = None):
        self._c = {e: c for e, c in (coeffs or {}).items() if c}

    @classmethod
    def from_dict(cls, d) -> "LaurentPolynomial":
        return cls(dict(d))

    @classmethod
    def from_list(cls, min_exponent: int, coeffs: Iterable[int]) -> "LaurentPolynomial":
        return cls({min_exponent + i: c for i, c in enumerate(coeffs)})

    @property
    def coefficients(self) -> dict[int, int]:
        return dict(sorted(self._c.items()))

    @property
    def min_exponent(self) -> int:
        return min(self._c, default=0)

    @property
    def max_exponent(self) -> int:
        return max(self._c, default=0)

    def __call__(self, t):
        t = Fraction(t)
        return sum(c * t ** e for e, c in self._c.items())

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPolynomial({0: other})
        return isinstance(other, LaurentPolynomial) and self._c == other._c

    def __hash__(self):
        return hash(tuple(sorted(self._c.items())))

    def __neg__(self):
        return LaurentPolynomial({e: -c for e, c in self._c.items()})

    def __add__(self, other):
        out = defaultdict(int, self._c)
        for e, c in other._c.items():
            out[e] += c
        return LaurentPolynomial(out)

    def __mul__(self, other):
        out = defaultdict(int)
        for e1, c1 in self._c.items():
            for e2, c2 in other._c.items():
                out[e1 + e2] += c1 * c2
        return LaurentPolynomial(out)

    def is_symmetric(self) -> bool:
        return all(self._c.get(-e) == c for e, c in self._c.items())

    def to_json(self) -> dict:
        return {str(e): c for e, c in sorted(self._c.items())}

    def __repr__(self):
        return f"LaurentPolynomial({self.coefficients})"

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for e, c in sorted(self._c.items(), reverse=True):
            mono = "" if e == 0 else ("t" if e == 1 else f"t^{e}")
            if mono and abs(c) == 1:
                coef = "-" if c < 0 else "+"
                parts.append(f"{coef} {mono}")
            else:
                parts.append(f"{'-' if c < 0 else '+'} {abs(c)}{mono}")
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


# ---------------------------------------------------------------------------
# HFK-hat and Alexander polynomial

def hfk_ranks(c: CFKComplex) -> dict[tuple[int, int], int]:
    """Ranks of HFK-hat keyed by (M, A): homology of the arrows with n_z = n_w = 0."""
    out = {}
    grad = c.gradings()
    plain = [a for a in c.arrows if a.n_z == 0 and a.n_w == 0]
    byA = defaultdict(list)
    for l in c.labels:
        byA[grad[l][0]].append(l)
    for A, ls in byA.items():
        H = graded_homology(ls, {l: grad[l][1] for l in ls}, [a for a in plain if a.source in ls])
        for m, r in H.items():
            out[(m, A)] = r
    return dict(sorted(out.items()))


def alexander_polynomial(c: CFKComplex | dict) -> LaurentPolynomial:
    ranks = c if isinstance(c, dict) else hfk_ranks(c)
    coeffs = defaultdict(int)
    for (m, a), r in ranks.items():
        coeffs[a] += (-1) ** (m % 2) * r
    p = LaurentPolynomial(coeffs)
    v = p(1)
    if v == -1:
        p = -p
    elif v != 1:
        raise NormalizationError(f"graded Euler characteristic evaluates to {v} at t = 1")
    return p


def determinant(c_or_poly) -> int:
    p = c_or_poly if isinstance(c_or_poly, LaurentPolynomial) else alexander_polynomial(c_or_poly)
    return abs(int(p(-1)))


# ---------------------------------------------------------------------------
# Upsilon

@dataclass(frozen=True)
class PLFunction:
    """Continuous piecewise-linear function on [0, 2] given by its breakpoints."""

    points: tuple   # ((t, value), ...) with t increasing, collinear points removed

    @classmethod
    def from_points(cls, pts) -> "PLFunction":
        pts = [(Fraction(t), Fraction(v)) for t, v in pts]
        out = []
        for p in pts:
            if out and out[-1][0] == p[0]:
                if out[-1][1] != p[1]:
                    raise ValueError("discontinuous")
                continue
            while len(out) >= 2:
                (t0, v0), (t1, v1) = out[-2], out[-1]
                if (v1 - v0) * (p[0] - t1) == (p[1] - v1) * (t1 - t0):
                    out.pop()
                else:
                    break
            out.append(p)
        return cls(tuple(out))

    @property
    def breakpoints(self) -> tuple:
        """Interior points where the slope changes."""
        return tuple(t for t, _ in self.points[1:-1])

    def __call__(self, t) -> Fraction:
        t = Fraction(t)
        pts = self.points
        if not pts[0][0] <= t <= pts[-1][0]:
            raise ValueError(f"{t} outside the domain")
        for (t0, v0), (t1, v1) in zip(pts, pts[1:]):
            if t0 <= t <= t1:
                return v0 + (v1 - v0) * (t - t0) / (t1 - t0)
        return pts[0][1]

    def slopes(self) -> list[Fraction]:
        return [(v1 - v0) / (t1 - t0) for (t0, v0), (t1, v1) in zip(self.points, self.points[1:])]

    def is_zero(self) -> bool:
        return all(v == 0 for _, v in self.points)

    def is_symmetric(self) -> bool:
        return all(self(2 - t) == v for t, v in self.points)

    def to_json(self) -> dict:
        return {"breakpoints": [[fmt_rational(t), fmt_rational(v)] for t, v in self.points],
                "slopes": [fmt_rational(s) for s in self.slopes()]}


def _level(M: int, A: int, t: Fraction) -> Fraction:
    # the grading-zero translate of a generator sits at i = -M/2, j = i + A
    return Fraction(-M, 2) + t * Fraction(A, 2)


def _echelon(vectors: list[int], order: list[int]) -> list[int]:
    """Pivot positions (in ``order`` coordinates) of a row-reduced spanning set."""
    rank = {g: r for r, g in enumerate(order)}
    basis = {}
    for v in vectors:
        w = 0
        for g in range(v.bit_length()):
            if v >> g & 1:
                w |= 1 << rank[g]
        while w:
            top = w.bit_length() - 1
            if top in basis:
                w ^= basis[top]
            else:
                basis[top] = w
                break
    return sorted(basis)


class _UpsilonData:
    def __init__(self, c: CFKComplex):
        grad = c.gradings()
        self.even = [l for l in c.labels if grad[l][1] % 2 == 0]
        odd = [l for l in c.labels if grad[l][1] % 2]
        self.grad = grad
        pos_e = {l: i for i, l in enumerate(self.even)}
        pos_o = {l: i for i, l in enumerate(odd)}
        d_even = defaultdict(int)        # even generator -> image in odd coordinates
        boundaries = defaultdict(int)    # odd generator -> image in even coordinates
        for a in c.arrows:
            if a.source in pos_e:
                d_even[a.source] ^= 1 << pos_o[a.target]
            else:
                boundaries[a.source] ^= 1 << pos_e[a.target]
        self.B = [v for v in boundaries.values() if v]
        self.Z = _kernel([d_even[l] for l in self.even])
        if len(self.Z) - _rank(self.B) != 1:
            raise ValueError("total homology in grading zero is not one dimensional")

    def nu(self, t: Fraction) -> Fraction:
        lev = [_level(self.grad[l][1], self.grad[l][0], t) for l in self.even]
        order = sorted(range(len(self.even)), key=lambda i: (lev[i], i))
        pz = _echelon(self.Z, order)
        pb = _echelon(self.B, order)
        # the first level at which cycles outnumber boundaries
        levels = sorted(set(lev))
        for s in levels:
            nz = sum(1 for p in pz if lev[order[p]] <= s)
            nb = sum(1 for p in pb if lev[order[p]] <= s)
            if nz > nb:
                return s
        raise AssertionError("no generator of homology found")


def _rank(vectors) -> int:
    return len(_echelon(vectors, list(range(max((v.bit_length() for v in vectors), default=0)))))


def _kernel(images: list[int]) -> list[int]:
    """Basis (bitmasks over the domain) of the kernel of the map e_i -> images[i]."""
    rows = [(v, 1 << i) for i, v in enumerate(images)]
    pivots = {}
    kernel = []
    for v, tag in rows:
        while v:
            top = v.bit_length() - 1
            if top in pivots:
                pv, pt = pivots[top]
                v ^= pv
                tag ^= pt
            else:
                pivots[top] = (v, tag)
                break
        if not v:
            kernel.append(tag)
    return kernel


def upsilon(c: CFKComplex) -> PLFunction:
    """Upsilon(t) = -2 nu(t), nu the least t-level of a cycle generating homology in degree 0.

    nu is linear between consecutive values of t where two grading-zero
    generators change their level order, so it is sampled at those values
    and the midpoints between them, and each piece is checked for linearity.
    """
    data = _UpsilonData(c)
    cands = {Fraction(0), Fraction(2)}
    pts = {(data.grad[l][1], data.grad[l][0]) for l in data.even}
    for (m1, a1) in pts:
        for (m2, a2) in pts:
            if a1 != a2:
                t = Fraction(m1 - m2, a1 - a2)
                if 0 < t < 2:
                    cands.add(t)
    cands = sorted(cands)
    values = [(t, -2 * data.nu(t)) for t in cands]
    for (t0, v0), (t1, v1) in zip(values, values[1:]):
        mid = (t0 + t1) / 2
        if -2 * data.nu(mid) != (v0 + v1) / 2:
            raise AssertionError(f"Upsilon is not linear on [{t0}, {t1}]")
    return PLFunction.from_points(values)


def tau(c_or_upsilon) -> int:
    """tau = -Upsilon'(0)."""
    f = c_or_upsilon if isinstance(c_or_upsilon, PLFunction) else upsilon(c_or_upsilon)
    s = -f.slopes()[0]
    if s.denominator != 1:
        raise NonIntegerSlope(f"initial slope {s} is not an integer")
    return int(s)


def is_convex(f: PLFunction) -> bool:
    s = f.slopes()
    return all(a <= b for a, b in zip(s, s[1:]))


# ---------------------------------------------------------------------------
# verdicts

def is_thin(c: CFKComplex) -> bool:
    deltas = {a - m for (m, a) in hfk_ranks(c)}
    return len(deltas) <= 1


@dataclass(frozen=True)
class LSpaceVerdict:
    coeffs_pm1: bool
    single_staircase: bool

    @property
    def obstructed(self) -> bool:
        return not (self.coeffs_pm1 and self.single_staircase)

    def to_json(self) -> dict:
        return {"coeffs_pm1": self.coeffs_pm1, "single_staircase": self.single_staircase,
                "verdict": "not an L-space knot" if self.obstructed else "consistent with L-space knot"}


def lspace_obstructions(c: CFKComplex) -> LSpaceVerdict:
    p = alexander_polynomial(c)
    pm1 = all(abs(v) == 1 for v in p.coefficients.values())
    comps = decompose(simplify_basis(c))
    return LSpaceVerdict(pm1, len(comps) == 1 and comps[0].kind == "staircase")


def fox_milnor_square_test(det1: int, det2: int) -> str:
    """A slice knot has square determinant, so det1 * det2 must be a square
    for the connected sum of one knot with the mirror of the other to be slice."""
    m = det1 * det2
    return "inconclusive" if math.isqrt(m) ** 2 == m else "obstructed"
