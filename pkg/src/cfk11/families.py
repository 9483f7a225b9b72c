"""
Builders for the two-parameter families K_n^(3,q), q = 3k+1 or 3k+2, and
closed forms for their knot Floer ranks, Alexander polynomials and
determinants.

Every diagram here comes from one normal form.  Cut the torus along alpha
into an annulus.  Beta then consists of

  * ``a`` nested rainbows on the lower boundary, around z,
  * ``a`` nested rainbows on the upper boundary, around w,
  * ``V`` parallel strands crossing the annulus,

with the upper pattern rotated ``s`` slots against the lower one and the
strands joining lower slot i to upper slot i+t (mod V).  The family members
are the choices

    3k+1:  V = 2k+1, s = 2a, t = k+1, then reflected left-right
    3k+2:  V = 2k+1, s = 2a, t = k

with 2a + V equal to the generator count.  With these choices the disks of
every member (k, n <= 3 checked) are exactly the ones listed for the family,
and the generators along beta come out in the listed order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction as Fr
from typing import Optional

from .diagram import Diagram11

VARIANTS = ("3k+1", "3k+2")


class UnknownName(KeyError):
    pass


class NotAFamilyMember(ValueError):
    pass


@dataclass(frozen=True)
class FamilySpec:
    variant: str
    k: int
    n: int

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if self.k < 1 or self.n < 0:
            raise ValueError("need k >= 1 and n >= 0")

    @property
    def q(self) -> int:
        return 3 * self.k + (1 if self.variant == "3k+1" else 2)

    @property
    def generator_count(self) -> int:
        base = 4 * self.k * (2 * self.n + 1) + 4 * self.n
        return base + (1 if self.variant == "3k+1" else 3)

    @property
    def name(self) -> str:
        return f"K_{self.n}^(3,{self.q})"

    def with_n(self, n: int) -> "FamilySpec":
        return FamilySpec(self.variant, self.k, n)


def _simplify(verts, hol):
    """Drop vertices where the polyline does not turn (including across the period seam)."""
    v = list(verts)
    changed = True
    while changed and len(v) > 1:
        changed = False
        for i in range(len(v)):
            a = v[i - 1] if i else (v[-1][0] - hol[0], v[-1][1] - hol[1])
            b = v[i]
            c = v[i + 1] if i + 1 < len(v) else (v[0][0] + hol[0], v[0][1] + hol[1])
            if (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]) == 0:
                del v[i]
                changed = True
                break
    return v


def normal_form(a: int, V: int, s: int, t: int, mirror: bool = False,
                name: str = "", labels=None) -> Optional[Diagram11]:
    """Diagram with ``a`` rainbows per basepoint and ``V`` crossing strands.

    Returns None when the data do not describe a single curve meeting alpha
    algebraically once.
    """
    N = 2 * a + V
    X = lambda i: Fr(2 * i + 1, 2 * N)            # slot i on alpha
    H = lambda d: Fr(d + 1, 4 * (a + 2))          # height of a rainbow at nesting depth d
    low = {}
    for i in range(a):
        p, q = i, 2 * a - 1 - i
        low[p] = (q, a - 1 - i)
        low[q] = (p, a - 1 - i)
    high = {}
    for i in range(a):
        p, q = s + i, s + 2 * a - 1 - i
        high[p % N] = (p, q, a - 1 - i)
        high[q % N] = (q, p, a - 1 - i)
    # strand i runs from lower slot 2a+i to upper slot s+2a+(i+t mod V)
    dx = []
    for i in range(V):
        top = X(s + 2 * a + (i + t) % V) + (1 if i + t >= V else 0)
        dx.append(top - X(2 * a + i))
    wind = min(range(-3, 4), key=lambda m: (abs(sum(d - m for d in dx)), m))
    dx = [d - wind for d in dx]
    strand_at_top = {(s + 2 * a + (i + t) % V) % N: i for i in range(V)}

    verts = []
    x, y = X(2 * a), 0
    slot, up = 2 * a, True
    steps = 0
    while True:
        steps += 1
        if steps > N:
            return None
        if up and slot in low:
            q, d = low[slot]
            xq = x + X(q) - X(slot)
            verts += [(x, y + H(d)), (xq, y + H(d))]
            x, slot, up = xq, q, False
        elif up:
            i = slot - 2 * a
            verts += [(x, y + Fr(1, 3)), (x + dx[i], y + Fr(2, 3))]
            x, y = x + dx[i], y + 1
            slot = (s + 2 * a + (i + t) % V) % N
        elif slot in high:
            pu, qu, d = high[slot]
            xq = x + X(qu) - X(pu)
            verts += [(x, y - H(d)), (xq, y - H(d))]
            x, slot, up = xq, qu % N, True
        else:
            i = strand_at_top[slot]
            verts += [(x, y - Fr(1, 3)), (x - dx[i], y - Fr(2, 3))]
            x, y = x - dx[i], y - 1
            slot, up = 2 * a + i, False
        if (slot, up) == (2 * a, True):
            break
    if steps != N or abs(y) != 1:
        return None
    hol = (int(x - X(2 * a)), y)
    verts = _simplify(verts, hol)
    if a:
        z = ((X(a - 1) + X(a)) / 2, H(0) / 2)
        w = (((X(s + a - 1) + X(s + a)) / 2) % 1, 1 - H(0) / 2)
    else:
        z, w = (Fr(0), Fr(1, 8)), (Fr(0), Fr(7, 8))
    if mirror:
        verts = [(1 - vx, vy) for vx, vy in verts]
        hol = (-hol[0], hol[1])
        z = (1 - z[0], z[1])
        w = (1 - w[0], w[1])
    return Diagram11(verts, hol, z, w, name=name, labels=labels)


def family_labels(spec: FamilySpec) -> list[str]:
    """Generator names in order along beta.  ``b1_2`` stands for b with superscript 1, subscript 2."""
    k, n = spec.k, spec.n
    out = []
    if spec.variant == "3k+1":
        for i in range(k, 0, -1):
            out += [f"b{i}_{j}" for j in range(1, 2 * n + 2)]
            out += [f"a{i}_{j}" for j in range(2 * n + 1, 0, -1)]
        out += [f"f{j}" for j in range(1, 2 * n + 1)] + ["g"] + [f"e{j}" for j in range(2 * n, 0, -1)]
        for i in range(1, k + 1):
            out += [f"c{i}_{j}" for j in range(1, 2 * n + 2)]
            out += [f"d{i}_{j}" for j in range(2 * n + 1, 0, -1)]
    else:
        for i in range(k, 0, -1):
            out += [f"a{i}_{j}" for j in range(1, 2 * n + 2)]
            out += [f"b{i}_{j}" for j in range(2 * n + 1, 0, -1)]
        out += [f"e{j}" for j in range(1, 2 * n + 2)] + ["g"] + [f"f{j}" for j in range(2 * n + 1, 0, -1)]
        for i in range(1, k + 1):
            out += [f"d{i}_{j}" for j in range(1, 2 * n + 2)]
            out += [f"c{i}_{j}" for j in range(2 * n + 1, 0, -1)]
    return out


def build_family(spec: FamilySpec) -> Diagram11:
    N = spec.generator_count
    V = 2 * spec.k + 1
    a = (N - V) // 2
    labels = family_labels(spec)
    if spec.variant == "3k+1":
        d = normal_form(a, V, 2 * a, spec.k + 1, mirror=True, name=spec.name, labels=labels)
    else:
        d = normal_form(a, V, 2 * a, spec.k, mirror=False, name=spec.name, labels=labels)
    if d is None or d.lift.n != N:
        raise NotAFamilyMember(f"normal form failed for {spec}")
    return d


_TEST_KNOTS = {
    "unknot": (0, 1, 0, 0),
    "trefoil": (1, 1, 2, 0),
    "figure_eight": (2, 1, 1, 0),
}


def build_test_knot(name: str) -> Diagram11:
    try:
        a, V, s, t = _TEST_KNOTS[name]
    except KeyError:
        raise UnknownName(f"unknown test knot {name!r}; choose from {sorted(_TEST_KNOTS)}") from None
    return normal_form(a, V, s, t, name=name)


# ---------------------------------------------------------------------------
# closed forms

def oracle_hfk(spec: FamilySpec) -> dict[tuple[int, int], int]:
    """Rank of HFK-hat in bigrading (Maslov d, Alexander i)."""
    k, n = spec.k, spec.n
    table = {}

    def put(d, i, r):
        if r:
            table[(d, i)] = table.get((d, i), 0) + r

    if spec.variant == "3k+1":
        for j in range(k + 1):
            put(1 - 2 * j, 3 * k + 1 - 3 * j, n)
            put(-2 * k - 1 - 4 * j, -1 - 3 * j, n)
            put(-2 * j, 3 * k - 3 * j, 2 * n + 1)
        for j in range(k):
            put(-2 * k - 4 - 4 * j, -3 - 3 * j, 2 * n + 1)
            put(-1 - 2 * j, 3 * k - 1 - 3 * j, n + 1)
            put(-2 * k - 3 - 4 * j, -2 - 3 * j, n + 1)
    else:
        for j in range(k + 1):
            put(-2 * j, 3 * k + 1 - 3 * j, n + 1)
            put(-2 * k - 2 - 4 * j, -1 - 3 * j, n + 1)
            put(-1 - 2 * j, 3 * k - 3 * j, 2 * n + 1)
        for j in range(k):
            put(-2 * k - 5 - 4 * j, -3 - 3 * j, 2 * n + 1)
            put(-2 - 2 * j, 3 * k - 1 - 3 * j, n)
            put(-2 * k - 4 - 4 * j, -2 - 3 * j, n)
    return table


def oracle_alexander(spec: FamilySpec):
    from .invariants import LaurentPolynomial

    k, n = spec.k, spec.n
    c: dict[int, int] = {}

    def put(e, v):
        c[e] = c.get(e, 0) + v

    if spec.variant == "3k+1":
        for i in range(1, k + 1):
            put(3 * i + 1, -n); put(3 * i, 2 * n + 1); put(3 * i - 1, -(n + 1))
            put(-3 * i + 1, -(n + 1)); put(-3 * i, 2 * n + 1); put(-3 * i - 1, -n)
        put(1, -n); put(0, 2 * n + 1); put(-1, -n)
    else:
        for i in range(1, k + 1):
            put(3 * i + 1, n + 1); put(3 * i, -(2 * n + 1)); put(3 * i - 1, n)
            put(-3 * i + 1, n); put(-3 * i, -(2 * n + 1)); put(-3 * i - 1, n + 1)
        put(1, n + 1); put(0, -(2 * n + 1)); put(-1, n + 1)
    return LaurentPolynomial.from_dict(c)


def oracle_determinant(spec: FamilySpec) -> int:
    odd = spec.k % 2 == 1
    if spec.variant == "3k+1":
        return 4 * spec.n + (3 if odd else 1)
    return 4 * spec.n + (1 if odd else 3)


def oracle_tau(spec: FamilySpec) -> int:
    return spec.q - 1


def staircase_steps(p: int, q: int) -> list[int]:
    """Step lengths of the staircase of the torus knot T(p,q), from the top."""
    # exponents of the Alexander polynomial (t^pq - 1)(t - 1) / ((t^p - 1)(t^q - 1))
    num = [0] * (p * q + 2)
    num[p * q + 1] += 1; num[p * q] -= 1; num[1] -= 1; num[0] += 1
    den = [0] * (p + q + 1)
    for e1, c1 in ((p, 1), (0, -1)):
        for e2, c2 in ((q, 1), (0, -1)):
            den[e1 + e2] += c1 * c2
    quot = [0] * (len(num) - len(den) + 1)
    rem = num[:]
    for i in range(len(quot) - 1, -1, -1):
        quot[i] = rem[i + len(den) - 1] // den[-1]
        for j, dc in enumerate(den):
            rem[i + j] -= quot[i] * dc
    exps = [e for e in range(len(quot) - 1, -1, -1) if quot[e]]
    return [exps[i] - exps[i + 1] for i in range(len(exps) - 1)]


def is_perfect_square(m: int) -> bool:
    return m >= 0 and math.isqrt(m) ** 2 == m
