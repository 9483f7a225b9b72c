"""
Doubly pointed genus one Heegaard diagrams, encoded as exact piecewise linear
lifts to the plane.

The torus is R^2 / Z^2.  The alpha curve is the image of the horizontal line
y = 0 and beta is the image of a closed PL curve given by one period of its
lift: vertices v_0, ..., v_{L-1}, closed up by the translation
v_L = v_0 + holonomy.  Everything here is exact (``fractions.Fraction``).

Internally coordinates are rescaled to integers (see :class:`Lift`), so the
lattice period becomes an integer ``scale`` and every crossing of beta with a
lift of alpha lands on an integer abscissa.
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

Point = tuple[Fraction, Fraction]


class DiagramError(ValueError):
    """Base class for invalid diagrams.  ``witness`` locates the problem."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotEmbedded(DiagramError):
    pass


class NotTransverse(DiagramError):
    pass


class NotS3(DiagramError):
    pass


class BasepointOnCurve(DiagramError):
    pass


class SchemaError(ValueError):
    def __init__(self, message, offset=0):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class DiagramSyntaxError(SchemaError):
    """The input is not well-formed JSON."""


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, bool):
        raise TypeError("bool is not a coordinate")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v.strip())
    raise TypeError(f"cannot read {v!r} as an exact rational")


def _point(p) -> Point:
    x, y = p
    return (_frac(x), _frac(y))


@dataclass(frozen=True)
class Diagram11:
    """A (1,1)-diagram.  ``labels`` optionally names the generators in beta order."""

    beta_vertices: tuple[Point, ...]
    holonomy: tuple[int, int]
    z: Point
    w: Point
    name: str = ""
    labels: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "beta_vertices", tuple(_point(p) for p in self.beta_vertices))
        object.__setattr__(self, "holonomy", (int(self.holonomy[0]), int(self.holonomy[1])))
        object.__setattr__(self, "z", _point(self.z))
        object.__setattr__(self, "w", _point(self.w))
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))

    def translated(self, dx: int, dy: int) -> "Diagram11":
        shift = lambda p: (p[0] + dx, p[1] + dy)
        return Diagram11(tuple(shift(p) for p in self.beta_vertices), self.holonomy,
                         shift(self.z), shift(self.w), self.name, self.labels)

    def reflected(self) -> "Diagram11":
        """Mirror in the vertical axis x -> -x (reverses every domain's orientation)."""
        flip = lambda p: (-p[0], p[1])
        return Diagram11(tuple(flip(p) for p in self.beta_vertices),
                         (-self.holonomy[0], self.holonomy[1]),
                         flip(self.z), flip(self.w), self.name, self.labels)

    @cached_property
    def lift(self) -> "Lift":
        return Lift(self)


@dataclass(frozen=True)
class Generator:
    label: str
    position: Point
    beta_index: int


# ---------------------------------------------------------------------------
# exact segment predicates on integer coordinates

def _orient(a, b, c) -> int:
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (v > 0) - (v < 0)


def _on_segment(a, b, p) -> bool:
    return (_orient(a, b, p) == 0
            and min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def _segments_meet(a, b, c, d) -> bool:
    o1, o2, o3, o4 = _orient(a, b, c), _orient(a, b, d), _orient(c, d, a), _orient(c, d, b)
    if o1 != o2 and o3 != o4 and 0 not in (o1, o2, o3, o4):
        return True
    return (_on_segment(a, b, c) or _on_segment(a, b, d)
            or _on_segment(c, d, a) or _on_segment(c, d, b))


def _meets_only_at(a, b, c, d, shared) -> bool:
    """True iff segments ab and cd intersect in exactly the point ``shared``."""
    if _orient(a, b, c) == 0 and _orient(a, b, d) == 0:
        # collinear: any overlap beyond a single point is fatal
        other = c if d == shared else d
        return not _on_segment(a, b, other) and not _on_segment(c, d, a if b == shared else b)
    return True


def winding_number(polygon: Sequence, p) -> int:
    """Winding number of a closed polygon around p (p must not lie on it)."""
    wn = 0
    n = len(polygon)
    for i in range(n):
        a, b = polygon[i], polygon[(i + 1) % n]
        if a[1] <= p[1]:
            if b[1] > p[1] and _orient(a, b, p) > 0:
                wn += 1
        elif b[1] <= p[1] and _orient(a, b, p) < 0:
            wn -= 1
    return wn


# ---------------------------------------------------------------------------
# validation

@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""
    witness: object = None


@dataclass
class ValidationReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    _errors = {"s3": NotS3, "transverse": NotTransverse,
               "embedded": NotEmbedded, "basepoints": BasepointOnCurve}

    def raise_for_failure(self):
        for c in self.checks:
            if not c.ok:
                raise self._errors[c.name](f"{c.name}: {c.detail}", c.witness)

    def __str__(self):
        return "\n".join(f"{'ok  ' if c.ok else 'FAIL'} {c.name}" + (f": {c.detail}" if c.detail else "")
                         for c in self.checks)


def _integer_data(d: Diagram11):
    den = 1
    for p in d.beta_vertices + (d.z, d.w):
        den = math.lcm(den, p[0].denominator, p[1].denominator)
    ip = lambda p: (int(p[0] * den), int(p[1] * den))
    return den, [ip(p) for p in d.beta_vertices], ip(d.z), ip(d.w)


def _embedding_witness(verts, hol, D):
    """Return a pair of offending segments, or None if the torus curve is embedded."""
    L = len(verts)
    pts = verts + [(verts[0][0] + hol[0], verts[0][1] + hol[1])]
    segs = [(pts[k], pts[k + 1]) for k in range(L)]
    for k, (a, b) in enumerate(segs):
        if a == b:
            return ("degenerate segment", k)
    boxes = [(min(a[0], b[0]), max(a[0], b[0]), min(a[1], b[1]), max(a[1], b[1])) for a, b in segs]
    for i in range(L):
        a, b = segs[i]
        bi = boxes[i]
        for j in range(i, L):
            bj = boxes[j]
            tx0 = -((bj[1] - bi[0]) // D)
            tx1 = (bi[1] - bj[0]) // D
            ty0 = -((bj[3] - bi[2]) // D)
            ty1 = (bi[3] - bj[2]) // D
            for tx in range(tx0, tx1 + 1):
                for ty in range(ty0, ty1 + 1):
                    if i == j and tx == 0 and ty == 0:
                        continue
                    c = (segs[j][0][0] + tx * D, segs[j][0][1] + ty * D)
                    e = (segs[j][1][0] + tx * D, segs[j][1][1] + ty * D)
                    if not _segments_meet(a, b, c, e):
                        continue
                    shared = None
                    t = (tx * D, ty * D)
                    if j == i + 1 and t == (0, 0):
                        shared = b
                    elif i == 0 and j == L - 1 and t == (-hol[0], -hol[1]):
                        shared = a
                    elif i == j == 0 and L == 1 and t in (hol, (-hol[0], -hol[1])):
                        shared = b if t == hol else a
                    if shared is not None and (c == shared or e == shared) and _meets_only_at(a, b, c, e, shared):
                        continue
                    return (i, j, (tx, ty))
    return None


def validate(d: Diagram11) -> ValidationReport:
    """Check every structural condition on a (1,1)-diagram; never raises."""
    rep = ValidationReport()
    h1, h2 = d.holonomy
    rep.checks.append(Check("s3", abs(h2) == 1 and len(d.beta_vertices) > 0,
                            "" if abs(h2) == 1 else f"holonomy {d.holonomy} meets alpha algebraically {h2} times",
                            d.holonomy))
    D, verts, z, w = _integer_data(d)
    bad = [k for k, v in enumerate(verts) if v[1] % D == 0]
    rep.checks.append(Check("transverse", not bad,
                            f"vertex {bad[0]} lies on a lift of alpha" if bad else "",
                            bad[0] if bad else None))
    if not d.beta_vertices:
        rep.checks.append(Check("embedded", False, "empty curve"))
        return rep
    hol = (h1 * D, h2 * D)
    wit = _embedding_witness(verts, hol, D) if abs(h2) >= 1 or h1 else ("null-homotopic",)
    if math.gcd(h1, h2) != 1 and wit is None:
        wit = ("holonomy is not primitive", d.holonomy)
    rep.checks.append(Check("embedded", wit is None,
                            "" if wit is None else f"segments {wit} intersect on the torus", wit))
    rep.checks.append(_basepoint_check(verts, hol, D, z, w))
    return rep


def _basepoint_check(verts, hol, D, z, w) -> Check:
    for name, p in (("z", z), ("w", w)):
        if p[1] % D == 0:
            return Check("basepoints", False, f"{name} lies on alpha", name)
    if (z[0] - w[0]) % D == 0 and (z[1] - w[1]) % D == 0:
        return Check("basepoints", False, "z and w lie in the same orbit", "zw")
    L = len(verts)
    pts = verts + [(verts[0][0] + hol[0], verts[0][1] + hol[1])]
    for k in range(L):
        a, b = pts[k], pts[k + 1]
        for name, p in (("z", z), ("w", w)):
            # translate p next to the segment, then test the nearby translates
            for tx in range((min(a[0], b[0]) - p[0]) // D, (max(a[0], b[0]) - p[0]) // D + 2):
                for ty in range((min(a[1], b[1]) - p[1]) // D, (max(a[1], b[1]) - p[1]) // D + 2):
                    q = (p[0] + tx * D, p[1] + ty * D)
                    if _on_segment(a, b, q):
                        return Check("basepoints", False, f"{name} lies on beta segment {k}", (name, k))
    return Check("basepoints", True)


def ensure_valid(d: Diagram11) -> Diagram11:
    validate(d).raise_for_failure()
    return d


# ---------------------------------------------------------------------------
# the lift: crossings, chords, beta order, alpha order

@dataclass
class Chord:
    """Arc of beta between consecutive crossings, in base-period integer coordinates."""

    index: int
    start: int            # crossing index in period order
    end: int              # crossing index (the wrap chord ends at crossing 0 + holonomy)
    x0: int
    level0: int
    x1: int
    level1: int
    up: bool              # leaves its start crossing upwards
    arrives_up: bool      # reaches its end crossing moving upwards
    path: list            # polyline from start crossing to end crossing


class Lift:
    """Integer model of a valid diagram: crossings, chords and the two orders."""

    def __init__(self, d: Diagram11):
        ensure_valid(d)
        self.diagram = d
        den, verts, z, w = _integer_data(d)
        h1, h2 = d.holonomy
        L = len(verts)
        pts = verts + [(verts[0][0] + h1 * den, verts[0][1] + h2 * den)]
        raw = []   # (segment, parameter, x, level, up)
        for k in range(L):
            (xa, ya), (xb, yb) = pts[k], pts[k + 1]
            lo, hi = sorted((ya, yb))
            levels = range(-(-lo // den), hi // den + 1)
            hits = []
            for c in levels:
                t = Fraction(c * den - ya, yb - ya)
                hits.append((t, xa + t * (xb - xa), c, yb > ya))
            hits.sort()
            raw.extend((k, t, x, c, up) for t, x, c, up in hits)
        extra = 1
        for _, _, x, _, _ in raw:
            extra = math.lcm(extra, x.denominator)
        extra *= 2  # keeps a spare half-step between neighbouring crossings
        D = den * extra
        self.scale = D
        self.holonomy = (h1, h2)
        self.hol = (h1 * D, h2 * D)
        self.vertices = [(x * extra, y * extra) for x, y in verts]
        self.z = (z[0] * extra, z[1] * extra)
        self.w = (w[0] * extra, w[1] * extra)
        self.crossings = [(k, int(x * extra), c, up) for k, t, x, c, up in raw]
        N = len(self.crossings)
        self.n = N
        if N == 0:
            raise NotS3("beta misses alpha")

        pts = self.vertices + [(self.vertices[0][0] + self.hol[0], self.vertices[0][1] + self.hol[1])]
        self.chords: list[Chord] = []
        for j in range(N):
            k0, x0, c0, up0 = self.crossings[j]
            if j + 1 < N:
                k1, x1, c1, up1 = self.crossings[j + 1]
                shift = (0, 0)
            else:
                k1, x1, c1, up1 = self.crossings[0]
                k1 += L
                x1 += self.hol[0]
                c1 += h2
                shift = self.hol
            path = [(x0, c0 * D)]
            for v in range(k0 + 1, k1 + 1):
                if v < L:
                    path.append(self.vertices[v])
                else:
                    vv = self.vertices[v - L]
                    path.append((vv[0] + self.hol[0], vv[1] + self.hol[1]))
            path.append((x1, c1 * D))
            self.chords.append(Chord(j, j, (j + 1) % N, x0, c0, x1, c1, up0, up1, path))

        # position of each crossing on the alpha lift y = 0 of the same beta lift
        self.alpha_x = [x - c * h2 * self.hol[0] for _, x, c, _ in self.crossings]
        self.param = [(-c * h2) * N + j for j, (_, _, c, _) in enumerate(self.crossings)]
        order = sorted(range(N), key=lambda j: self.param[j], reverse=(h2 > 0))
        self.beta_order = order                       # generator index -> crossing
        self.gen_of = {j: g for g, j in enumerate(order)}
        self.alpha_order = sorted(range(N), key=lambda j: self.alpha_x[j] % D)
        self.alpha_pos = {j: p for p, j in enumerate(self.alpha_order)}

    def generators(self) -> list[Generator]:
        d = self.diagram
        labels = d.labels
        if labels is not None and len(labels) != self.n:
            raise DiagramError(f"{len(labels)} labels for {self.n} generators")
        out = []
        for g, j in enumerate(self.beta_order):
            pos = (Fraction(self.alpha_x[j], self.scale), Fraction(0))
            out.append(Generator(labels[g] if labels else f"x{g}", pos, g))
        return out


def intersections(d: Diagram11) -> list[Generator]:
    """Generators alpha-lift-cap-beta-lift, sorted along beta from its upper end."""
    return d.lift.generators()


# ---------------------------------------------------------------------------
# JSON

def _fmt(q: Fraction):
    q = Fraction(q)
    return q.numerator if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def diagram_to_dict(d: Diagram11) -> dict:
    out = {
        "beta": [[_fmt(x), _fmt(y)] for x, y in d.beta_vertices],
        "holonomy": list(d.holonomy),
        "z": [_fmt(d.z[0]), _fmt(d.z[1])],
        "w": [_fmt(d.w[0]), _fmt(d.w[1])],
    }
    if d.name:
        out["name"] = d.name
    if d.labels is not None:
        out["labels"] = list(d.labels)
    return out


def serialize_diagram(d: Diagram11) -> str:
    return json.dumps(diagram_to_dict(d), sort_keys=True, indent=1) + "\n"


_RATIONAL = re.compile(r"^\s*-?\d+\s*(/\s*\d+\s*)?$")


def parse_diagram(text: str) -> Diagram11:
    """Parse the JSON diagram format; raises DiagramSyntaxError or SchemaError."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        offset = len(text[:exc.pos].encode())
        raise DiagramSyntaxError(f"invalid JSON: {exc.msg}", offset) from exc

    def where(key):
        m = re.search(r'"%s"' % re.escape(key), text)
        return len(text[:m.start()].encode()) if m else 0

    def coord(v, key):
        if isinstance(v, bool) or not isinstance(v, (int, str)):
            raise SchemaError(f"{key}: coordinate {v!r} is not an integer or 'p/q' string", where(key))
        if isinstance(v, str):
            if not _RATIONAL.match(v):
                raise SchemaError(f"{key}: bad rational {v!r}", where(key))
            if re.search(r"/\s*0+\s*$", v):
                raise SchemaError(f"{key}: zero denominator", where(key))
        try:
            return _frac(v)
        except ZeroDivisionError:
            raise SchemaError(f"{key}: zero denominator", where(key)) from None

    def point(v, key):
        if not isinstance(v, list) or len(v) != 2:
            raise SchemaError(f"{key}: expected [x, y]", where(key))
        return (coord(v[0], key), coord(v[1], key))

    if not isinstance(obj, dict):
        raise SchemaError("top level must be an object", 0)
    for key in ("beta", "holonomy", "z", "w"):
        if key not in obj:
            raise SchemaError(f"missing field {key!r}", 0)
    unknown = set(obj) - {"beta", "holonomy", "z", "w", "name", "labels"}
    if unknown:
        raise SchemaError(f"unknown fields {sorted(unknown)}", where(sorted(unknown)[0]))
    if not isinstance(obj["beta"], list) or not obj["beta"]:
        raise SchemaError("beta: expected a non-empty list of points", where("beta"))
    beta = tuple(point(p, "beta") for p in obj["beta"])
    hol = obj["holonomy"]
    if (not isinstance(hol, list) or len(hol) != 2
            or not all(isinstance(h, int) and not isinstance(h, bool) for h in hol)):
        raise SchemaError("holonomy: expected [h1, h2] integers", where("holonomy"))
    name = obj.get("name", "")
    if not isinstance(name, str):
        raise SchemaError("name: expected a string", where("name"))
    labels = obj.get("labels")
    if labels is not None and (not isinstance(labels, list) or not all(isinstance(s, str) for s in labels)):
        raise SchemaError("labels: expected a list of strings", where("labels"))
    return Diagram11(beta, tuple(hol), point(obj["z"], "z"), point(obj["w"], "w"), name,
                     tuple(labels) if labels is not None else None)


def load_diagram(path) -> Diagram11:
    with open(path, encoding="utf-8") as fh:
        return parse_diagram(fh.read())
