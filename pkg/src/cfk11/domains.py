"""
Domains (2-chains) of a (1,1)-diagram, upstairs in the plane and downstairs
on the torus.

Cutting the torus along alpha leaves an annulus in which every arc of beta is
a chord.  Walking around the boundary of each complementary region gives the
cell structure; lifting the walk gives each region's polygon and the lattice
offsets needed to name its lifts in the plane.

A plane domain is the winding-number chain of a loop made of a beta arc and
an alpha segment.  Its value on a lifted region is read off a horizontal ray
run just above or just below the lift of alpha the region touches, so only
the endpoints of the loop's chords matter; no window of the plane ever has to
be rasterised.
"""
from __future__ import annotations

import bisect
from collections import defaultdict, deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .diagram import Diagram11, Generator, NotEmbedded, winding_number

UP, LOW = 0, 1          # region above / below a lift of alpha


class WindowTooSmall(RuntimeError):
    pass


class NotSameAlphaLine(ValueError):
    pass


@dataclass
class Face:
    id: int
    corners: int
    polygon: list                      # integer coordinates, reference lift
    sides: list                        # alpha edge-sides on the boundary: (edge, side)
    chords: list                       # (chord, +1 along beta | -1 against)
    anchor: tuple                      # (edge, side, x of the edge's left end in [0, D))
    has_z: bool = False
    has_w: bool = False


class CellComplex:
    """Cell structure of alpha + beta on the torus.

    Vertices are generators (indexed in beta order).  Alpha edge ``p`` runs
    from the p-th to the (p+1)-th crossing along alpha in the +x direction;
    beta edge ``j`` is the chord from crossing j to crossing j+1 along beta.
    """

    def __init__(self, d: Diagram11):
        lift = d.lift
        self.diagram = d
        self.lift = lift
        self.generators: list[Generator] = lift.generators()
        N = self.n = lift.n
        D = self.scale = lift.scale
        self.gen_crossing = list(lift.beta_order)            # generator -> crossing
        self.crossing_gen = [0] * N
        for g, j in enumerate(self.gen_crossing):
            self.crossing_gen[j] = g
        order = lift.alpha_order
        self.alpha_start = [self.crossing_gen[order[p]] for p in range(N)]
        self.alpha_pos = [0] * N                                # generator -> alpha edge leaving it
        for p, g in enumerate(self.alpha_start):
            self.alpha_pos[g] = p
        self.alpha_left = [lift.alpha_x[order[p]] % D for p in range(N)]
        self.alpha_len = []
        for p in range(N):
            nxt = lift.alpha_x[order[(p + 1) % N]] % D
            self.alpha_len.append((nxt - self.alpha_left[p]) % D or D)

        # which chord end sits above / below each crossing
        self.up_end = [None] * N
        self.down_end = [None] * N
        for ch in lift.chords:
            (self.up_end if ch.up else self.down_end)[ch.start] = (ch.index, 0)
            (self.down_end if ch.arrives_up else self.up_end)[ch.end] = (ch.index, 1)
        self._walk_faces()
        self._locate_basepoints()
        self._incidence()

    # -- faces --------------------------------------------------------------
    def _walk_faces(self):
        lift, N, D = self.lift, self.n, self.scale
        chords = lift.chords
        seen = {}
        faces = []
        self.side_face = {}          # (edge, side) -> (face, dx cells, dlevel)
        self.chord_left = [None] * N
        self.chord_right = [None] * N
        for p0 in range(N):
            for s0 in (UP, LOW):
                if (p0, s0) in seen:
                    continue
                fid = len(faces)
                # state: at crossing (alpha edge index p / side), with lifted x and level
                if s0 == UP:
                    cr = lift.alpha_order[p0]
                    x, lev = self.alpha_left[p0], 0
                else:
                    cr = lift.alpha_order[(p0 + 1) % N]
                    x, lev = self.alpha_left[p0] + self.alpha_len[p0], 0
                side = s0
                start = (cr, side, x, lev)
                poly, sides, used = [], [], []
                while True:
                    p = lift.alpha_pos[cr]
                    if side == UP:
                        e, left_x = p, x
                        poly.append((x, lev * D))
                        x += self.alpha_len[e]
                        cr = lift.alpha_order[(e + 1) % N]
                        end = self.up_end[cr]
                    else:
                        e = (p - 1) % N
                        poly.append((x, lev * D))
                        x -= self.alpha_len[e]
                        left_x = x
                        cr = lift.alpha_order[e]
                        end = self.down_end[cr]
                    key = (e, side)
                    if key in seen:
                        raise NotEmbedded("boundary walk revisits an alpha edge", key)
                    seen[key] = fid
                    sides.append((e, side, left_x, lev))
                    poly.append((x, lev * D))
                    ch = chords[end[0]]
                    if end[1] == 0:          # along beta
                        dx, dl = ch.x1 - ch.x0, ch.level1 - ch.level0
                        path = ch.path
                        cr = ch.end
                        side = LOW if ch.arrives_up else UP
                        used.append((ch.index, 1))
                        self.chord_left[ch.index] = fid
                    else:
                        dx, dl = ch.x0 - ch.x1, ch.level0 - ch.level1
                        path = ch.path[::-1]
                        cr = ch.start
                        side = UP if ch.up else LOW
                        used.append((ch.index, -1))
                        self.chord_right[ch.index] = fid
                    ox, oy = x - path[0][0], lev * D - path[0][1]
                    poly.extend((px + ox, py + oy) for px, py in path[1:-1])
                    x += dx
                    lev += dl
                    if (cr, side) == start[:2]:
                        if (x, lev) != start[2:]:
                            raise NotEmbedded("complementary region is not a disk", fid)
                        break
                e0, _, ax, _ = sides[0]
                face = Face(fid, 2 * len(used), poly, [(e, s) for e, s, _, _ in sides], used,
                            (e0, s0, ax))
                for e, s, lx, lv in sides:
                    da, r = divmod(lx - self.alpha_left[e], D)
                    assert r == 0
                    self.side_face[(e, s)] = (fid, da, lv)
                faces.append(face)
        self.faces = faces
        area2 = 0
        for f in faces:
            a = _area2(f.polygon)
            if a <= 0:
                raise NotEmbedded("complementary region has non-positive area", f.id)
            area2 += a
        if area2 != 2 * D * D:
            raise NotEmbedded("regions do not tile the torus", area2)

    def _locate_basepoints(self):
        D = self.scale
        self.z_ref = self.w_ref = None
        for name, pt in (("z", self.lift.z), ("w", self.lift.w)):
            hits = []
            for f in self.faces:
                xs = [q[0] for q in f.polygon]
                ys = [q[1] for q in f.polygon]
                for a in range((min(xs) - pt[0]) // D, (max(xs) - pt[0]) // D + 1):
                    for b in range((min(ys) - pt[1]) // D, (max(ys) - pt[1]) // D + 1):
                        q = (pt[0] + a * D, pt[1] + b * D)
                        if winding_number(f.polygon, q):
                            hits.append((f.id, q))
            if len(hits) != 1:
                raise NotEmbedded(f"{name} found in {len(hits)} region lifts", hits)
            fid, q = hits[0]
            setattr(self.faces[fid], "has_" + name, True)
            setattr(self, name + "_face", fid)
            setattr(self, name + "_ref", q)

    def _incidence(self):
        """Oriented edge/face and edge/vertex incidences (left minus right)."""
        N = self.n
        self.alpha_lr = []
        for p in range(N):
            self.alpha_lr.append((self.side_face[(p, UP)][0], self.side_face[(p, LOW)][0]))
        self.beta_lr = list(zip(self.chord_left, self.chord_right))
        # quadrants at each generator: above-left, above-right, below-left, below-right
        self.quadrants = []
        for g in range(N):
            p = self.alpha_pos[g]
            q = (p - 1) % N
            self.quadrants.append((self.alpha_lr[q][0], self.alpha_lr[p][0],
                                   self.alpha_lr[q][1], self.alpha_lr[p][1]))
        # dual spanning tree rooted at the z-face, used by the linear solver
        adj = defaultdict(list)
        for kind, lr in (("a", self.alpha_lr), ("b", self.beta_lr)):
            for e, (l, r) in enumerate(lr):
                adj[l].append((r, kind, e, -1))   # D(r) = D(l) - m(e)
                adj[r].append((l, kind, e, +1))   # D(l) = D(r) + m(e)
        self._tree = []
        seen = {self.z_face}
        dq = deque([self.z_face])
        while dq:
            f = dq.popleft()
            for g, kind, e, sgn in adj[f]:
                if g not in seen:
                    seen.add(g)
                    self._tree.append((g, f, kind, e, sgn))
                    dq.append(g)
        if len(seen) != len(self.faces):
            raise NotEmbedded("dual graph is disconnected")

    # -- convenience --------------------------------------------------------
    @property
    def V(self):
        return self.n

    @property
    def E(self):
        return 2 * self.n

    @property
    def F(self):
        return len(self.faces)

    def boundary2(self):
        """Integer matrix of the boundary map from faces to edges (alpha edges first)."""
        rows = []
        for l, r in self.alpha_lr + self.beta_lr:
            row = [0] * self.F
            row[l] += 1
            row[r] -= 1
            rows.append(row)
        return rows

    def boundary1(self):
        """Integer matrix of the boundary map from edges to vertices."""
        rows = [[0] * self.E for _ in range(self.n)]
        for p in range(self.n):
            a = self.alpha_start[p]
            b = self.alpha_start[(p + 1) % self.n]
            rows[b][p] += 1
            rows[a][p] -= 1
        for ch in self.lift.chords:
            a, b = self.crossing_gen[ch.start], self.crossing_gen[ch.end]
            rows[b][self.n + ch.index] += 1
            rows[a][self.n + ch.index] -= 1
        return rows

    def index(self, label: str) -> int:
        for g in self.generators:
            if g.label == label:
                return g.beta_index
        raise KeyError(label)


def _area2(poly) -> int:
    return sum(poly[i][0] * poly[(i + 1) % len(poly)][1] - poly[(i + 1) % len(poly)][0] * poly[i][1]
               for i in range(len(poly)))


def build_arrangement(d: Diagram11) -> CellComplex:
    return CellComplex(d)


# ---------------------------------------------------------------------------
# domains

@dataclass(frozen=True)
class DomainChain:
    """Integer 2-chain.  Plane keys are (face, dx, dy) lifts; torus keys are face ids."""

    support: tuple                     # sorted ((key, coefficient), ...), zeros dropped
    corners: tuple                     # (x, y) generator indices
    ambient: str                       # "plane" | "torus"
    complex: CellComplex = field(repr=False, compare=False, hash=False)
    window: Optional[tuple] = None     # (x0, x1, y0, y1) in cells, plane only
    clipped: bool = False

    def as_dict(self) -> dict:
        return dict(self.support)

    def __getitem__(self, key) -> int:
        return self.as_dict().get(key, 0)

    def torus(self) -> "DomainChain":
        if self.ambient == "torus":
            return self
        acc = defaultdict(int)
        for (f, _, _), c in self.support:
            acc[f] += c
        return _chain(acc, self.corners, "torus", self.complex)

    def coefficients(self) -> list[int]:
        """Torus coefficient of every face, in face order."""
        t = self.torus().as_dict()
        return [t.get(f.id, 0) for f in self.complex.faces]

    def __neg__(self):
        return DomainChain(tuple((k, -c) for k, c in self.support), self.corners[::-1],
                           self.ambient, self.complex, self.window, self.clipped)

    def __add__(self, other: "DomainChain") -> "DomainChain":
        if self.ambient != other.ambient:
            return self.torus() + other.torus()
        acc = defaultdict(int)
        for k, c in self.support + other.support:
            acc[k] += c
        return _chain(acc, (self.corners[0], other.corners[1]), self.ambient, self.complex,
                      clipped=self.clipped or other.clipped)

    def is_positive(self) -> bool:
        return all(c >= 0 for _, c in self.support)

    def to_json(self) -> dict:
        cc = self.complex
        name = lambda g: cc.generators[g].label
        if self.ambient == "torus":
            sup = {str(k): c for k, c in self.support}
        else:
            sup = {f"{f}@{a},{b}": c for (f, a, b), c in self.support}
        return {"from": name(self.corners[0]), "to": name(self.corners[1]),
                "ambient": self.ambient, "support": sup}


def _chain(acc, corners, ambient, cc, window=None, clipped=False) -> DomainChain:
    sup = tuple(sorted((k, c) for k, c in acc.items() if c))
    return DomainChain(sup, tuple(corners), ambient, cc, window, clipped)


def periodic_domain(cc: CellComplex, x: int = 0) -> DomainChain:
    """The fundamental class of the torus, viewed as a domain from x to x."""
    return _chain({f.id: 1 for f in cc.faces}, (x, x), "torus", cc)


class _Loop:
    """Boundary of the plane domain from lift x~ to lift y~ on alpha~ (y = 0).

    The loop runs along alpha~ from x~ to y~ and back along beta~; its chord
    ends, grouped by (line, side), carry the crossing signs of the horizontal
    rays just above / below each lift of alpha.
    """

    def __init__(self, cc: CellComplex, x: int, y: int):
        lift = cc.lift
        N, D = cc.n, cc.scale
        self.cc = cc
        cx, cy = cc.gen_crossing[x], cc.gen_crossing[y]
        self.xx, self.xy = lift.alpha_x[cx], lift.alpha_x[cy]
        lx, ly = lift.param[cx], lift.param[cy]
        if ly < lx:
            span, sigma = range(ly, lx), 1
        else:
            span, sigma = range(lx, ly), -1
        hx, hy = lift.hol
        h2 = lift.holonomy[1]
        events = defaultdict(list)      # (line, side) -> [(x, sign)]
        self.chords = []
        for lam in span:
            m, j = divmod(lam, N)
            ch = lift.chords[j]
            self.chords.append((j, m, sigma))
            x0, l0 = ch.x0 + m * hx, ch.level0 + m * h2
            x1, l1 = ch.x1 + m * hx, ch.level1 + m * h2
            s0 = 1 if ch.up else -1
            events[(l0, UP if ch.up else LOW)].append((x0, sigma * s0))
            s1 = 1 if ch.arrives_up else -1
            events[(l1, LOW if ch.arrives_up else UP)].append((x1, sigma * s1))
        for v in events.values():
            v.sort()
        self.events = events

    def positive(self) -> bool:
        for ev in self.events.values():
            acc = 0
            for _, s in reversed(ev):
                acc += s
                if acc < 0:
                    return False
        return True

    def torus_coefficients(self) -> list[int]:
        """Projection of the plane domain: sum over all lifts of each region."""
        cc, D = self.cc, self.cc.scale
        per_side = {UP: [0, [], []], LOW: [0, [], []]}
        for (_, side), ev in self.events.items():
            bucket = per_side[side]
            for e, s in ev:
                q, r = divmod(e, D)
                bucket[0] += s * q
                bucket[1].append((r, s))
        tables = {}
        for side, (const, res, _) in per_side.items():
            res.sort()
            keys = [r for r, _ in res]
            suffix = [0] * (len(res) + 1)
            for i in range(len(res) - 1, -1, -1):
                suffix[i] = suffix[i + 1] + res[i][1]
            tables[side] = (const, keys, suffix)
        out = []
        for f in cc.faces:
            _, side, ax = f.anchor
            const, keys, suffix = tables[side]
            out.append(const + suffix[bisect.bisect_right(keys, ax)])
        return out

    def plane_support(self, window):
        """Nonzero lifted regions inside ``window``; second value flags clipping."""
        cc, D, N = self.cc, self.cc.scale, self.cc.n
        x0, x1, y0, y1 = window
        acc = {}
        clipped = False
        for (line, side), ev in self.events.items():
            w = 0
            # walk right to left; the gap left of ev[k] has value sum(ev[k:])
            for k in range(len(ev) - 1, 0, -1):
                w += ev[k][1]
                if w == 0:
                    continue
                lo, hi = ev[k - 1][0], ev[k][0]
                for p in range(N):
                    left = cc.alpha_left[p]
                    for a in range(-((left - lo) // D), (hi - 1 - left) // D + 1):
                        fid, da, dl = cc.side_face[(p, side)]
                        key = (fid, a - da, line - dl)
                        if not (x0 <= key[1] <= x1 and y0 <= key[2] <= y1):
                            clipped = True
                            continue
                        prev = acc.setdefault(key, w)
                        assert prev == w, "inconsistent winding number"
        return acc, clipped


def default_window(cc: CellComplex, x: int, y: int, scale_factor: int = 1):
    D = cc.scale
    lift = cc.lift
    xs = (lift.alpha_x[cc.gen_crossing[x]], lift.alpha_x[cc.gen_crossing[y]])
    k = max(4, 2 * cc.n) * scale_factor
    return (min(xs) // D - k, -(-max(xs) // D) + k, -k, k)


def winding_domain(x_lift, y_lift, d_or_cc, window=None, max_window: int = 1 << 10) -> DomainChain:
    """Plane domain from x~ to y~, both lifts on alpha~ and on the chosen beta~.

    ``x_lift``/``y_lift`` are generator indices (or labels), standing for their
    unique lifts on alpha~ cap beta~, or ``(generator, (a, b))`` for the lift
    translated by the lattice vector (a, b) with b = 0.  Without an explicit
    ``window`` the default window is doubled until nothing is clipped.
    """
    cc = d_or_cc if isinstance(d_or_cc, CellComplex) else build_arrangement(d_or_cc)
    x, tx = _lift_arg(cc, x_lift)
    y, ty = _lift_arg(cc, y_lift)
    if tx[1] != 0 or ty[1] != 0 or tx != ty:
        raise NotSameAlphaLine(f"lifts {x_lift} and {y_lift} are not on one lift of alpha and beta")
    loop = _Loop(cc, x, y)
    if window is not None:
        acc, clipped = loop.plane_support(window)
        return _chain(acc, (x, y), "plane", cc, window, clipped)
    factor = 1
    while True:
        win = default_window(cc, x, y, factor)
        acc, clipped = loop.plane_support(win)
        if not clipped:
            return _chain(acc, (x, y), "plane", cc, win, False)
        if (win[1] - win[0]) > max_window:
            raise WindowTooSmall(f"support of the domain {x}->{y} exceeds {max_window} cells")
        factor *= 2


def _lift_arg(cc, v):
    if isinstance(v, tuple):
        g, t = v
    else:
        g, t = v, (0, 0)
    if isinstance(g, str):
        g = cc.index(g)
    return g, tuple(t)


def basepoint_multiplicities(D: DomainChain) -> tuple[int, int]:
    """(n_z, n_w): the chain's coefficients summed over the lattice orbits of z and w."""
    if D.ambient == "plane" and D.clipped:
        raise WindowTooSmall("domain support touches the window boundary")
    t = D.torus().as_dict()
    cc = D.complex
    return t.get(cc.z_face, 0), t.get(cc.w_face, 0)


def _maslov_from(cc: CellComplex, coeffs, x: int, y: int) -> int:
    four = 0
    for f, c in zip(cc.faces, coeffs):
        four += c * (4 - f.corners)
    for g in (x, y):
        four += sum(coeffs[f] for f in cc.quadrants[g])
    if four % 4:
        raise ArithmeticError(f"non-integral Maslov index {Fraction(four, 4)}")
    return four // 4


def maslov_index(D: DomainChain) -> int:
    """Euler measure plus the two corner point measures."""
    x, y = D.corners
    return _maslov_from(D.complex, D.coefficients(), x, y)


def connecting_domain(x, y, cc: CellComplex) -> DomainChain:
    """Some torus domain from x to y, normalised to vanish on the z region.

    Its boundary is the alpha arc from x to y (in the +x direction) plus the
    beta arc from y to x (along beta), corrected by whole copies of alpha and
    beta so that it bounds.  Solved exactly by propagation over a spanning tree
    of the dual graph.
    """
    if isinstance(x, str):
        x = cc.index(x)
    if isinstance(y, str):
        y = cc.index(y)
    if x == y:
        return _chain({}, (x, y), "torus", cc)
    mult_a, mult_b = _boundary_multiplicities(cc, x, y)
    coeffs = _solve(cc, mult_a, mult_b)
    return _chain(dict(enumerate(coeffs)), (x, y), "torus", cc)


def _boundary_multiplicities(cc, x, y):
    lift, N, D = cc.lift, cc.n, cc.scale
    h1, h2 = lift.holonomy
    mult_a = [0] * N
    mult_b = [0] * N
    p = cc.alpha_pos[x]
    while cc.alpha_start[p] != y:
        mult_a[p] += 1
        p = (p + 1) % N
    cx, cy = cc.gen_crossing[x], cc.gen_crossing[y]
    # lifted endpoint displacement of the loop, in cells
    px = lift.chords[cx]
    py = lift.chords[cy]
    start = (px.x0, px.level0 * D)
    delta = (lift.alpha_x[cy] - lift.alpha_x[cx]) % D
    at_y = (start[0] + delta, start[1])
    j = cy
    shift = (at_y[0] - py.x0, at_y[1] - py.level0 * D)
    while j != cx:
        mult_b[j] += 1
        j = (j + 1) % N
    end = (px.x0 + shift[0], px.level0 * D + shift[1])
    if cx <= cy:
        end = (end[0] + lift.hol[0], end[1] + lift.hol[1])
    dx, dy = end[0] - start[0], end[1] - start[1]
    assert dx % D == 0 and dy % D == 0
    dx //= D
    dy //= D
    q = dy * h2
    pa = dx - q * h1
    mult_a = [m - pa for m in mult_a]
    mult_b = [m - q for m in mult_b]
    return mult_a, mult_b


def _solve(cc, mult_a, mult_b):
    coeffs = [0] * cc.F
    for g, f, kind, e, sgn in cc._tree:
        m = mult_a[e] if kind == "a" else mult_b[e]
        coeffs[g] = coeffs[f] + sgn * m
    for lr, mult in ((cc.alpha_lr, mult_a), (cc.beta_lr, mult_b)):
        for e, (l, r) in enumerate(lr):
            if coeffs[l] - coeffs[r] != mult[e]:
                raise ArithmeticError("boundary is not null-homologous")
    return coeffs


def relative_gradings(cc: CellComplex, x: int, y: int) -> tuple[int, int]:
    """(A(x) - A(y), M(x) - M(y)) from a connecting domain."""
    dom = connecting_domain(x, y, cc)
    nz, nw = basepoint_multiplicities(dom)
    return nz - nw, maslov_index(dom) - 2 * nw


def disk_data(cc: CellComplex, x: int, y: int):
    """(n_z, n_w, mu) of the plane domain x~ -> y~ if it is positive, else None."""
    loop = _Loop(cc, x, y)
    if not loop.chords or not loop.positive():
        return None
    coeffs = loop.torus_coefficients()
    return coeffs[cc.z_face], coeffs[cc.w_face], _maslov_from(cc, coeffs, x, y)


def plane_pair_data(cc: CellComplex, x: int, y: int):
    """(n_z, n_w, mu, positive) of the plane domain x~ -> y~."""
    loop = _Loop(cc, x, y)
    coeffs = loop.torus_coefficients()
    return (coeffs[cc.z_face], coeffs[cc.w_face], _maslov_from(cc, coeffs, x, y),
            bool(loop.chords) and loop.positive())
