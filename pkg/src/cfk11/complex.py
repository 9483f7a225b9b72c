"""
The knot Floer complex CFK^infty of a (1,1) diagram, kept as a finite list of
generators over F2[U, U^-1] together with arrows x -> y carrying the
basepoint multiplicities (n_z, n_w) of the disk.

Conventions.  An arrow x -> y with multiplicities (n_z, n_w) satisfies

    A(x) - A(y) = n_z - n_w,    M(x) - M(y) = 1 - 2 n_w,

and [x, i, j] maps to [y, i - n_w, j - n_z].
"""
from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional

from .diagram import Diagram11, ensure_valid
from .domains import (CellComplex, WindowTooSmall, _Loop, build_arrangement,
                      connecting_domain, basepoint_multiplicities, maslov_index,
                      _maslov_from)


class StabilizationFailure(RuntimeError):
    pass


class AsymmetricGradings(RuntimeError):
    pass


class AmbiguousShift(RuntimeError):
    pass


class NotS3Homology(RuntimeError):
    pass


class GradingMismatch(RuntimeError):
    pass


@dataclass(frozen=True, order=True)
class Arrow:
    source: str
    target: str
    n_z: int
    n_w: int

    @property
    def kind(self) -> str:
        if self.n_z and self.n_w:
            return "diagonal"
        if self.n_z:
            return "z"
        if self.n_w:
            return "w"
        return "plain"


@dataclass(frozen=True)
class CFKComplex:
    labels: tuple                       # generator names
    A: tuple                            # Alexander grading per generator
    M: tuple                            # Maslov grading per generator
    arrows: tuple                       # sorted tuple of Arrow
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("duplicate generator labels")

    @property
    def size(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def grading(self, label: str) -> tuple[int, int]:
        i = self.index(label)
        return self.A[i], self.M[i]

    def gradings(self) -> dict[str, tuple[int, int]]:
        return {lab: (a, m) for lab, a, m in zip(self.labels, self.A, self.M)}

    def out_arrows(self) -> dict[str, list[Arrow]]:
        out = defaultdict(list)
        for ar in self.arrows:
            out[ar.source].append(ar)
        return out

    def arrow_set(self) -> set[tuple]:
        return {(a.source, a.target, a.n_z, a.n_w) for a in self.arrows}

    def check_gradings(self) -> None:
        g = self.gradings()
        for ar in self.arrows:
            (a0, m0), (a1, m1) = g[ar.source], g[ar.target]
            if a0 - a1 != ar.n_z - ar.n_w or m0 - m1 != 1 - 2 * ar.n_w:
                raise GradingMismatch(f"arrow {ar} violates the grading rule")

    def to_json(self) -> dict:
        return {
            "generators": [{"label": l, "A": a, "M": m}
                           for l, a, m in zip(self.labels, self.A, self.M)],
            "arrows": [{"from": a.source, "to": a.target, "n_z": a.n_z, "n_w": a.n_w}
                       for a in self.arrows],
            "meta": self.meta,
        }

    @classmethod
    def from_json(cls, data: dict) -> "CFKComplex":
        gens = data["generators"]
        arrows = [Arrow(a["from"], a["to"], a["n_z"], a["n_w"]) for a in data["arrows"]]
        return make_complex([g["label"] for g in gens], [g["A"] for g in gens],
                            [g["M"] for g in gens], arrows, data.get("meta", {}))

    def to_dot(self) -> str:
        lines = ["digraph CFK {", "  rankdir=TB;"]
        for l, a, m in zip(self.labels, self.A, self.M):
            lines.append(f'  "{l}" [label="{l}\\nA={a} M={m}"];')
        for ar in self.arrows:
            lines.append(f'  "{ar.source}" -> "{ar.target}" [label="{ar.n_z},{ar.n_w}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_tikz(self) -> str:
        """Generators placed at (i, j) = (0, A) with a small horizontal spread per grading."""
        seen = defaultdict(int)
        pos = {}
        for l, a in zip(self.labels, self.A):
            pos[l] = (0.6 * seen[a], a)
            seen[a] += 1
        out = ["\\begin{tikzpicture}[scale=0.8]"]
        for l, (x, y) in pos.items():
            out.append(f"  \\node (n{abs(hash(l))}) at ({x:.1f},{y}) {{${l}$}};")
        for ar in self.arrows:
            style = {"z": "", "w": "dashed", "diagonal": "dotted", "plain": "thick"}[ar.kind]
            out.append(f"  \\draw[->,{style}] (n{abs(hash(ar.source))}) -- "
                       f"(n{abs(hash(ar.target))}) node[midway,fill=white,font=\\tiny]"
                       f" {{{ar.n_z},{ar.n_w}}};")
        out.append("\\end{tikzpicture}")
        return "\n".join(out) + "\n"


def make_complex(labels, A, M, arrows: Iterable[Arrow], meta=None) -> CFKComplex:
    # arrows are counted mod 2
    parity = defaultdict(int)
    for ar in arrows:
        parity[ar] ^= 1
    kept = tuple(sorted(ar for ar, p in parity.items() if p))
    return CFKComplex(tuple(labels), tuple(A), tuple(M), kept, dict(meta or {}))


# ---------------------------------------------------------------------------
# disks

def _windowed_counts(cc: CellComplex, loop: _Loop, x: int, y: int, window, max_window):
    """(n_z, n_w, mu, window, passes) from the plane support, enlarging the window if needed.

    ``window`` is a half-width in lattice cells; None starts from the default
    and doubles.
    """
    factor = 1
    k0 = window if window is not None else max(4, 2 * cc.n)
    while True:
        win = _window(cc, x, y, k0 * factor)
        acc, clipped = loop.plane_support(win)
        if not clipped:
            break
        if window is not None:
            raise WindowTooSmall(f"domain {cc.generators[x].label} -> {cc.generators[y].label}"
                                 f" leaves the window {win}")
        if k0 * factor >= max_window:
            raise StabilizationFailure(
                f"domain {cc.generators[x].label} -> {cc.generators[y].label} "
                f"still clipped at window half-width {k0 * factor}")
        factor *= 2
    coeffs = [0] * cc.F
    for (f, _, _), c in acc.items():
        coeffs[f] += c
    passes = factor.bit_length()
    return coeffs[cc.z_face], coeffs[cc.w_face], _maslov_from(cc, coeffs, x, y), win, passes


def _window(cc: CellComplex, x: int, y: int, k: int):
    D = cc.scale
    xs = (cc.lift.alpha_x[cc.gen_crossing[x]], cc.lift.alpha_x[cc.gen_crossing[y]])
    return (min(xs) // D - k, -(-max(xs) // D) + k, -k, k)


def enumerate_disks(d: Diagram11 | CellComplex, window=None,
                    max_window: int = 1 << 12) -> tuple[list[Arrow], dict]:
    """Index-one positive domains between lifts on alpha~ and beta~.

    Each candidate pair is first screened by the exact positivity test on its
    boundary loop.  Survivors have their plane support evaluated inside a
    window of lattice cells, which is doubled until no region is clipped.
    The counts are cross-checked against the exact torus projection.
    """
    cc = d if isinstance(d, CellComplex) else build_arrangement(d)
    labels = [g.label for g in cc.generators]
    arrows = []
    widest, passes = 0, 1
    for x in range(cc.n):
        for y in range(cc.n):
            if x == y:
                continue
            loop = _Loop(cc, x, y)
            if not loop.chords or not loop.positive():
                continue
            exact = loop.torus_coefficients()
            mu = _maslov_from(cc, exact, x, y)
            if mu != 1:
                continue
            nz, nw, mu_w, win, p = _windowed_counts(cc, loop, x, y, window, max_window)
            passes = max(passes, p)
            if (nz, nw, mu_w) != (exact[cc.z_face], exact[cc.w_face], mu):
                raise StabilizationFailure(f"windowed counts disagree for {labels[x]} -> {labels[y]}")
            widest = max(widest, (win[3] - win[2]) // 2)
            arrows.append(Arrow(labels[x], labels[y], nz, nw))
    meta = {"window": window, "effective_window": widest,
            "stabilization_passes": passes}
    return arrows, meta


# ---------------------------------------------------------------------------
# gradings

def _symmetric_shift(rel: dict[str, int]) -> int:
    vals = sorted(rel.values())
    lo, hi = vals[0], vals[-1]
    found = []
    # a symmetric multiset has its centre at (lo + hi) / 2; test every integer in range anyway
    for c in range(-hi, -lo + 1):
        shifted = sorted(v + c for v in vals)
        if shifted == sorted(-v for v in shifted):
            found.append(c)
    if not found:
        raise AsymmetricGradings(f"relative Alexander gradings {vals} admit no symmetric shift")
    if len(found) > 1:
        raise AmbiguousShift(f"shifts {found} all symmetrize the Alexander gradings")
    return found[0]


def alexander_gradings(cc: CellComplex, arrows: Optional[list[Arrow]] = None) -> dict[str, int]:
    """Absolute A: relative values from connecting domains, then centred."""
    rel = {}
    for g in cc.generators:
        dom = connecting_domain(g.beta_index, 0, cc)
        nz, nw = basepoint_multiplicities(dom)
        rel[g.label] = nz - nw
    c = _symmetric_shift(rel)
    A = {k: v + c for k, v in rel.items()}
    for ar in arrows or ():
        if A[ar.source] - A[ar.target] != ar.n_z - ar.n_w:
            raise GradingMismatch(f"arrow {ar} disagrees with the connecting domains")
    return A


def _rank_f2(rows: list[int]) -> int:
    """Rank of a list of bitmask row vectors."""
    basis = {}
    r = 0
    for v in rows:
        while v:
            top = v.bit_length() - 1
            if top in basis:
                v ^= basis[top]
            else:
                basis[top] = v
                r += 1
                break
    return r


def graded_homology(labels, deg, arrows: Iterable[Arrow]) -> dict[int, int]:
    """Ranks by degree of the complex spanned by ``labels`` with the given arrows.

    The differential must lower ``deg`` by one.
    """
    idx = {l: i for i, l in enumerate(labels)}
    rows = defaultdict(int)
    for ar in arrows:
        rows[ar.source] ^= 1 << idx[ar.target]
    by_deg = defaultdict(list)
    for l in labels:
        by_deg[deg[l]].append(l)
    rank_d = {m: _rank_f2([rows[l] for l in ls]) for m, ls in by_deg.items()}
    return {m: len(ls) - rank_d[m] - rank_d.get(m + 1, 0)
            for m, ls in by_deg.items()
            if len(ls) - rank_d[m] - rank_d.get(m + 1, 0)}


def maslov_gradings(c: CFKComplex, cc: Optional[CellComplex] = None) -> dict[str, int]:
    """Absolute M.

    Relative values come from connecting domains when ``cc`` is given, from
    the complex otherwise.  The shift puts the homology of the n_w = 0
    subcomplex, which must have rank one, in degree zero.
    """
    if cc is not None:
        rel = {}
        for g in cc.generators:
            dom = connecting_domain(g.beta_index, 0, cc)
            _, nw = basepoint_multiplicities(dom)
            rel[g.label] = maslov_index(dom) - 2 * nw
    else:
        rel = dict(zip(c.labels, c.M))
    hat = [ar for ar in c.arrows if ar.n_w == 0]
    for ar in hat:
        if rel[ar.source] - rel[ar.target] != 1:
            raise GradingMismatch(f"arrow {ar} does not drop the Maslov grading by one")
    H = graded_homology(c.labels, rel, hat)
    if sum(H.values()) != 1:
        raise NotS3Homology(f"homology of the n_w = 0 complex has ranks {dict(sorted(H.items()))}")
    (m0,) = H
    return {k: v - m0 for k, v in rel.items()}


def build_complex(d: Diagram11, window=None, max_window: int = 1 << 12,
                  validate: bool = True) -> CFKComplex:
    if validate:
        ensure_valid(d)
    cc = build_arrangement(d)
    arrows, meta = enumerate_disks(cc, window, max_window)
    A = alexander_gradings(cc, arrows)
    labels = [g.label for g in cc.generators]
    provisional = make_complex(labels, [A[l] for l in labels], [0] * len(labels), arrows)
    M = maslov_gradings(provisional, cc)
    meta.update(name=d.name, generators=len(labels))
    c = make_complex(labels, [A[l] for l in labels], [M[l] for l in labels], arrows, meta)
    c.check_gradings()
    return c


# ---------------------------------------------------------------------------
# algebra on complexes

@dataclass(frozen=True)
class Verdict:
    ok: bool
    witness: Optional[tuple] = None


def d_squared_check(c: CFKComplex) -> Verdict:
    """partial^2 = 0, bookkept by (source, target, n_z, n_w) mod 2."""
    out = c.out_arrows()
    acc = defaultdict(int)
    for a1 in c.arrows:
        for a2 in out.get(a1.target, ()):
            acc[(a1.source, a2.target, a1.n_z + a2.n_z, a1.n_w + a2.n_w)] ^= 1
    bad = sorted(k for k, v in acc.items() if v)
    return Verdict(not bad, bad[0] if bad else None)


def _arrow_table(c: CFKComplex) -> dict[tuple, int]:
    return {(a.source, a.target): (a.n_z, a.n_w) for a in c.arrows}


def _substitute(c: CFKComplex, x: str, y: str) -> CFKComplex:
    """Replace basis element x by x + y (same A and M); the new element is named 'x+y'."""
    new = f"{x}+{y}"
    arrows = []
    for ar in c.arrows:
        if ar.source == x:
            arrows.append(replace(ar, source=new))
        elif ar.source == y:
            arrows.append(ar)
            # d(x + y) = dx + dy
            arrows.append(replace(ar, source=new))
        else:
            arrows.append(ar)
    fixed = []
    for ar in arrows:
        if ar.target == x:
            # old x = new + y
            fixed.append(replace(ar, target=new))
            fixed.append(replace(ar, target=y))
        else:
            fixed.append(ar)
    labels = [new if l == x else l for l in c.labels]
    return make_complex(labels, c.A, c.M, fixed, c.meta)


def cancel(c: CFKComplex) -> CFKComplex:
    """Cancel every arrow with n_z = n_w = 0 by Gaussian elimination."""
    while True:
        plain = next((a for a in c.arrows if a.n_z == 0 and a.n_w == 0), None)
        if plain is None:
            return c
        x, y = plain.source, plain.target
        into_y = [a for a in c.arrows if a.target == y and a.source != x]
        out_x = [a for a in c.arrows if a.source == x and a.target != y]
        arrows = [a for a in c.arrows if x not in (a.source, a.target) and y not in (a.source, a.target)]
        for a in into_y:
            for b in out_x:
                arrows.append(Arrow(a.source, b.target, a.n_z + b.n_z, a.n_w + b.n_w))
        keep = [i for i, l in enumerate(c.labels) if l not in (x, y)]
        c = make_complex([c.labels[i] for i in keep], [c.A[i] for i in keep],
                         [c.M[i] for i in keep], arrows, c.meta)


def simplify_basis(c: CFKComplex, max_rounds: int = 1000) -> CFKComplex:
    """Reduce the complex: cancel plain arrows, then greedily apply changes of
    basis x -> x + y within a bigrading while they lower the arrow count."""
    c = cancel(c)
    order = sorted(range(c.size), key=lambda i: (-c.A[i], c.labels[i]))
    for _ in range(max_rounds):
        best = None
        classes = defaultdict(list)
        for i in order:
            if i < c.size:
                classes[(c.A[i], c.M[i])].append(c.labels[i])
        for key in sorted(classes, key=lambda k: (-k[0], k[1])):
            ls = classes[key]
            for x in ls:
                for y in ls:
                    if x == y:
                        continue
                    t = _substitute(c, x, y)
                    if len(t.arrows) < len(c.arrows) and (best is None or len(t.arrows) < len(best.arrows)):
                        best = t
        if best is None:
            return c
        c = cancel(best)
    return c


@dataclass(frozen=True)
class Component:
    kind: str                 # "staircase" | "box" | "other"
    complex: CFKComplex

    @property
    def size(self) -> int:
        return self.complex.size


def _restrict(c: CFKComplex, labels) -> CFKComplex:
    keep = set(labels)
    idx = [i for i, l in enumerate(c.labels) if l in keep]
    return make_complex([c.labels[i] for i in idx], [c.A[i] for i in idx], [c.M[i] for i in idx],
                        [a for a in c.arrows if a.source in keep], c.meta)


def _pure(a: Arrow) -> bool:
    return (a.n_z == 0) != (a.n_w == 0)


def classify(c: CFKComplex) -> str:
    if c.size == 1 and not c.arrows:
        return "staircase"
    if not all(_pure(a) for a in c.arrows):
        return "other"
    if c.size == 4 and len(c.arrows) == 4:
        srcs = {a.source for a in c.arrows}
        tops = [l for l in c.labels if sum(a.source == l for a in c.arrows) == 2]
        bots = [l for l in c.labels if sum(a.target == l for a in c.arrows) == 2]
        if len(tops) == 1 and len(bots) == 1:
            t, b = tops[0], bots[0]
            mids = [l for l in c.labels if l not in (t, b)]
            tab = _arrow_table(c)
            if all((t, m) in tab and (m, b) in tab for m in mids):
                m1, m2 = mids
                # opposite sides of the rectangle carry the same drop
                if tab[(t, m1)] == tab[(m2, b)] and tab[(t, m2)] == tab[(m1, b)] \
                        and tab[(t, m1)] != tab[(t, m2)] and {a.kind for a in c.arrows} == {"z", "w"}:
                    return "box"
        del srcs
    # staircase: a path whose vertices alternate between sources and sinks and
    # whose arrows alternate between z and w type
    if len(c.arrows) != c.size - 1:
        return "other"
    nbr = defaultdict(list)
    for a in c.arrows:
        nbr[a.source].append(a)
        nbr[a.target].append(a)
    if any(len(v) > 2 for v in nbr.values()):
        return "other"
    ends = [l for l in c.labels if len(nbr[l]) == 1]
    if len(ends) != 2:
        return "other"
    path, prev, cur = [], None, ends[0]
    while True:
        nxt = [a for a in nbr[cur] if a is not prev]
        if not nxt:
            break
        prev = nxt[0]
        path.append(prev)
        cur = prev.target if prev.source == cur else prev.source
    if len(path) != c.size - 1:
        return "other"
    for a1, a2 in zip(path, path[1:]):
        shared_as_source = a1.source == a2.source
        shared_as_target = a1.target == a2.target
        if not (shared_as_source or shared_as_target) or a1.kind == a2.kind:
            return "other"
    return "staircase"


def decompose(c: CFKComplex) -> list[Component]:
    """Connected components of the arrow graph, classified.  Staircases first,
    then boxes ordered by their top generator's (A, M)."""
    parent = {l: l for l in c.labels}

    def find(u):
        while parent[u] != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        return u

    for a in c.arrows:
        parent[find(a.source)] = find(a.target)
    groups = defaultdict(list)
    for l in c.labels:
        groups[find(l)].append(l)
    comps = []
    for ls in groups.values():
        sub = _restrict(c, ls)
        comps.append(Component(classify(sub), sub))
    rank = {"staircase": 0, "box": 1, "other": 2}
    comps.sort(key=lambda k: (rank[k.kind], -max(k.complex.A), -max(k.complex.M), k.complex.labels))
    return comps


def staircase_shape(c: CFKComplex) -> tuple:
    """Shape of a staircase up to relabelling: gradings in path order and arrow drops."""
    if classify(c) != "staircase":
        raise ValueError("not a staircase")
    if c.size == 1:
        return ((c.A[0], c.M[0]),), ()
    nbr = defaultdict(list)
    for a in c.arrows:
        nbr[a.source].append(a)
        nbr[a.target].append(a)
    ends = sorted((l for l in c.labels if len(nbr[l]) == 1), key=lambda l: (-c.grading(l)[0], l))
    order, drops, prev, cur = [ends[0]], [], None, ends[0]
    while True:
        nxt = [a for a in nbr[cur] if a is not prev]
        if not nxt:
            break
        prev = nxt[0]
        cur = prev.target if prev.source == cur else prev.source
        order.append(cur)
        drops.append((prev.source == order[-2], prev.n_z, prev.n_w))
    return tuple(c.grading(l) for l in order), tuple(drops)


def direct_sum(c1: CFKComplex, c2: CFKComplex) -> CFKComplex:
    taken = set(c1.labels)
    ren = {}
    for l in c2.labels:
        new = l
        while new in taken:
            new += "'"
        ren[l] = new
        taken.add(new)
    arrows = list(c1.arrows) + [Arrow(ren[a.source], ren[a.target], a.n_z, a.n_w) for a in c2.arrows]
    return make_complex(list(c1.labels) + [ren[l] for l in c2.labels],
                        c1.A + c2.A, c1.M + c2.M, arrows, c1.meta)


def make_box(A: int, M: int, prefix: str = "box") -> CFKComplex:
    """Acyclic unit square with top corner at gradings (A, M)."""
    t, r, l, b = (f"{prefix}.{s}" for s in "trlb")
    return make_complex([t, r, l, b], [A, A + 1, A - 1, A], [M, M + 1, M - 1, M],
                        [Arrow(t, r, 0, 1), Arrow(t, l, 1, 0), Arrow(r, b, 1, 0), Arrow(l, b, 0, 1)])


def mirror(c: CFKComplex) -> CFKComplex:
    """Dual complex: gradings negated, arrows reversed with the same drops."""
    return make_complex(c.labels, [-a for a in c.A], [-m for m in c.M],
                        [Arrow(a.target, a.source, a.n_z, a.n_w) for a in c.arrows], c.meta)


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)
