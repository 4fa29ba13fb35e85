"""GKM graphs of the Hermitian (type A) and skew-symmetric (type D)
isospectral manifolds, the doubling construction and component splitting."""

from __future__ import annotations

import itertools
import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

from .sparsity import (
    LieType,
    Permutation,
    SignVector,
    SparsityGraph,
    Spectrum,
    enumerate_labels,
    format_permutation,
    format_signs,
    parity,
    transpose,
)

logger = logging.getLogger(__name__)

MAX_TYPE_D_N = 8

Weight = tuple[int, ...]


class ModeMismatch(ValueError):
    pass


class EdgeAcrossParity(RuntimeError):
    pass


class NotIsomorphism(RuntimeError):
    pass


class GKMEdge(NamedTuple):
    u: int
    v: int
    pair: tuple[int, int]
    weight: Weight


def normalize_weight(w: Sequence[int]) -> Weight:
    """Sign representative with the first nonzero coordinate positive."""
    w = tuple(int(c) for c in w)
    for c in w:
        if c:
            return w if c > 0 else tuple(-x for x in w)
    return w


def root(n: int, i: int, j: int, plus: bool) -> Weight:
    """``e_i + e_j`` or ``e_i - e_j`` (1-based ``i < j``), normalized."""
    w = [0] * n
    w[i - 1] = 1
    w[j - 1] = 1 if plus else -1
    return normalize_weight(w)


def format_weight(w: Weight) -> str:
    terms = []
    for k, c in enumerate(w, start=1):
        if c == 0:
            continue
        sign = "-" if c < 0 else ("+" if terms else "")
        mag = "" if abs(c) == 1 else str(abs(c))
        terms.append(f"{sign}{mag}e{k}")
    return "".join(terms) or "0"


@dataclass(frozen=True)
class GKMGraph:
    """Vertices are labels in canonical order; edges are stored once with
    ``u < v`` and sorted.

    ``component`` is ``None`` for a full graph, ``"plus"``/``"minus"`` for a
    parity half of a type D graph.
    """

    mode: LieType
    n: int
    gamma: tuple[tuple[int, int], ...]
    vertices: tuple
    edges: tuple[GKMEdge, ...]
    lam: Optional[Spectrum] = None
    component: Optional[str] = None
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {lab: k for k, lab in enumerate(self.vertices)})

    def index(self, label) -> int:
        return self._index[label]

    def __contains__(self, label) -> bool:
        return label in self._index

    @property
    def sparsity(self) -> SparsityGraph:
        return SparsityGraph(self.n, self.gamma)

    def adjacency(self) -> list[list[tuple[int, GKMEdge]]]:
        adj: list[list[tuple[int, GKMEdge]]] = [[] for _ in self.vertices]
        for e in self.edges:
            adj[e.u].append((e.v, e))
            adj[e.v].append((e.u, e))
        return adj

    def components(self) -> list[list[int]]:
        adj = self.adjacency()
        seen = [False] * len(self.vertices)
        comps = []
        for start in range(len(self.vertices)):
            if seen[start]:
                continue
            seen[start] = True
            stack, comp = [start], []
            while stack:
                x = stack.pop()
                comp.append(x)
                for y, _ in adj[x]:
                    if not seen[y]:
                        seen[y] = True
                        stack.append(y)
            comps.append(sorted(comp))
        return comps

    def label_text(self, k: int) -> str:
        lab = self.vertices[k]
        if self.mode is LieType.A:
            return format_permutation(lab)
        sigma, s = lab
        return f"{format_permutation(sigma)};{format_signs(s)}"

    def same_as(self, other: "GKMGraph") -> bool:
        """Exact label equality of vertices, edges, block pairs and weights."""
        return (
            self.mode == other.mode
            and self.n == other.n
            and self.vertices == other.vertices
            and self.edges == other.edges
        )


def _canonical_edges(raw) -> tuple[GKMEdge, ...]:
    out = set()
    for u, v, pair, w in raw:
        if u > v:
            u, v = v, u
        out.add(GKMEdge(u, v, pair, normalize_weight(w)))
    return tuple(sorted(out))


# ---------------------------------------------------------------------------
# builders


def build_type_A(g: SparsityGraph, lam: Spectrum | None = None) -> GKMGraph:
    """GKM graph of the Hermitian manifold: ``n!`` permutations, an edge
    ``sigma -- sigma.(i j)`` of weight ``e_i - e_j`` for every edge of ``g``."""
    verts = enumerate_labels(g.n, LieType.A)
    index = {p: k for k, p in enumerate(verts)}
    raw = []
    for k, sigma in enumerate(verts):
        for i, j in g.edges:
            raw.append((k, index[transpose(sigma, i, j)], (i, j), root(g.n, i, j, plus=False)))
    return GKMGraph(LieType.A, g.n, g.edges, tuple(verts), _canonical_edges(raw), lam)


def type_D_weight(n: int, i: int, j: int, s: SignVector, s2: SignVector) -> Weight:
    """Axial value of the edge ``(sigma, s) -- (sigma.(i j), s2)``:
    ``e_i + e_j`` when the signs agree at ``i``, ``e_i - e_j`` otherwise."""
    return root(n, i, j, plus=s[i - 1] == s2[i - 1])


def build_type_D(g: SparsityGraph, lam: Spectrum | None = None, max_n: int = MAX_TYPE_D_N) -> GKMGraph:
    """GKM graph of the skew-symmetric manifold on labels ``(sigma, s)``.

    Every vertex gets, for each edge ``{i, j}`` of ``g``, the two neighbours
    ``(sigma.(i j), s')`` where ``s'`` agrees with ``s`` off ``{i, j}`` and
    ``s'_i + s'_j = s_i + s_j`` mod 2.
    """
    if g.n > max_n:
        raise ValueError(f"type D construction capped at n <= {max_n} (got {g.n})")
    verts = enumerate_labels(g.n, LieType.D)
    index = {lab: k for k, lab in enumerate(verts)}
    raw = []
    for k, (sigma, s) in enumerate(verts):
        for i, j in g.edges:
            tau = transpose(sigma, i, j)
            for flip in (0, 1):
                s2 = list(s)
                s2[i - 1] ^= flip
                s2[j - 1] ^= flip
                s2 = tuple(s2)
                raw.append((k, index[(tau, s2)], (i, j), type_D_weight(g.n, i, j, s, s2)))
    return GKMGraph(LieType.D, g.n, g.edges, tuple(verts), _canonical_edges(raw), lam)


def lift_to_type_D(a: GKMGraph, max_n: int = MAX_TYPE_D_N) -> GKMGraph:
    """Doubling construction: each type A vertex ``sigma`` becomes ``2^n``
    vertices ``(sigma, s)``; each type A edge ``sigma -- sigma.(i j)`` becomes
    every admissible pairing ``(sigma, s) -- (sigma.(i j), s')``."""
    if a.mode is not LieType.A:
        raise ModeMismatch(f"lift expects a type A graph, got type {a.mode.value}")
    if a.n > max_n:
        raise ValueError(f"type D construction capped at n <= {max_n} (got {a.n})")
    n = a.n
    signs = list(itertools.product((0, 1), repeat=n))
    verts = [(sigma, s) for sigma in a.vertices for s in signs]
    index = {lab: k for k, lab in enumerate(verts)}
    raw = []
    for e in a.edges:
        sigma, tau = a.vertices[e.u], a.vertices[e.v]
        i, j = e.pair
        for s in signs:
            for s2 in signs:
                if any(s[k] != s2[k] for k in range(n) if k not in (i - 1, j - 1)):
                    continue
                if (s[i - 1] + s[j - 1] - s2[i - 1] - s2[j - 1]) % 2:
                    continue
                w = root(n, i, j, plus=s[i - 1] == s2[i - 1])
                raw.append((index[(sigma, s)], index[(tau, s2)], (i, j), w))
    return GKMGraph(LieType.D, n, a.gamma, tuple(verts), _canonical_edges(raw), a.lam)


# ---------------------------------------------------------------------------
# components


def induced_subgraph(gr: GKMGraph, keep: Sequence[int], component: str | None = None) -> GKMGraph:
    keep = sorted(keep)
    remap = {old: new for new, old in enumerate(keep)}
    edges = [
        GKMEdge(remap[e.u], remap[e.v], e.pair, e.weight)
        for e in gr.edges
        if e.u in remap and e.v in remap
    ]
    return GKMGraph(
        gr.mode, gr.n, gr.gamma, tuple(gr.vertices[k] for k in keep), tuple(sorted(edges)), gr.lam, component
    )


def split_components(d: GKMGraph) -> tuple[GKMGraph, GKMGraph]:
    """Induced subgraphs on even and odd sign-vector parity."""
    if d.mode is not LieType.D:
        raise ModeMismatch("split_components needs a type D graph")
    for e in d.edges:
        if parity(d.vertices[e.u][1]) != parity(d.vertices[e.v][1]):
            raise EdgeAcrossParity(f"edge {d.label_text(e.u)} -- {d.label_text(e.v)} joins parity classes")
    even = [k for k, (_, s) in enumerate(d.vertices) if parity(s) == 0]
    odd = [k for k, (_, s) in enumerate(d.vertices) if parity(s) == 1]
    plus, minus = induced_subgraph(d, even, "plus"), induced_subgraph(d, odd, "minus")
    if len(plus.edges) + len(minus.edges) != len(d.edges):
        raise EdgeAcrossParity("parity halves lost edges")
    return plus, minus


def flip_first(label):
    sigma, s = label
    return sigma, (1 - s[0],) + tuple(s[1:])


def component_isomorphism(plus: GKMGraph, minus: GKMGraph) -> dict[int, int]:
    """Vertex bijection ``(sigma, s) -> (sigma, s + e_1)``, checked to carry
    edges onto edges with the same block pair and weight."""
    mapping = {}
    for k, lab in enumerate(plus.vertices):
        img = flip_first(lab)
        if img not in minus:
            raise NotIsomorphism(f"{plus.label_text(k)} has no image")
        mapping[k] = minus.index(img)
    if len(set(mapping.values())) != len(minus.vertices):
        raise NotIsomorphism("vertex map is not onto")
    image = _canonical_edges((mapping[e.u], mapping[e.v], e.pair, e.weight) for e in plus.edges)
    if image != minus.edges:
        missing = set(image) ^ set(minus.edges)
        raise NotIsomorphism(f"{len(missing)} edges not preserved, e.g. {sorted(missing)[0]}")
    return mapping


# ---------------------------------------------------------------------------
# moment image


def moment_image(gr: GKMGraph, lam: Spectrum | None = None) -> list[tuple[Fraction, ...]]:
    """Diagonal-block values of each fixed point, exact.

    Type A: ``lambda_{sigma(k)}``; type D: ``(-1)^{s_k} lambda_{sigma(k)}``.
    """
    lam = lam or gr.lam
    if lam is None:
        raise ValueError("moment image needs a spectrum")
    if len(lam) != gr.n:
        raise ValueError(f"spectrum has {len(lam)} values, graph has n={gr.n}")
    vals = lam.exact
    out = []
    for lab in gr.vertices:
        if gr.mode is LieType.A:
            out.append(tuple(vals[p - 1] for p in lab))
        else:
            sigma, s = lab
            out.append(tuple(-vals[p - 1] if b else vals[p - 1] for p, b in zip(sigma, s)))
    return out


def moment_direction(gr: GKMGraph, e: GKMEdge, mu) -> Weight:
    """Primitive integer direction of ``mu(v) - mu(u)``, sign-normalized."""
    diff = [Fraction(b - a) for a, b in zip(mu[e.u], mu[e.v])]
    scale = math.lcm(*(c.denominator for c in diff))
    ints = [int(c * scale) for c in diff]
    g = math.gcd(*ints) or 1
    return normalize_weight([c // g for c in ints])


# ---------------------------------------------------------------------------
# validation


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    witness: Optional[str] = None


@dataclass
class GKMReport:
    checks: list[Check]
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "checks": [c.__dict__ for c in self.checks],
            "notes": list(self.notes),
        }


def expected_weights(gr: GKMGraph) -> Counter:
    """Per-vertex multiset of ``(block pair, weight)``."""
    out: Counter = Counter()
    for i, j in gr.gamma:
        out[((i, j), root(gr.n, i, j, plus=False))] += 1
        if gr.mode is LieType.D:
            out[((i, j), root(gr.n, i, j, plus=True))] += 1
    return out


def validate_gkm(gr: GKMGraph) -> GKMReport:
    """Structural checks; each failure carries a witness vertex or edge."""
    checks = []
    E = len(gr.gamma)

    bad = next((e for e in gr.edges if not any(e.weight)), None)
    checks.append(Check("nonzero weights", bad is None, witness=_edge_text(gr, bad)))

    loop = next((e for e in gr.edges if e.u == e.v), None)
    checks.append(Check("no loops", loop is None, witness=_edge_text(gr, loop)))

    dup = [e for e, c in Counter(gr.edges).items() if c > 1]
    checks.append(Check("no parallel edges", not dup, witness=_edge_text(gr, dup[0]) if dup else None))

    valence = E if gr.mode is LieType.A else 2 * E
    adj = gr.adjacency()
    irregular = next((k for k, nb in enumerate(adj) if len(nb) != valence), None)
    checks.append(
        Check(
            "regular",
            irregular is None,
            f"valence {valence}",
            None if irregular is None else f"{gr.label_text(irregular)} has {len(adj[irregular])}",
        )
    )

    want = expected_weights(gr)
    wrong = None
    for k, nb in enumerate(adj):
        got = Counter((e.pair, e.weight) for _, e in nb)
        if got != want:
            wrong = k
            break
    checks.append(
        Check(
            "tangent weights",
            wrong is None,
            "per-vertex multiset " + ", ".join(sorted(format_weight(w) for (_, w) in want.elements())),
            None if wrong is None else gr.label_text(wrong),
        )
    )

    # endpoints of an edge differ by the transposition of its block pair
    wrong_edge = None
    for e in gr.edges:
        a, b = gr.vertices[e.u], gr.vertices[e.v]
        sa, sb = (a, b) if gr.mode is LieType.A else (a[0], b[0])
        if transpose(sa, *e.pair) != sb or tuple(gr.gamma).count(e.pair) != 1:
            wrong_edge = e
            break
    checks.append(Check("edges follow block pairs", wrong_edge is None, witness=_edge_text(gr, wrong_edge)))

    expected_components = 2 if (gr.mode is LieType.D and gr.component is None) else 1
    comps = gr.components()
    checks.append(
        Check(
            "components",
            len(comps) == expected_components,
            f"found {len(comps)}, expected {expected_components}",
            None if len(comps) == expected_components else gr.label_text(comps[-1][0]),
        )
    )

    notes = []
    if gr.lam is not None:
        mu = moment_image(gr)
        off_support = None
        parallel = 0
        for e in gr.edges:
            diff = [b - a for a, b in zip(mu[e.u], mu[e.v])]
            support = {k + 1 for k, c in enumerate(diff) if c}
            if not support or not support <= set(e.pair):
                off_support = e
                break
            if moment_direction(gr, e, mu) == e.weight:
                parallel += 1
        checks.append(
            Check(
                "moment differences supported on block pair",
                off_support is None,
                witness=_edge_text(gr, off_support),
            )
        )
        notes.append(f"moment difference parallel to axial weight on {parallel}/{len(gr.edges)} edges")
        logger.info(notes[-1])
    return GKMReport(checks, notes)


def _edge_text(gr: GKMGraph, e: GKMEdge | None) -> str | None:
    if e is None:
        return None
    return f"{gr.label_text(e.u)} -- {gr.label_text(e.v)} [{format_weight(e.weight)}]"


# ---------------------------------------------------------------------------
# symmetries used to block-diagonalize the congruence systems


def _left_multiply(pi: Permutation, sigma: Permutation) -> Permutation:
    return tuple(pi[v - 1] for v in sigma)


def label_symmetries(gr: GKMGraph) -> list[tuple[int, ...]]:
    """Commuting involutions of the vertex set that fix every axial value.

    Relabelling the spectrum by a disjoint transposition ``(1 2), (3 4), ...``
    acts by ``sigma -> pi . sigma``; for type D, adding a fixed sign vector
    to ``s`` (an even one on a parity half) also preserves edges and
    weights. The returned permutations act freely and generate an
    elementary abelian 2-group; callers should still verify them.
    """
    n = gr.n
    gens: list = []
    for a in range(1, n, 2):
        pi = list(range(1, n + 1))
        pi[a - 1], pi[a] = pi[a], pi[a - 1]
        gens.append(("left", tuple(pi)))
    if gr.mode is LieType.D:
        if gr.component is None:
            gens.append(("shift", tuple(1 if k == 0 else 0 for k in range(n))))
        for k in range(1, n):
            gens.append(("shift", tuple(1 if m in (0, k) else 0 for m in range(n))))
    out = []
    for kind, data in gens:
        perm = []
        for lab in gr.vertices:
            if gr.mode is LieType.A:
                img = _left_multiply(data, lab)
            elif kind == "left":
                img = (_left_multiply(data, lab[0]), lab[1])
            else:
                img = (lab[0], tuple(a ^ b for a, b in zip(lab[1], data)))
            perm.append(gr.index(img))
        out.append(tuple(perm))
    return out
