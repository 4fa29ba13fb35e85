"""Morse counts, graded ranks of the GKM congruence ring, and a formality
consistency verdict.

The degree-``k`` piece of the GKM ring is the space of tuples ``(f_v)`` of
homogeneous degree-``k`` polynomials in ``n`` variables, one per vertex, with
``f_u - f_v`` divisible by the linear form ``alpha(uv)`` on every edge.
Divisibility is encoded as vanishing on the hyperplane ``alpha = 0``: one
variable is eliminated by substitution, which keeps everything linear in the
monomial coefficients.
"""

from __future__ import annotations

import enum
import itertools
import logging
import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Optional, Sequence

import flint

from .gkm import GKMGraph, label_symmetries, moment_image
from .sparsity import LieType, Spectrum

logger = logging.getLogger(__name__)

MAX_DEGREE = 40
EXACT_COLUMN_LIMIT = 600
THREADS_ENV = "ISOGKM_THREADS"


class CapExceeded(ValueError):
    pass


class NonGenericDirection(ValueError):
    pass


class BadSymmetry(ValueError):
    pass


# ---------------------------------------------------------------------------
# Morse counts


@dataclass(frozen=True)
class MorseCount:
    """``counts[k]`` is the number of vertices with ``k`` descending edges,
    i.e. the candidate Betti number in degree ``2k``."""

    counts: tuple[int, ...]
    direction: tuple[Fraction, ...]

    @property
    def total(self) -> int:
        return sum(self.counts)


def morse_counts(gr: GKMGraph, lam: Spectrum | None = None, xi: Sequence | None = None) -> MorseCount:
    """Count descending edges at each vertex for the height ``<xi, mu>``."""
    mu = moment_image(gr, lam)
    if xi is None:
        xi = random_direction(gr, lam, random.Random(0))
    xi = tuple(Fraction(x) for x in xi)
    height = [sum(a * b for a, b in zip(xi, m)) for m in mu]
    down = [0] * len(gr.vertices)
    for e in gr.edges:
        hu, hv = height[e.u], height[e.v]
        if hu == hv:
            raise NonGenericDirection(f"edge {gr.label_text(e.u)} -- {gr.label_text(e.v)} is level for xi={xi}")
        down[e.u if hu > hv else e.v] += 1
    top = max(down, default=0)
    counts = [0] * (top + 1)
    for d in down:
        counts[d] += 1
    return MorseCount(tuple(counts), xi)


def random_direction(gr: GKMGraph, lam: Spectrum | None, rng: random.Random, tries: int = 100) -> tuple[Fraction, ...]:
    """A random integer direction that separates the endpoints of every edge."""
    mu = moment_image(gr, lam)
    for _ in range(tries):
        xi = tuple(Fraction(rng.randint(-997, 997)) for _ in range(gr.n))
        h = [sum(a * b for a, b in zip(xi, m)) for m in mu]
        if all(h[e.u] != h[e.v] for e in gr.edges):
            return xi
    raise NonGenericDirection("no generic direction found")


# ---------------------------------------------------------------------------
# polynomial bookkeeping


def monomials(n: int, k: int) -> list[tuple[int, ...]]:
    """Exponent vectors of total degree ``k`` in ``n`` variables."""
    if n == 0:
        return [()] if k == 0 else []
    out = []
    for first in range(k, -1, -1):
        for rest in monomials(n - 1, k - first):
            out.append((first,) + rest)
    return out


def _restriction(weight: Sequence[int], mons: list[tuple[int, ...]]) -> tuple[list[dict[int, int]], int]:
    """Restriction of degree-k polynomials to the hyperplane ``weight . x = 0``.

    Returns one sparse column (target index -> integer coefficient) per
    source monomial, and the number of target monomials.
    """
    n = len(weight)
    units = [j for j in range(n) if abs(weight[j]) == 1]
    if not units:
        raise ValueError(f"weight {tuple(weight)} has no unit coordinate to eliminate")
    j = units[-1]
    # x_j = sum_l c_l x_l on the hyperplane
    coeffs = {l: -weight[j] * weight[l] for l in range(n) if l != j and weight[l]}
    target_index: dict[tuple[int, ...], int] = {}
    cols = []
    for a in mons:
        col: dict[int, int] = {}
        aj = a[j]
        base = list(a)
        base[j] = 0
        support = sorted(coeffs)
        for split in _compositions(aj, len(support)):
            c = _multinomial(aj, split)
            mono = list(base)
            for l, p in zip(support, split):
                c *= coeffs[l] ** p
                mono[l] += p
            t = target_index.setdefault(tuple(mono), len(target_index))
            col[t] = col.get(t, 0) + c
        cols.append({t: c for t, c in col.items() if c})
    return cols, len(target_index)


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _multinomial(total: int, split: Sequence[int]) -> int:
    out = factorial(total)
    for p in split:
        out //= factorial(p)
    return out


# ---------------------------------------------------------------------------
# symmetry reduction


@dataclass
class _Reduction:
    order: int
    reps: list[int]
    coord: list[tuple[int, int]]  # vertex -> (rep slot, group element bits)


def _reduce(gr: GKMGraph, gens: Sequence[Sequence[int]]) -> _Reduction:
    """Check ``gens`` generate a free elementary abelian 2-group of
    weight-preserving automorphisms and pick orbit representatives."""
    nv = len(gr.vertices)
    edge_set = set(gr.edges)
    for p in gens:
        if len(p) != nv or sorted(p) != list(range(nv)):
            raise BadSymmetry("generator is not a vertex permutation")
        if any(p[p[x]] != x for x in range(nv)):
            raise BadSymmetry("generator is not an involution")
        for e in gr.edges:
            u, v = p[e.u], p[e.v]
            if (min(u, v), max(u, v), e.pair, e.weight) not in edge_set:
                raise BadSymmetry(f"generator does not preserve edge {e}")
    for p, q in itertools.combinations(gens, 2):
        if any(p[q[x]] != q[p[x]] for x in range(nv)):
            raise BadSymmetry("generators do not commute")
    r = len(gens)
    order = 1 << r
    coord: list[Optional[tuple[int, int]]] = [None] * nv
    reps = []
    for v in range(nv):
        if coord[v] is not None:
            continue
        slot = len(reps)
        reps.append(v)
        for bits in range(order):
            x = v
            for b in range(r):
                if bits >> b & 1:
                    x = gens[b][x]
            if coord[x] is not None:
                raise BadSymmetry("group does not act freely")
            coord[x] = (slot, bits)
    return _Reduction(order, reps, coord)  # type: ignore[arg-type]


def auto_symmetries(gr: GKMGraph) -> list[tuple[int, ...]]:
    """The label symmetries of ``gr`` that pass verification, added greedily."""
    kept: list[tuple[int, ...]] = []
    for p in label_symmetries(gr):
        try:
            _reduce(gr, kept + [p])
        except BadSymmetry:
            continue
        kept.append(p)
    return kept


# ---------------------------------------------------------------------------
# ranks


def _random_prime(rng: random.Random, bits: int = 62) -> int:
    while True:
        p = rng.getrandbits(bits) | (1 << (bits - 1)) | 1
        if flint.fmpz(p).is_prime():
            return p


def _rank(entries: dict[tuple[int, int], int], nrows: int, ncols: int, rng: random.Random) -> tuple[int, str]:
    if nrows == 0 or ncols == 0:
        return 0, "exact"
    if ncols <= EXACT_COLUMN_LIMIT:
        M = flint.fmpz_mat(nrows, ncols)
        for (r, c), v in entries.items():
            M[r, c] = v
        return M.rank(), "exact"
    ranks = []
    for _ in range(2):
        p = _random_prime(rng)
        M = flint.nmod_mat(nrows, ncols, p)
        for (r, c), v in entries.items():
            M[r, c] = v % p
        ranks.append(M.rank())
    if ranks[0] == ranks[1]:
        return ranks[0], "modular"
    logger.warning("modular ranks disagree (%s); falling back to exact", ranks)
    M = flint.fmpz_mat(nrows, ncols)
    for (r, c), v in entries.items():
        M[r, c] = v
    return M.rank(), "exact"


def degree_rank(gr: GKMGraph, k: int, symmetries="auto", seed: int = 0) -> int:
    """Dimension of the degree-``k`` polynomial part of the GKM ring."""
    if symmetries == "auto":
        symmetries = auto_symmetries(gr)
    red = _reduce(gr, symmetries or [])
    mons = monomials(gr.n, k)
    nm = len(mons)
    restrictions: dict = {}
    for e in gr.edges:
        if e.weight not in restrictions:
            restrictions[e.weight] = _restriction(e.weight, mons)
    adj = gr.adjacency()
    rng = random.Random(seed * 1_000_003 + k)
    total = 0
    for chi in range(red.order):
        entries: dict[tuple[int, int], int] = {}
        row0 = 0
        for slot_a, rep in enumerate(red.reps):
            for other, e in adj[rep]:
                slot_b, h = red.coord[other]
                sign = -1 if bin(chi & h).count("1") % 2 else 1
                cols, ntarget = restrictions[e.weight]
                for src, col in enumerate(cols):
                    for t, c in col.items():
                        key_a = (row0 + t, slot_a * nm + src)
                        entries[key_a] = entries.get(key_a, 0) + c
                        key_b = (row0 + t, slot_b * nm + src)
                        entries[key_b] = entries.get(key_b, 0) - sign * c
                row0 += ntarget
        entries = {key: v for key, v in entries.items() if v}
        ncols = len(red.reps) * nm
        rank, _ = _rank(entries, row0, ncols, rng)
        total += ncols - rank
    logger.debug("degree %d: rank %d (group order %d, %d reps)", k, total, red.order, len(red.reps))
    return total


@dataclass(frozen=True)
class GradedRankTable:
    """Topological degree ``d`` (even) -> dimension of the GKM ring in
    polynomial degree ``d / 2``."""

    ranks: dict[int, int]

    def series(self, max_degree: int) -> list[int]:
        """Coefficients indexed by topological degree ``0..max_degree``."""
        return [self.ranks.get(d, 0) for d in range(max_degree + 1)]


def _threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def graded_ranks(gr: GKMGraph, max_degree: int, symmetries="auto", cap: int = MAX_DEGREE) -> GradedRankTable:
    """Ranks of the congruence system in every even degree ``<= max_degree``."""
    if max_degree > cap:
        raise CapExceeded(f"max degree {max_degree} exceeds cap {cap}")
    if max_degree < 0:
        raise ValueError("max degree must be nonnegative")
    if symmetries == "auto":
        symmetries = auto_symmetries(gr)
    degrees = list(range(0, max_degree + 1, 2))
    work = lambda d: degree_rank(gr, d // 2, symmetries)  # noqa: E731
    threads = _threads()
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            values = list(pool.map(work, degrees))
    else:
        values = [work(d) for d in degrees]
    return GradedRankTable(dict(zip(degrees, values)))


# ---------------------------------------------------------------------------
# formality


class Verdict(str, enum.Enum):
    FORMAL_CONSISTENT = "FormalConsistent"
    NOT_FORMAL = "NotFormal"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class FormalityVerdict:
    verdict: Verdict
    betti: tuple[int, ...]  # candidate coefficient per topological degree 0..max_degree
    max_degree: int
    dimension: int
    num_vertices: int
    ranks: GradedRankTable
    witness: Optional[dict] = None
    notes: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "betti": list(self.betti),
            "maxDegree": self.max_degree,
            "dimension": self.dimension,
            "vertices": self.num_vertices,
            "ranks": {str(d): r for d, r in sorted(self.ranks.ranks.items())},
            "witness": self.witness,
            "notes": list(self.notes),
        }


def manifold_dimension(gr: GKMGraph) -> int:
    """Real dimension: ``2|E|`` for type A, ``4|E|`` for type D."""
    return (2 if gr.mode is LieType.A else 4) * len(gr.gamma)


def default_max_degree(gr: GKMGraph) -> int:
    return manifold_dimension(gr) + 2


def candidate_betti(table: GradedRankTable, n: int, max_degree: int) -> list[int]:
    """Coefficients of ``sum_d rank_d t^d * (1 - t^2)^n`` up to ``t^max_degree``."""
    series = table.series(max_degree)
    factor = [0] * (max_degree + 1)
    for m in range(n + 1):
        if 2 * m <= max_degree:
            factor[2 * m] = (-1) ** m * comb(n, m)
    return [sum(series[a] * factor[d - a] for a in range(d + 1)) for d in range(max_degree + 1)]


def classify(c: Sequence[int], num_vertices: int, dimension: int) -> tuple[Verdict, Optional[dict]]:
    """Verdict and witness for a candidate Betti vector.

    A negative coefficient is witnessed by its degree; a total above the
    vertex count by ``degree = None`` and the excess.
    """
    negative = next((d for d, x in enumerate(c) if x < 0), None)
    if negative is not None:
        return Verdict.NOT_FORMAL, {"degree": negative, "defect": c[negative]}
    if sum(c) > num_vertices:
        return Verdict.NOT_FORMAL, {"degree": None, "defect": sum(c) - num_vertices}
    if sum(c) == num_vertices and all(x == 0 for x in c[dimension + 1:]):
        return Verdict.FORMAL_CONSISTENT, None
    return Verdict.INCONCLUSIVE, None


def formality_verdict(
    gr: GKMGraph, max_degree: int | None = None, symmetries="auto", early_stop: bool = True
) -> FormalityVerdict:
    """Free-module consistency test on the graded ranks.

    ``FormalConsistent`` is a necessary condition for equivariant formality,
    not a proof of it. The coefficient in degree ``d`` only depends on ranks
    up to ``d``, so with ``early_stop`` the degrees are computed in order and
    the first negative coefficient ends the computation.
    """
    dim = manifold_dimension(gr)
    D = requested = default_max_degree(gr) if max_degree is None else max_degree
    if D > MAX_DEGREE:
        raise CapExceeded(f"max degree {D} exceeds cap {MAX_DEGREE}")
    if symmetries == "auto":
        symmetries = auto_symmetries(gr)
    notes = []
    if early_stop:
        ranks: dict[int, int] = {}
        for d in range(0, D + 1, 2):
            ranks[d] = degree_rank(gr, d // 2, symmetries)
            if min(candidate_betti(GradedRankTable(ranks), gr.n, d)) < 0:
                if d < D:
                    notes.append(f"stopped at degree {d} after a negative coefficient")
                D = d
                break
        table = GradedRankTable(ranks)
    else:
        table = graded_ranks(gr, D, symmetries)
    c = candidate_betti(table, gr.n, D)
    nv = len(gr.vertices)
    verdict, witness = classify(c, nv, dim)
    if requested < dim:
        notes.append(f"max degree {requested} is below the dimension {dim}")
    return FormalityVerdict(verdict, tuple(c), D, dim, nv, table, witness, tuple(notes))
