"""Sparsity graphs, spectra and the canonical label enumerations.

Vertices are 1-based everywhere a user can see them (edge-list files, labels,
reports); array indices derived from them are 0-based.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Iterable, Sequence

Permutation = tuple[int, ...]
SignVector = tuple[int, ...]


class LieType(str, enum.Enum):
    """Which isospectral manifold a graph or spectrum belongs to."""

    A = "A"  # Hermitian matrices
    D = "D"  # real skew-symmetric matrices


# ---------------------------------------------------------------------------
# errors


class GraphParseError(ValueError):
    """Base class for edge-list problems; ``line`` is 1-based or ``None``."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DuplicateEdge(GraphParseError):
    pass


class SelfLoop(GraphParseError):
    pass


class Disconnected(GraphParseError):
    pass


class IndexOutOfRange(GraphParseError):
    pass


class MalformedLine(GraphParseError):
    pass


class NotGeneric(ValueError):
    """Spectrum fails the genericity condition; ``reason`` is one of
    ``"repeat"``, ``"zero"``, ``"abs-repeat"``."""

    def __init__(self, reason: str, detail: str = ""):
        self.reason = reason
        super().__init__(f"spectrum not generic ({reason}){': ' + detail if detail else ''}")


# ---------------------------------------------------------------------------
# graphs


@dataclass(frozen=True)
class SparsityGraph:
    """A simple connected graph on ``{1, ..., n}``.

    ``edges`` is kept sorted, each pair as ``(i, j)`` with ``i < j``.
    """

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 1:
            raise GraphParseError("graph needs at least one vertex")
        canon = []
        for i, j in self.edges:
            if i == j:
                raise SelfLoop(f"self-loop at vertex {i}")
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise IndexOutOfRange(f"edge {i} {j} outside 1..{self.n}")
            canon.append((min(i, j), max(i, j)))
        if len(set(canon)) != len(canon):
            raise DuplicateEdge("duplicate edge")
        object.__setattr__(self, "edges", tuple(sorted(canon)))
        if not _is_connected(self.n, self.edges):
            raise Disconnected(f"graph on {self.n} vertices is not connected")

    @classmethod
    def complete(cls, n: int) -> "SparsityGraph":
        return cls(n, tuple(itertools.combinations(range(1, n + 1), 2)))

    @classmethod
    def path(cls, n: int) -> "SparsityGraph":
        return cls(n, tuple((k, k + 1) for k in range(1, n)))

    @classmethod
    def cycle(cls, n: int) -> "SparsityGraph":
        return cls(n, tuple((k, k + 1) for k in range(1, n)) + ((1, n),))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in set(self.edges)

    def to_text(self) -> str:
        """Serialize in the edge-list format read by :func:`parse_graph`."""
        lines = [f"n {self.n}"] + [f"{i} {j}" for i, j in self.edges]
        return "\n".join(lines) + "\n"


def _is_connected(n: int, edges: Iterable[tuple[int, int]]) -> bool:
    adj: dict[int, list[int]] = {v: [] for v in range(1, n + 1)}
    for i, j in edges:
        adj[i].append(j)
        adj[j].append(i)
    seen = {1}
    stack = [1]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def parse_graph(text: str) -> SparsityGraph:
    """Parse an edge-list document.

    Lines hold ``i j`` pairs; ``#`` starts a comment; an optional
    ``n <count>`` header fixes the vertex count, otherwise it is the largest
    index seen. Errors name the offending line.
    """
    n_header: int | None = None
    pairs: list[tuple[int, int, int]] = []
    seen: dict[tuple[int, int], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0].lower() == "n":
            if len(parts) != 2 or n_header is not None or pairs:
                raise MalformedLine("header must be a single leading 'n <count>'", lineno)
            try:
                n_header = int(parts[1])
            except ValueError:
                raise MalformedLine(f"bad vertex count {parts[1]!r}", lineno) from None
            if n_header < 1:
                raise MalformedLine("vertex count must be positive", lineno)
            continue
        if len(parts) != 2:
            raise MalformedLine(f"expected 'i j', got {line!r}", lineno)
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise MalformedLine(f"non-integer vertex in {line!r}", lineno) from None
        if i == j:
            raise SelfLoop(f"self-loop at vertex {i}", lineno)
        if i < 1 or j < 1 or (n_header is not None and max(i, j) > n_header):
            raise IndexOutOfRange(f"vertex index in {line!r} outside 1..{n_header or 'n'}", lineno)
        key = (min(i, j), max(i, j))
        if key in seen:
            raise DuplicateEdge(f"edge {key[0]} {key[1]} already given on line {seen[key]}", lineno)
        seen[key] = lineno
        pairs.append((key[0], key[1], lineno))

    if n_header is None:
        if not pairs:
            raise GraphParseError("no edges and no 'n' header")
        n = max(j for _, j, _ in pairs)
    else:
        n = n_header
    edges = tuple((i, j) for i, j, _ in pairs)
    if not _is_connected(n, edges):
        raise Disconnected(f"graph on {n} vertices is not connected", pairs[-1][2] if pairs else None)
    return SparsityGraph(n, edges)


def connected_graphs(n: int) -> list[SparsityGraph]:
    """All connected simple graphs on the labelled vertex set ``{1..n}``."""
    all_pairs = list(itertools.combinations(range(1, n + 1), 2))
    out = []
    for mask in range(1 << len(all_pairs)):
        edges = tuple(p for b, p in enumerate(all_pairs) if mask >> b & 1)
        if _is_connected(n, edges):
            out.append(SparsityGraph(n, edges))
    return out


# ---------------------------------------------------------------------------
# spectra


def _exact(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    try:
        # str() of a float gives the shortest decimal that round-trips
        return Fraction(Decimal(str(value).strip()))
    except InvalidOperation:
        raise ValueError(f"not a decimal number: {value!r}") from None


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalue data ``lambda_1..lambda_n``; ``exact`` keeps the parsed decimals."""

    exact: tuple[Fraction, ...]
    mode: LieType

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(float(v) for v in self.exact)

    def __len__(self) -> int:
        return len(self.exact)


def validate_spectrum(values: Sequence, mode: LieType | str) -> Spectrum:
    """Check genericity by exact comparison of the parsed decimals.

    Type A needs pairwise distinct values; type D additionally needs them
    nonzero and distinct in absolute value.
    """
    mode = LieType(mode)
    exact = tuple(_exact(v) for v in values)
    if not exact:
        raise ValueError("empty spectrum")
    if len(set(exact)) != len(exact):
        raise NotGeneric("repeat", ", ".join(str(v) for v in exact))
    if mode is LieType.D:
        if any(v == 0 for v in exact):
            raise NotGeneric("zero")
        if len({abs(v) for v in exact}) != len(exact):
            raise NotGeneric("abs-repeat", ", ".join(str(v) for v in exact))
    return Spectrum(exact, mode)


def parse_lambda(text: str, mode: LieType | str) -> Spectrum:
    """Comma-separated decimals, as given on the command line."""
    parts = [p for p in text.replace(" ", "").split(",") if p]
    return validate_spectrum(parts, mode)


# ---------------------------------------------------------------------------
# labels


def permutations(n: int) -> list[Permutation]:
    """All permutations of ``1..n`` (one-line notation), lexicographic."""
    return list(itertools.permutations(range(1, n + 1)))


def sign_vectors(n: int) -> list[SignVector]:
    """All of ``Z_2^n`` in binary order, first coordinate most significant."""
    return list(itertools.product((0, 1), repeat=n))


def parity(s: SignVector) -> int:
    return sum(s) % 2


def enumerate_labels(n: int, mode: LieType | str) -> list:
    """Canonical vertex labels: ``n!`` permutations for type A, ``2^n n!``
    pairs ``(sigma, s)`` for type D (permutation-major)."""
    mode = LieType(mode)
    if n < 1:
        raise ValueError("n must be positive")
    perms = permutations(n)
    if mode is LieType.A:
        return perms
    signs = sign_vectors(n)
    return [(p, s) for p in perms for s in signs]


def transpose(sigma: Permutation, i: int, j: int) -> Permutation:
    """``sigma . (i j)``: swap the images at positions ``i`` and ``j``."""
    out = list(sigma)
    out[i - 1], out[j - 1] = out[j - 1], out[i - 1]
    return tuple(out)


def format_permutation(sigma: Permutation) -> str:
    sep = "" if len(sigma) < 10 else ","
    return sep.join(str(v) for v in sigma)


def format_signs(s: SignVector) -> str:
    return "".join(str(b) for b in s)
