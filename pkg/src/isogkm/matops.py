"""Matrix-level checks on isospectral skew-symmetric matrices.

A ``2n x 2n`` real skew-symmetric matrix is read as an ``n x n`` grid of
``2 x 2`` blocks. The torus ``T^n`` acts by conjugation with block-diagonal
rotations ``R_k = [[cos t_k, sin t_k], [-sin t_k, cos t_k]]``, ``A -> R^T A R``.
Matrices are plain ``numpy`` arrays; skew-symmetry is restored exactly after
every floating-point operation by rebuilding from the strict upper triangle.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .gkm import GKMGraph, build_type_D, format_weight, normalize_weight, root
from .sparsity import LieType, Permutation, SignVector, SparsityGraph, Spectrum, transpose

Label = tuple[Permutation, SignVector]


@dataclass(frozen=True)
class NumericProfile:
    """Tolerances shared by every numerical check (double precision,
    ``n <= 4``, ``|A| <= 10``)."""

    fixed_point: float = 1e-10
    shape: float = 1e-12
    spectrum: float = 1e-9
    pfaffian_rel: float = 1e-9
    quadric: float = 1e-12
    circle: float = 1e-10
    speed_residual: float = 1e-6


PROFILE = NumericProfile()


class OffSphere(ValueError):
    pass


class NotHermitian(ValueError):
    pass


class NotShaped(ValueError):
    pass


class AmbiguousSpeed(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# basic constructions


def skew(A: np.ndarray) -> np.ndarray:
    """Exactly skew-symmetric matrix with the strict upper triangle of ``A``."""
    U = np.triu(A, 1)
    return U - U.T


def _lam(lam) -> np.ndarray:
    return np.asarray(lam.values if isinstance(lam, Spectrum) else lam, dtype=float)


def block(A: np.ndarray, i: int, j: int) -> np.ndarray:
    """The ``2 x 2`` block at 1-based block position ``(i, j)``."""
    return A[2 * i - 2 : 2 * i, 2 * j - 2 : 2 * j]


def fixed_point_matrix(sigma: Permutation, s: SignVector, lam) -> np.ndarray:
    """Block-diagonal ``A_{sigma,s}``; block ``k`` is ``[[0, w], [-w, 0]]``
    with ``w = (-1)^{s_k} lambda_{sigma(k)}``."""
    vals = _lam(lam)
    n = len(sigma)
    A = np.zeros((2 * n, 2 * n))
    for k in range(n):
        w = -vals[sigma[k] - 1] if s[k] else vals[sigma[k] - 1]
        A[2 * k, 2 * k + 1] = w
        A[2 * k + 1, 2 * k] = -w
    return A


def diagonal_values(A: np.ndarray) -> np.ndarray:
    """Upper-right entry of each diagonal block (the moment coordinates)."""
    return np.array([A[2 * k, 2 * k + 1] for k in range(A.shape[0] // 2)])


def rotation(angles: Sequence[float]) -> np.ndarray:
    n = len(angles)
    R = np.zeros((2 * n, 2 * n))
    for k, phi in enumerate(angles):
        c, s = math.cos(phi), math.sin(phi)
        R[2 * k : 2 * k + 2, 2 * k : 2 * k + 2] = [[c, s], [-s, c]]
    return R


def conjugate(A: np.ndarray, angles: Sequence[float]) -> np.ndarray:
    """Torus action ``R^T A R``."""
    R = rotation(angles)
    return skew(R.T @ A @ R)


def gamma_mask(g: SparsityGraph) -> np.ndarray:
    """Boolean ``2n x 2n`` mask of the entries a Gamma-shaped matrix may use."""
    n = g.n
    allowed = np.eye(n, dtype=bool)
    for i, j in g.edges:
        allowed[i - 1, j - 1] = allowed[j - 1, i - 1] = True
    return np.kron(allowed, np.ones((2, 2), dtype=bool))


def shape_residual(A: np.ndarray, g: SparsityGraph) -> float:
    return float(np.max(np.abs(A[~gamma_mask(g)]), initial=0.0))


def random_shaped(g: SparsityGraph, rng: np.random.Generator, scale: float = 3.0) -> np.ndarray:
    """Random Gamma-shaped skew-symmetric matrix (not isospectral)."""
    A = rng.uniform(-scale, scale, (2 * g.n, 2 * g.n)) * gamma_mask(g)
    return skew(A)


# ---------------------------------------------------------------------------
# spectra and Pfaffians


def spectrum_moduli(A: np.ndarray) -> np.ndarray:
    """Sorted ``|lambda_k|``, each twice, from the symmetric matrix ``-A^2``."""
    A = np.asarray(A)
    ev = np.linalg.eigvalsh(-(A @ A))
    return np.sqrt(np.clip(ev, 0.0, None))


def spectrum_distance(A: np.ndarray, lam) -> float:
    """Max deviation between the spectrum of ``A`` and ``{+-i lambda}``."""
    want = np.sort(np.repeat(np.abs(_lam(lam)), 2))
    return float(np.max(np.abs(spectrum_moduli(A) - want)))


def batch_spectrum_distance(As: np.ndarray, lam) -> np.ndarray:
    want = np.sort(np.repeat(np.abs(_lam(lam)), 2))
    ev = np.linalg.eigvalsh(-np.einsum("bij,bjk->bik", As, As))
    return np.max(np.abs(np.sqrt(np.clip(ev, 0.0, None)) - want), axis=1)


def pfaffian(A: np.ndarray) -> float:
    """Pfaffian via Householder reduction to skew-tridiagonal form.

    Each reflector ``P`` is orthogonal with ``det P = -1``; since
    ``pf(P^T A P) = det(P) pf(A)`` the sign flips are tracked explicitly, and
    the Pfaffian of the reduced matrix is the product of its entries
    ``(0,1), (2,3), ...``.
    """
    A = np.array(A, dtype=float)
    m = A.shape[0]
    if A.shape != (m, m):
        raise ValueError("square matrix expected")
    if m % 2:
        return 0.0
    A = skew(A)
    pf = 1.0
    for k in range(m - 2):
        x = A[k + 1 :, k].copy()
        tail = float(np.dot(x[1:], x[1:]))
        if tail == 0.0:
            alpha = x[0]
        else:
            norm = math.sqrt(x[0] ** 2 + tail)
            alpha = -norm if x[0] > 0 else norm
            v = x
            v[0] -= alpha
            v /= np.linalg.norm(v)
            # A <- P A P with P = I - 2 v v^T acting on rows/cols k+1..
            sub = A[k + 1 :, k:]
            sub -= 2.0 * np.outer(v, v @ sub)
            A[k + 1 :, k:] = sub
            side = A[k:, k + 1 :]
            side -= 2.0 * np.outer(side @ v, v)
            A[k:, k + 1 :] = side
            pf = -pf
        A[k + 2 :, k] = 0.0
        A[k, k + 2 :] = 0.0
        A[k + 1, k] = alpha
        A[k, k + 1] = -alpha
    for k in range(0, m, 2):
        pf *= A[k, k + 1]
    return float(pf)


# ---------------------------------------------------------------------------
# invariant spheres


class SphereCase(str, enum.Enum):
    """Whether the far endpoint keeps ``s`` (``SameSign``) or flips ``s_i`` and
    ``s_j`` (``FlippedSign``)."""

    SAME_SIGN = "SameSign"
    FLIPPED_SIGN = "FlippedSign"


class BlockShape(str, enum.Enum):
    """Off-diagonal block shapes: ``Uplus`` is ``[[a, b], [b, -a]]``,
    ``Uminus`` is ``[[a, b], [-b, a]]``."""

    UPLUS = "Uplus"
    UMINUS = "Uminus"


def sphere_shape(case: SphereCase, s: SignVector, pair: tuple[int, int]) -> BlockShape:
    """Shape of the off-diagonal block along the sphere.

    Along a ``Uminus`` sphere the two diagonal values are exchanged,
    ``(u, v) -> (v, u)``; along a ``Uplus`` sphere they are exchanged and
    negated, ``(u, v) -> (-v, -u)``. Which one joins ``(sigma, s)`` to the
    neighbour of the given case depends on whether ``s_i = s_j``.
    """
    i, j = pair
    same_sign = SphereCase(case) is SphereCase.SAME_SIGN
    return BlockShape.UMINUS if same_sign == (s[i - 1] == s[j - 1]) else BlockShape.UPLUS


@dataclass(frozen=True)
class SphereFamilyPoint:
    case: SphereCase
    pair: tuple[int, int]
    sigma: Permutation
    s: SignVector
    lam: tuple[float, ...]
    a: float
    b: float
    x: float

    @property
    def shape(self) -> BlockShape:
        return sphere_shape(self.case, self.s, self.pair)

    def endpoint_values(self) -> tuple[float, float]:
        """Diagonal values ``(u, v)`` of ``A_{sigma,s}`` at the block pair."""
        i, j = self.pair
        u = self.lam[self.sigma[i - 1] - 1] * (-1 if self.s[i - 1] else 1)
        v = self.lam[self.sigma[j - 1] - 1] * (-1 if self.s[j - 1] else 1)
        return u, v

    def quadric(self) -> float:
        """``a^2 + b^2 + x (x - c)``: ``c = u + v`` on ``Uminus`` spheres,
        ``c = u - v`` on ``Uplus`` spheres."""
        u, v = self.endpoint_values()
        c = u + v if self.shape is BlockShape.UMINUS else u - v
        return self.a ** 2 + self.b ** 2 + self.x * (self.x - c)

    def quadric_constant(self) -> float:
        """Value of :meth:`quadric` at the endpoint ``a = b = 0, x = u``."""
        u, v = self.endpoint_values()
        return -u * v if self.shape is BlockShape.UMINUS else u * v

    def center_radius(self) -> tuple[float, float]:
        u, v = self.endpoint_values()
        if self.shape is BlockShape.UMINUS:
            return (u + v) / 2, abs(u - v) / 2
        return (u - v) / 2, abs(u + v) / 2


def sphere_point_matrix(p: SphereFamilyPoint, tol: float = PROFILE.quadric) -> np.ndarray:
    """The matrix of a point on the invariant sphere through ``A_{sigma,s}``.

    Off the block pair it agrees with ``A_{sigma,s}``; on rows and columns of
    ``{i, j}`` the diagonal values are ``x`` and ``y`` and the off-diagonal
    block has the shape of :func:`sphere_shape`.
    """
    scale = 1.0 + sum(v * v for v in p.lam)
    resid = abs(p.quadric() - p.quadric_constant())
    if resid > tol * scale:
        raise OffSphere(f"point off its sphere by {resid:.3e}")
    A = fixed_point_matrix(p.sigma, p.s, p.lam)
    i, j = p.pair
    u, v = p.endpoint_values()
    if p.shape is BlockShape.UMINUS:
        y = u + v - p.x
        X = np.array([[p.a, p.b], [-p.b, p.a]])
    else:
        y = p.x - u + v
        X = np.array([[p.a, p.b], [p.b, -p.a]])
    A[2 * i - 2, 2 * i - 1], A[2 * i - 1, 2 * i - 2] = p.x, -p.x
    A[2 * j - 2, 2 * j - 1], A[2 * j - 1, 2 * j - 2] = y, -y
    A[2 * i - 2 : 2 * i, 2 * j - 2 : 2 * j] = X
    return skew(A)


def sample_sphere(
    sigma: Permutation,
    s: SignVector,
    lam,
    pair: tuple[int, int],
    case: SphereCase,
    count: int,
    rng: np.random.Generator,
) -> list[SphereFamilyPoint]:
    """Uniform random points of one sphere family."""
    lam = tuple(_lam(lam))
    proto = SphereFamilyPoint(SphereCase(case), pair, tuple(sigma), tuple(s), lam, 0.0, 0.0, 0.0)
    center, radius = proto.center_radius()
    g = rng.normal(size=(count, 3))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return [
        SphereFamilyPoint(proto.case, pair, proto.sigma, proto.s, lam, radius * a, radius * b, center + radius * x)
        for a, b, x in g
    ]


def identify_fixed_point(A: np.ndarray, lam, tol: float = 1e-9) -> Optional[Label]:
    """Label ``(sigma, s)`` of a block-diagonal matrix, or ``None``."""
    vals = _lam(lam)
    n = len(vals)
    D = np.zeros_like(A)
    for k in range(n):
        D[2 * k : 2 * k + 2, 2 * k : 2 * k + 2] = A[2 * k : 2 * k + 2, 2 * k : 2 * k + 2]
    if np.max(np.abs(A - D)) > tol:
        return None
    w = diagonal_values(A)
    sigma, s = [], []
    for wk in w:
        hits = [m for m in range(n) if abs(abs(wk) - abs(vals[m])) <= tol]
        if len(hits) != 1:
            return None
        sigma.append(hits[0] + 1)
        s.append(int((wk < 0) != (vals[hits[0]] < 0)))
    if sorted(sigma) != list(range(1, n + 1)):
        return None
    return tuple(sigma), tuple(s)


def sphere_endpoints(sigma, s, lam, pair, case) -> tuple[Label, Label]:
    """Both fixed points on a sphere family, found from its matrices at
    ``a = b = 0`` and identified by their diagonal blocks."""
    lam = tuple(_lam(lam))
    proto = SphereFamilyPoint(SphereCase(case), pair, tuple(sigma), tuple(s), lam, 0.0, 0.0, 0.0)
    center, radius = proto.center_radius()
    out = []
    for x in (center - radius, center + radius):
        p = SphereFamilyPoint(proto.case, pair, proto.sigma, proto.s, lam, 0.0, 0.0, x)
        label = identify_fixed_point(sphere_point_matrix(p, tol=1e-9), lam)
        if label is None:
            raise OffSphere("sphere pole is not a fixed point")
        out.append(label)
    start = (tuple(sigma), tuple(s))
    if out[1] == start:
        out.reverse()
    return out[0], out[1]


def predicted_neighbour(sigma, s, pair, case) -> Label:
    i, j = pair
    s2 = list(s)
    if SphereCase(case) is SphereCase.FLIPPED_SIGN:
        s2[i - 1] ^= 1
        s2[j - 1] ^= 1
    return transpose(tuple(sigma), i, j), tuple(s2)


# ---------------------------------------------------------------------------
# Hermitian embedding and the diagonal circle


def embed_hermitian(H: np.ndarray, g: SparsityGraph | None = None, tol: float = 1e-12) -> np.ndarray:
    """Real ``2n x 2n`` form of ``i H``: entry ``p + iq`` becomes
    ``[[p, -q], [q, p]]``."""
    H = np.asarray(H, dtype=complex)
    n = H.shape[0]
    if H.shape != (n, n) or np.max(np.abs(H - H.conj().T), initial=0.0) > tol:
        raise NotHermitian("matrix is not Hermitian")
    if g is not None:
        if g.n != n:
            raise NotShaped(f"matrix is {n}x{n}, graph has n={g.n}")
        allowed = gamma_mask(g)[::2, ::2]
        if np.max(np.abs(H[~allowed]), initial=0.0) > tol:
            raise NotShaped("matrix has entries outside the sparsity pattern")
    K = 1j * H
    out = np.zeros((2 * n, 2 * n))
    out[0::2, 0::2] = K.real
    out[0::2, 1::2] = -K.imag
    out[1::2, 0::2] = K.imag
    out[1::2, 1::2] = K.real
    return skew(out)


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    Z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def _is_ordered_path(g: SparsityGraph) -> bool:
    return g.edges == tuple((k, k + 1) for k in range(1, g.n))


def _jacobi_from_spectrum(lam: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Real symmetric tridiagonal matrix with spectrum ``lam`` (Lanczos on
    ``diag(lam)`` from a random start vector)."""
    n = len(lam)
    q = np.abs(rng.normal(size=n)) + 0.1
    q /= np.linalg.norm(q)
    Lam = np.diag(lam)
    Q = np.zeros((n, n))
    alpha, beta = np.zeros(n), np.zeros(n - 1)
    Q[:, 0] = q
    for k in range(n):
        w = Lam @ Q[:, k]
        alpha[k] = Q[:, k] @ w
        w -= alpha[k] * Q[:, k]
        if k:
            w -= beta[k - 1] * Q[:, k - 1]
        w -= Q[:, : k + 1] @ (Q[:, : k + 1].T @ w)
        if k < n - 1:
            beta[k] = np.linalg.norm(w)
            Q[:, k + 1] = w / beta[k]
    return np.diag(alpha) + np.diag(beta, 1) + np.diag(beta, -1)


def sample_hermitian(g: SparsityGraph, lam, rng: np.random.Generator) -> np.ndarray:
    """A random Gamma-shaped Hermitian matrix with spectrum ``lam``.

    Complete graphs use a Haar-random unitary orbit and ordered paths a
    Jacobi matrix with random phases; any other graph falls back to a random
    point of an invariant 2-sphere of a random edge.
    """
    vals = _lam(lam)
    n = g.n
    if g.num_edges == n * (n - 1) // 2:
        U = random_unitary(n, rng)
        H = U @ np.diag(vals) @ U.conj().T
    elif _is_ordered_path(g):
        J = _jacobi_from_spectrum(vals, rng)
        phases = np.exp(1j * rng.uniform(0, 2 * np.pi, n))
        H = phases[:, None] * J * phases.conj()[None, :]
    else:
        sigma = rng.permutation(n) + 1
        H = np.diag(vals[sigma - 1]).astype(complex)
        i, j = g.edges[rng.integers(len(g.edges))]
        U = random_unitary(2, rng)
        idx = [i - 1, j - 1]
        H[np.ix_(idx, idx)] = U @ np.diag(vals[sigma[idx] - 1]) @ U.conj().T
    H = (H + H.conj().T) / 2
    mask = gamma_mask(g)[::2, ::2]
    H[~mask] = 0.0
    return H


def is_diagonal_circle_fixed(
    A: np.ndarray, trials: int = 8, rng: np.random.Generator | None = None, tol: float = PROFILE.circle
) -> bool:
    """Does conjugation by ``trials`` random elements ``(t, ..., t)`` leave ``A``
    within ``tol`` entrywise?"""
    rng = rng or np.random.default_rng(0)
    n = A.shape[0] // 2
    for t in rng.uniform(0, 2 * np.pi, trials):
        if np.max(np.abs(conjugate(A, [t] * n) - A)) > tol:
            return False
    return True


def random_orbit_point(sigma, s, lam, rng: np.random.Generator) -> np.ndarray:
    """``Q^T A_{sigma,s} Q`` for Haar-random ``Q`` in ``SO(2n)``; Gamma-shaped
    only for the complete graph."""
    n = len(sigma)
    Z = rng.normal(size=(2 * n, 2 * n))
    Q, R = np.linalg.qr(Z)
    Q = Q * np.sign(np.diag(R))
    if np.linalg.det(Q) < 0:
        Q[:, 0] = -Q[:, 0]
    return skew(Q.T @ fixed_point_matrix(sigma, s, lam) @ Q)


# ---------------------------------------------------------------------------
# tangent weights


def _unit_block(shape: BlockShape) -> np.ndarray:
    return np.eye(2) if shape is BlockShape.UMINUS else np.diag([1.0, -1.0])


def _block_coordinate(X: np.ndarray, shape: BlockShape) -> tuple[complex, float]:
    """Complex coordinate of a block and its distance from the shape.

    ``[[a, b], [-b, a]]`` acts on ``C = R^2`` as multiplication by ``a - ib``;
    ``[[a, b], [b, -a]]`` acts as ``z -> (a + ib) conj(z)``.
    """
    if shape is BlockShape.UMINUS:
        z = complex(X[0, 0], -X[0, 1])
        off = max(abs(X[0, 0] - X[1, 1]), abs(X[0, 1] + X[1, 0]))
    else:
        z = complex(X[0, 0], X[0, 1])
        off = max(abs(X[0, 0] + X[1, 1]), abs(X[0, 1] - X[1, 0]))
    return z, off


def extract_tangent_weight(
    sigma: Permutation,
    s: SignVector,
    lam,
    pair: tuple[int, int],
    shape: BlockShape | str,
    m: Sequence[int],
    samples: int = 64,
    tol: float = PROFILE.speed_residual,
) -> int:
    """Angular speed of a block perturbation of ``A_{sigma,s}`` along the
    one-parameter subgroup ``t -> (m_1 t, ..., m_n t)``.

    The result equals ``<weight, m>`` for the weight of the chosen summand.
    """
    shape = BlockShape(shape)
    i, j = pair
    A = fixed_point_matrix(sigma, s, lam)
    E = np.zeros_like(A)
    E[2 * i - 2 : 2 * i, 2 * j - 2 : 2 * j] = _unit_block(shape)
    A = skew(A + E)
    thetas = np.linspace(0, 2 * np.pi, samples, endpoint=False)
    zs, worst_off = [], 0.0
    for th in thetas:
        X = block(conjugate(A, [mk * th for mk in m]), i, j)
        z, off = _block_coordinate(X, shape)
        zs.append(z)
        worst_off = max(worst_off, off)
    zs = np.array(zs)
    phase = np.unwrap(np.angle(zs / zs[0]))
    slope = float(np.polyfit(thetas, phase, 1)[0])
    k = int(round(slope))
    resid = float(np.max(np.abs(zs - zs[0] * np.exp(1j * k * thetas))))
    if resid > tol or worst_off > tol:
        raise AmbiguousSpeed(f"speed fit residual {max(resid, worst_off):.3e} (slope {slope:.4f})")
    return k


def tangent_weight(sigma, s, lam, pair, shape) -> tuple[int, ...]:
    """Weight vector of a summand, one coordinate per circle factor."""
    n = len(sigma)
    return tuple(
        extract_tangent_weight(sigma, s, lam, pair, shape, [1 if k == c else 0 for k in range(n)])
        for c in range(n)
    )


def expected_tangent_weights(g: SparsityGraph) -> list[tuple[int, ...]]:
    return sorted(root(g.n, i, j, plus) for i, j in g.edges for plus in (True, False))


# ---------------------------------------------------------------------------
# verification suite


@dataclass
class Claim:
    name: str
    samples: int
    max_residual: float
    tolerance: float
    passed: bool
    detail: str = ""

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class VerificationReport:
    graph: SparsityGraph
    lam: tuple[float, ...]
    seed: int
    claims: list[Claim] = field(default_factory=list)
    findings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.claims)

    def first_failure(self) -> Optional[Claim]:
        return next((c for c in self.claims if not c.passed), None)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "seed": self.seed,
            "n": self.graph.n,
            "gamma": [list(e) for e in self.graph.edges],
            "lambda": list(self.lam),
            "claims": [c.to_dict() for c in self.claims],
            "findings": list(self.findings),
        }


def _claim(name, residuals, tol, detail="", passed=None) -> Claim:
    residuals = list(residuals)
    worst = max(residuals, default=0.0)
    ok = worst <= tol if passed is None else passed
    return Claim(name, len(residuals), float(worst), tol, bool(ok), detail)


def edge_weight_audit(gr: GKMGraph, lam) -> tuple[int, list[str]]:
    """Compare each type D edge's axial value with the weight measured on the
    invariant sphere that realises it. Returns (agreements, disagreements)."""
    agree, disagree = 0, []
    cache: dict = {}
    for e in gr.edges:
        (sigma, s), (tau, s2) = gr.vertices[e.u], gr.vertices[e.v]
        i, j = e.pair
        case = SphereCase.SAME_SIGN if s[i - 1] == s2[i - 1] else SphereCase.FLIPPED_SIGN
        shape = sphere_shape(case, s, e.pair)
        key = (e.pair, shape)
        if key not in cache:
            cache[key] = normalize_weight(tangent_weight(sigma, s, lam, e.pair, shape))
        measured = cache[key]
        if measured == e.weight:
            agree += 1
        else:
            disagree.append(
                f"{gr.label_text(e.u)} -- {gr.label_text(e.v)}: axial {format_weight(e.weight)}, "
                f"sphere {format_weight(measured)}"
            )
    return agree, disagree


def verify(
    g: SparsityGraph,
    lam: Spectrum,
    samples: int = 100,
    seed: int = 0,
    profile: NumericProfile = PROFILE,
    sphere_samples: Optional[int] = None,
) -> VerificationReport:
    """Run every matrix-level check for one sparsity graph and spectrum.

    ``samples`` sets the torus, conjugation and Hermitian sample counts;
    ``sphere_samples`` (default: same) is the count per invariant sphere.
    """
    if lam.mode is not LieType.D:
        raise ValueError("verification needs a type D spectrum")
    rng = np.random.default_rng(seed)
    vals = lam.values
    n = g.n
    gr = build_type_D(g, lam)
    report = VerificationReport(g, vals, seed)
    claims = report.claims

    # fixed points
    res = []
    for sigma, s in gr.vertices:
        A = fixed_point_matrix(sigma, s, vals)
        for t in rng.uniform(0, 2 * np.pi, (samples, n)):
            res.append(np.max(np.abs(conjugate(A, t) - A)))
    claims.append(_claim("fixed points are torus-invariant", res, profile.fixed_point))

    res = [spectrum_distance(fixed_point_matrix(sg, s, vals), vals) for sg, s in gr.vertices]
    claims.append(_claim("fixed points have spectrum +-i lambda", res, profile.spectrum))

    # conjugation invariants on random shaped matrices
    sk, sh, sp, pfr = [], [], [], []
    for _ in range(samples):
        A = random_shaped(g, rng)
        B = conjugate(A, rng.uniform(0, 2 * np.pi, n))
        sk.append(np.max(np.abs(B + B.T)))
        sh.append(shape_residual(B, g))
        sp.append(np.max(np.abs(spectrum_moduli(A) - spectrum_moduli(B))))
        pa = pfaffian(A)
        pfr.append(abs(pfaffian(B) - pa) / max(abs(pa), 1e-300))
    claims.append(_claim("conjugation keeps skew-symmetry", sk, 0.0))
    claims.append(_claim("conjugation keeps Gamma-shape", sh, profile.shape))
    claims.append(_claim("conjugation keeps spectrum", sp, profile.spectrum))
    claims.append(_claim("conjugation keeps Pfaffian", pfr, profile.pfaffian_rel))

    res = []
    for _ in range(samples):
        A = random_shaped(g, rng)
        d = np.linalg.det(A)
        res.append(abs(pfaffian(A) ** 2 - d) / max(abs(d), 1e-300))
    claims.append(_claim("pf^2 = det", res, profile.pfaffian_rel))

    # sphere families, one per edge, started from its lower endpoint
    spec_res, quad_res, shape_res = [], [], []
    sign_bad, endpoint_bad = 0, []
    for e in gr.edges:
        (sigma, s), other = gr.vertices[e.u], gr.vertices[e.v]
        i, j = e.pair
        case = SphereCase.SAME_SIGN if s[i - 1] == other[1][i - 1] else SphereCase.FLIPPED_SIGN
        ends = sphere_endpoints(sigma, s, vals, e.pair, case)
        if ends != ((sigma, s), other) or predicted_neighbour(sigma, s, e.pair, case) != other:
            endpoint_bad.append(gr.label_text(e.u))
        pts = sample_sphere(sigma, s, vals, e.pair, case, sphere_samples or samples, rng)
        mats = np.array([sphere_point_matrix(p) for p in pts])
        spec_res.extend(batch_spectrum_distance(mats, vals))
        quad_res.extend(abs(p.quadric() - p.quadric_constant()) for p in pts)
        shape_res.extend(shape_residual(M, g) for M in mats)
        sign0 = np.sign(pfaffian(fixed_point_matrix(sigma, s, vals)))
        sign_bad += sum(np.sign(pfaffian(M)) != sign0 for M in mats)
    claims.append(_claim("sphere points keep spectrum", spec_res, profile.spectrum))
    scale = 1.0 + float(np.sum(np.square(vals)))
    claims.append(_claim("sphere quadric is constant", [r / scale for r in quad_res], profile.quadric))
    claims.append(_claim("sphere points are Gamma-shaped", shape_res, profile.shape))
    claims.append(
        _claim("Pfaffian sign constant on spheres", [float(sign_bad)], 0.0, f"{sign_bad} sign changes")
    )
    claims.append(
        _claim(
            "sphere poles are the predicted GKM neighbours",
            [float(len(endpoint_bad))],
            0.0,
            f"{len(gr.edges) - len(endpoint_bad)}/{len(gr.edges)} edges match",
        )
    )

    # Hermitian embedding
    circ, spec_h, signs = [], [], set()
    for _ in range(samples):
        H = sample_hermitian(g, vals, rng)
        A = embed_hermitian(H, g)
        spec_h.append(spectrum_distance(A, vals))
        circ.append(0.0 if is_diagonal_circle_fixed(A, 4, rng, profile.circle) else 1.0)
        signs.add(int(np.sign(pfaffian(A))))
    claims.append(_claim("embedded Hermitian samples keep spectrum", spec_h, profile.spectrum))
    claims.append(_claim("embedded Hermitian samples are diagonal-circle fixed", circ, 0.0))
    claims.append(
        _claim("embedded Hermitian samples share one Pfaffian sign", [float(len(signs) - 1)], 0.0, f"signs {sorted(signs)}")
    )

    # tangent weights
    want = expected_tangent_weights(g)
    bad = []
    for sigma, s in gr.vertices:
        got = sorted(
            normalize_weight(tangent_weight(sigma, s, vals, pair, shape))
            for pair in g.edges
            for shape in BlockShape
        )
        if got != want:
            bad.append((sigma, s))
    claims.append(
        _claim(
            "tangent weights match the per-vertex multiset",
            [float(len(bad))],
            0.0,
            f"{len(gr.vertices) - len(bad)}/{len(gr.vertices)} fixed points",
        )
    )

    agree, disagree = edge_weight_audit(gr, vals)
    report.findings.append(
        f"axial value matches the sphere's measured weight on {agree}/{len(gr.edges)} edges"
        + (f"; first mismatch {disagree[0]}" if disagree else "")
    )
    return report
