"""Isospectral double-bracket flow on Gamma-shaped skew-symmetric matrices.

``dA/dt = [A, [A, N]]`` with ``N`` block-diagonal, block ``k`` equal to
``nu_k [[0, 1], [-1, 0]]``. Along a trajectory ``<A, N>`` (sum of entrywise
products) decreases at rate ``|[A, N]|^2`` and the equilibria with distinct
``nu_k > 0`` are exactly the block-diagonal matrices ``A_{sigma,s}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .matops import fixed_point_matrix, gamma_mask, pfaffian, skew, spectrum_distance
from .sparsity import LieType, SparsityGraph, enumerate_labels

Label = tuple[tuple[int, ...], tuple[int, ...]]

CLASSIFY_TOL = 1e-4


class ShapeLeak(RuntimeError):
    """The bracket produced entries outside the sparsity pattern."""

    def __init__(self, leak: float, step: int):
        self.leak = leak
        self.step = step
        super().__init__(f"entries outside the pattern reached {leak:.3e} at step {step}")


class NoConvergence(RuntimeError):
    pass


@dataclass(frozen=True)
class FlowConfig:
    graph: SparsityGraph
    nu: tuple[float, ...] = ()
    step_size: float = 1e-3
    max_steps: int = 1_000_000
    convergence_tol: float = 1e-10
    leak_tol: float = 1e-8
    lyapunov_tol: float = 1e-8

    def __post_init__(self):
        nu = self.nu or tuple(float(self.graph.n - k) for k in range(self.graph.n))
        if len(nu) != self.graph.n:
            raise ValueError(f"need {self.graph.n} nu values, got {len(nu)}")
        if any(v <= 0 for v in nu) or len(set(nu)) != len(nu):
            raise ValueError("nu values must be distinct and positive")
        if self.step_size <= 0:
            raise ValueError("step size must be positive")
        object.__setattr__(self, "nu", tuple(nu))

    @property
    def target(self) -> np.ndarray:
        n = self.graph.n
        return fixed_point_matrix(tuple(range(1, n + 1)), (0,) * n, self.nu)


@dataclass(frozen=True)
class FlowResult:
    limit: np.ndarray
    classified_as: Optional[Label]
    residual: float
    steps: int
    drift_max: float
    converged: bool
    pfaffian_start: float
    pfaffian_end: float
    lyapunov_violation: float
    nearest: tuple[tuple[Label, float], ...] = field(default=())

    def to_dict(self) -> dict:
        lab = None
        if self.classified_as is not None:
            lab = {"sigma": list(self.classified_as[0]), "s": list(self.classified_as[1])}
        return {
            "classified_as": lab,
            "residual": self.residual,
            "steps": self.steps,
            "drift_max": self.drift_max,
            "converged": self.converged,
            "pfaffian_sign_start": int(np.sign(self.pfaffian_start)),
            "pfaffian_sign_end": int(np.sign(self.pfaffian_end)),
            "lyapunov_violation": self.lyapunov_violation,
            "nearest": [
                {"sigma": list(l[0]), "s": list(l[1]), "distance": d} for l, d in self.nearest
            ],
        }


def _bracket(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    return X @ Y - Y @ X


def vector_field(A: np.ndarray, N: np.ndarray) -> np.ndarray:
    return _bracket(A, _bracket(A, N))


def lyapunov(A: np.ndarray, N: np.ndarray) -> float:
    return float(np.sum(A * N))


def flow_step(A: np.ndarray, cfg: FlowConfig, step: int = 0, _mask=None, _N=None) -> np.ndarray:
    """One RK4 step, then exact skew projection and zeroing outside the
    pattern. Raises :class:`ShapeLeak` if what gets zeroed is too large."""
    N = cfg.target if _N is None else _N
    mask = gamma_mask(cfg.graph) if _mask is None else _mask
    h = cfg.step_size
    k1 = vector_field(A, N)
    k2 = vector_field(A + 0.5 * h * k1, N)
    k3 = vector_field(A + 0.5 * h * k2, N)
    k4 = vector_field(A + h * k3, N)
    B = skew(A + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4))
    leak = float(np.max(np.abs(B[~mask]), initial=0.0))
    if leak > cfg.leak_tol:
        raise ShapeLeak(leak, step)
    B[~mask] = 0.0
    return B


def nearest_fixed_points(A: np.ndarray, lam, count: int = 3) -> list[tuple[Label, float]]:
    n = A.shape[0] // 2
    out = []
    for sigma, s in enumerate_labels(n, LieType.D):
        d = float(np.max(np.abs(A - fixed_point_matrix(sigma, s, lam))))
        out.append(((sigma, s), d))
    out.sort(key=lambda t: t[1])
    return out[:count]


def run_flow(A0: np.ndarray, lam, cfg: FlowConfig, check_every: int = 10) -> FlowResult:
    """Integrate until ``|[A, [A, N]]| < convergence_tol`` or ``max_steps``.

    Spectrum drift and the Lyapunov decrease are monitored every
    ``check_every`` steps. A run that hits ``max_steps`` is returned with
    ``converged=False`` rather than raised. Shape leaks propagate.
    """
    N = cfg.target
    mask = gamma_mask(cfg.graph)
    A = skew(np.asarray(A0, dtype=float))
    pf0 = pfaffian(A)
    drift = spectrum_distance(A, lam)
    f_prev = lyapunov(A, N)
    worst_rise = 0.0
    steps = 0
    converged = False
    while True:
        if np.max(np.abs(vector_field(A, N))) < cfg.convergence_tol:
            converged = True
            break
        if steps >= cfg.max_steps:
            break
        A = flow_step(A, cfg, steps, mask, N)
        steps += 1
        f = lyapunov(A, N)
        worst_rise = max(worst_rise, f - f_prev)
        f_prev = f
        if steps % check_every == 0:
            drift = max(drift, spectrum_distance(A, lam))
    drift = max(drift, spectrum_distance(A, lam))
    near = nearest_fixed_points(A, lam)
    label, dist = near[0]
    classified = label if dist < CLASSIFY_TOL else None
    return FlowResult(
        limit=A,
        classified_as=classified,
        residual=dist,
        steps=steps,
        drift_max=drift,
        converged=converged,
        pfaffian_start=pf0,
        pfaffian_end=pfaffian(A),
        lyapunov_violation=worst_rise,
        nearest=tuple(near) if classified is None else (),
    )


def start_points(
    mode: str, g: SparsityGraph, lam, count: int, rng: np.random.Generator
) -> list[np.ndarray]:
    """Seeded isospectral starts: ``fixed``, ``sphere`` or ``embed``."""
    from . import matops
    from .gkm import build_type_D

    vals = tuple(float(v) for v in (lam.values if hasattr(lam, "values") else lam))
    out = []
    if mode == "fixed":
        labels = enumerate_labels(g.n, LieType.D)
        for k in rng.integers(len(labels), size=count):
            out.append(fixed_point_matrix(*labels[k], vals))
    elif mode == "sphere":
        gr = build_type_D(g)
        for k in rng.integers(len(gr.edges), size=count):
            e = gr.edges[k]
            (sigma, s), other = gr.vertices[e.u], gr.vertices[e.v]
            i = e.pair[0]
            case = matops.SphereCase.SAME_SIGN if s[i - 1] == other[1][i - 1] else matops.SphereCase.FLIPPED_SIGN
            p = matops.sample_sphere(sigma, s, vals, e.pair, case, 1, rng)[0]
            out.append(matops.sphere_point_matrix(p))
    elif mode == "embed":
        for _ in range(count):
            out.append(matops.embed_hermitian(matops.sample_hermitian(g, vals, rng), g))
    else:
        raise ValueError(f"unknown start mode {mode!r}")
    return out
