import numpy as np
import pytest

from isogkm import matops
from isogkm.flows import (
    FlowConfig,
    ShapeLeak,
    flow_step,
    lyapunov,
    run_flow,
    start_points,
    vector_field,
)
from isogkm.matops import SphereCase, SphereFamilyPoint, fixed_point_matrix, pfaffian, spectrum_distance
from isogkm.sparsity import SparsityGraph

K2 = SparsityGraph.complete(2)
P3 = SparsityGraph.path(3)
LAM2 = (3.0, 1.0)


def test_config_defaults_and_target():
    cfg = FlowConfig(P3)
    assert cfg.nu == (3.0, 2.0, 1.0)
    assert cfg.target[4, 5] == 1.0 and cfg.target[0, 1] == 3.0


@pytest.mark.parametrize("kw", [{"nu": (1.0, 1.0)}, {"nu": (2.0, -1.0)}, {"nu": (1.0,)}, {"step_size": 0.0}])
def test_config_rejects(kw):
    with pytest.raises(ValueError):
        FlowConfig(K2, **kw)


def test_fixed_point_is_stationary():
    cfg = FlowConfig(K2)
    for sigma, s in [((1, 2), (0, 0)), ((2, 1), (1, 0))]:
        A = fixed_point_matrix(sigma, s, LAM2)
        assert np.max(np.abs(flow_step(A, cfg) - A)) <= 1e-12


def test_lyapunov_rate():
    rng = np.random.default_rng(0)
    A = matops.random_shaped(SparsityGraph.complete(3), rng)
    N = FlowConfig(SparsityGraph.complete(3)).target
    C = A @ N - N @ A
    # d/dt <A, N> = -|[A, N]|^2
    assert np.sum(vector_field(A, N) * N) == pytest.approx(-np.sum(C * C))


def _sphere_quadric(A, p):
    i, j = p.pair
    X = A[2 * i - 2 : 2 * i, 2 * j - 2 : 2 * j]
    q = SphereFamilyPoint(p.case, p.pair, p.sigma, p.s, p.lam, X[0, 0], X[0, 1], A[2 * i - 2, 2 * i - 1])
    return q.quadric() - q.quadric_constant()


@pytest.mark.parametrize("case", list(SphereCase))
def test_sphere_trajectory_keeps_quadric_and_spectrum(case):
    rng = np.random.default_rng(3)
    p = matops.sample_sphere((1, 2), (0, 0), LAM2, (1, 2), case, 1, rng)[0]
    A = matops.sphere_point_matrix(p)
    cfg = FlowConfig(K2, step_size=1e-3)
    mask = matops.gamma_mask(K2)
    worst_q = worst_s = 0.0
    for k in range(10_000):
        A = flow_step(A, cfg, k, mask, cfg.target)
        if k % 100 == 0:
            worst_q = max(worst_q, abs(_sphere_quadric(A, p)))
            worst_s = max(worst_s, spectrum_distance(A, LAM2))
    assert worst_q <= 1e-6
    assert worst_s <= 1e-6


def test_start_at_fixed_point():
    A = fixed_point_matrix((2, 1), (0, 1), LAM2)
    r = run_flow(A, LAM2, FlowConfig(K2))
    assert r.steps == 0 and r.converged
    assert r.classified_as == ((2, 1), (0, 1))
    assert r.residual == 0.0


def test_no_convergence_is_reported():
    rng = np.random.default_rng(1)
    A = start_points("sphere", K2, LAM2, 1, rng)[0]
    r = run_flow(A, LAM2, FlowConfig(K2, max_steps=5))
    assert not r.converged and r.steps == 5
    assert r.classified_as is None
    assert len(r.nearest) == 3
    assert r.to_dict()["nearest"][0]["distance"] == r.residual


def test_sphere_starts_classify_and_keep_parity():
    rng = np.random.default_rng(2)
    for A in start_points("sphere", K2, LAM2, 5, rng):
        r = run_flow(A, LAM2, FlowConfig(K2, step_size=2e-3))
        assert r.converged and r.classified_as is not None
        assert np.sign(r.pfaffian_start) == np.sign(r.pfaffian_end)
        assert np.sign(pfaffian(fixed_point_matrix(*r.classified_as, LAM2))) == np.sign(r.pfaffian_start)
        assert r.drift_max <= 1e-5
        assert r.lyapunov_violation <= 1e-8


def test_embedded_start_on_path():
    lam = (5.0, 3.0, 1.0)
    rng = np.random.default_rng(4)
    A = start_points("embed", P3, lam, 1, rng)[0]
    r = run_flow(A, lam, FlowConfig(P3, step_size=2e-3))
    assert r.classified_as is not None


def test_generic_path_point_leaks():
    # a generic path-shaped matrix: the bracket fills the (1, 3) block
    A = matops.random_shaped(P3, np.random.default_rng(0))
    with pytest.raises(ShapeLeak) as info:
        flow_step(A, FlowConfig(P3))
    assert info.value.step == 0 and info.value.leak > 1e-8


def test_start_modes():
    rng = np.random.default_rng(0)
    lam = (5.0, 3.0, 1.0)
    for mode in ("fixed", "sphere", "embed"):
        for A in start_points(mode, P3, lam, 3, rng):
            assert matops.shape_residual(A, P3) == 0
            assert spectrum_distance(A, lam) <= 1e-9
    with pytest.raises(ValueError):
        start_points("file", P3, lam, 1, rng)


def test_lyapunov_decreases_along_steps():
    rng = np.random.default_rng(6)
    A = start_points("sphere", K2, LAM2, 1, rng)[0]
    cfg = FlowConfig(K2)
    f = [lyapunov(A, cfg.target)]
    for k in range(200):
        A = flow_step(A, cfg, k)
        f.append(lyapunov(A, cfg.target))
    assert max(np.diff(f)) <= 1e-8
