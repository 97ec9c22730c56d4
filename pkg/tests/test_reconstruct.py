import numpy as np
import pytest

import lorsurf as ls
import lorsurf.minkowski as mk
from lorsurf.surfaces import SurfaceJet2, fundamental_forms, jets_from_mesh

from conftest import enneper1_chart


def interior_forms(mesh, u, v):
    jets = jets_from_mesh(mesh, u, v)
    inner = SurfaceJet2(**{k: getattr(jets, k)[1:-1, 1:-1] for k in
                           ("x", "x_u", "x_v", "x_uu", "x_uv", "x_vv")})
    return fundamental_forms(inner)


def constant_chart(F0, H0, n=61, eps=(1, 1), base=(0, 0)):
    g = np.linspace(0.0, 1.0, n)
    return ls.Chart(u_grid=g, v_grid=g, F=np.full((n, n), F0), H=np.full((n, n), H0),
                    u0_index=base[0], v0_index=base[1],
                    eps1=eps[0], eps2=eps[1]).validate()


# -- initial frames -------------------------------------------------------------

def test_standard_frame_F0_2():
    st = ls.initial_frame(2.0)
    np.testing.assert_allclose(st.Y, [-1.0, 1.0, 0.0])
    assert mk.inner(st.X, st.Y) == 2.0
    assert mk.inner(st.X, st.X) == 0.0 and mk.inner(st.Y, st.Y) == 0.0
    assert mk.det3(st.X, st.Y, st.l) == 2.0


def test_standard_frame_F0_half():
    st = ls.initial_frame(0.5)
    np.testing.assert_allclose(st.Y, [-0.25, 0.25, 0.0])
    assert np.isclose(mk.inner(st.X, st.Y), 0.5)


def test_custom_frame_validation():
    with pytest.raises(ls.InvalidFrameError):
        ls.initial_frame(2.0, X=[1.0, 0.0, 0.0], Y=[-1.0, 1.0, 0.0], l=[0.0, 0.0, 1.0])
    with pytest.raises(ls.InvalidFrameError):
        ls.initial_frame(-1.0)
    with pytest.raises(ls.InvalidFrameError):
        ls.initial_frame(2.0, X=[1.0, 1.0, 0.0])  # partial custom seed
    # a proper motion of the standard seed is a valid seed
    B = ls.boost(0.3)
    st = ls.initial_frame(2.0)
    ok = ls.initial_frame(2.0, X=B @ st.X, Y=B @ st.Y, l=B @ st.l, x=[1.0, 2.0, 3.0])
    np.testing.assert_allclose(ok.x, [1.0, 2.0, 3.0])
    # negatively oriented frame rejected
    with pytest.raises(ls.InvalidFrameError):
        ls.initial_frame(2.0, X=st.Y, Y=st.X, l=st.l)


# -- reconstruction of the corpus surfaces ----------------------------------------

def test_cylinder_reconstruction_matches_corpus():
    n = 81
    g = np.linspace(0.0, 1.0, n)
    chart = ls.reference_chart("cylinder", g, g)
    res = ls.reconstruct(chart)
    assert not res.natural_warning
    fd = interior_forms(res.mesh, g, g)
    h = g[1] - g[0]
    assert np.max(np.abs(fd.F - 2.0)) <= 2 * h**2
    for coeff, want in ((fd.L, 1.0), (fd.M, 1.0), (fd.N, 1.0)):
        assert np.max(np.abs(coeff - want)) <= 2 * h**2
    U, V = np.meshgrid(g, g, indexing="ij")
    corpus_mesh = ls.get("cylinder").position(U, V)
    rep = ls.congruence_check(res.mesh, corpus_mesh, g, g, tol=1e-4)
    assert rep.verdict is ls.CongruenceVerdict.CONGRUENT


def test_hyperbolic_cylinder_reconstruction():
    n = 81
    g = np.linspace(0.0, 1.0, n)
    chart = ls.reference_chart("hyperbolic_cylinder", g, g)
    res = ls.reconstruct(chart)
    fd = interior_forms(res.mesh, g, g)
    h = g[1] - g[0]
    assert np.max(np.abs(fd.L + 1.0)) <= 2 * h**2
    assert np.max(np.abs(fd.M - 1.0)) <= 2 * h**2
    assert np.max(np.abs(fd.N + 1.0)) <= 2 * h**2


def test_enneper_round_trip():
    n = 61
    chart = enneper1_chart(n)
    res = ls.reconstruct(chart)
    h = 1.0 / (n - 1)
    assert res.form_mismatch.f_max <= 5 * h**2
    assert res.form_mismatch.h_max <= 5 * h**2
    assert res.form_mismatch.e_max <= 5 * h**2
    assert res.form_mismatch.g_max <= 5 * h**2


def test_invariant_drift_is_rk4_order():
    drifts = []
    for n in (61, 121):
        res = ls.reconstruct(enneper1_chart(n))
        drifts.append(res.max_invariant_drift)
    assert drifts[0] / drifts[1] >= 12.0


def test_seed_equivariance():
    n = 61
    g = np.linspace(0.0, 1.0, n)
    chart = ls.reference_chart("cylinder", g, g)
    res1 = ls.reconstruct(chart)
    st = ls.initial_frame(2.0)
    A = ls.boost(0.8) @ ls.spatial_rotation(0.5)
    seed2 = ls.FrameState(X=A @ st.X, Y=A @ st.Y, l=A @ st.l,
                          x=np.array([2.0, -1.0, 0.5]))
    res2 = ls.reconstruct(chart, seed=seed2)
    rep = ls.congruence_check(res1.mesh, res2.mesh, g, g, tol=1e-8)
    assert rep.verdict is ls.CongruenceVerdict.CONGRUENT


def test_seed_must_match_chart_F0():
    chart = constant_chart(2.0, 0.5, n=11)
    wrong = ls.initial_frame(3.0)
    with pytest.raises(ls.InvalidFrameError):
        ls.reconstruct(chart, seed=wrong)


# -- integrability diagnostics ------------------------------------------------------

def test_planted_defect_keeps_compat_residual_large():
    for n in (41, 81):
        bad = constant_chart(2.1, 0.5, n=n)
        with pytest.warns(UserWarning):
            res = ls.reconstruct(bad)
        assert res.natural_warning
        assert np.isclose(res.natural_max_abs, 0.1025, atol=1e-12)
        assert res.max_compat >= 1e-3
        good = ls.reconstruct(constant_chart(2.0, 0.5, n=n))
        h = 1.0 / (n - 1)
        # cylinder truncation terms cancel for d_v X - d_u Y; the l probe
        # carries the usual central-difference error (h^2 / 6) |l_uuu|
        assert good.max_compat <= 1e-10
        assert good.max_compat_l <= h**2


def test_compat_shrinks_for_consistent_chart():
    values = [ls.reconstruct(enneper1_chart(n)).max_compat for n in (61, 121)]
    # order >= 2 (here the truncation terms cancel and RK4 order shows)
    assert ls.convergence_order(values[0], values[1]) >= 1.9


def test_transpose_probe():
    g = np.linspace(0.0, 1.0, 41)
    chart = ls.reference_chart("cylinder", g, g)
    res = ls.reconstruct(chart, transpose_probe=True)
    assert res.transpose_diff <= 1e-10
    with pytest.warns(UserWarning):
        bad = ls.reconstruct(constant_chart(2.1, 0.5, n=41), transpose_probe=True)
    assert bad.transpose_diff >= 1e-3


def test_abort_on_F_spline_undershoot():
    u = np.linspace(0.0, 6.0, 7)
    F = np.tile(np.array([1.0, 1.0, 1.0, 60.0, 1.0, 1.0, 1.0])[:, None], (1, 7))
    chart = ls.Chart(u_grid=u, v_grid=u, F=F, H=np.zeros((7, 7)),
                     u0_index=0, v0_index=0, eps1=1, eps2=1).validate()
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        with pytest.raises(ls.ReconstructionAbort):
            ls.reconstruct(chart)


# -- CMC pair and minimal reconstruction ---------------------------------------------

def test_cmc_pair_cylinders():
    n = 81
    g = np.linspace(0.0, 1.0, n)
    res_p, res_m = ls.cmc_pair(np.zeros((n, n)), 0.5, g, g)
    assert (res_p.eps1, res_p.eps2) == (1, 1)
    assert (res_m.eps1, res_m.eps2) == (-1, -1)
    fd_p = interior_forms(res_p.mesh, g, g)
    fd_m = interior_forms(res_m.mesh, g, g)
    tol = 1e-4
    assert np.max(np.abs(fd_p.L - 1.0)) <= tol and np.max(np.abs(fd_p.N - 1.0)) <= tol
    assert np.max(np.abs(fd_m.L + 1.0)) <= tol and np.max(np.abs(fd_m.N + 1.0)) <= tol
    assert np.max(np.abs(fd_p.M - 1.0)) <= tol and np.max(np.abs(fd_m.M - 1.0)) <= tol
    rep = ls.congruence_check(res_p.mesh, res_m.mesh, g, g, tol=tol)
    assert rep.verdict is ls.CongruenceVerdict.DISTINCT


def test_cmc_pair_negative_H_flips_M():
    n = 41
    g = np.linspace(0.0, 1.0, n)
    res_p, res_m = ls.cmc_pair(np.zeros((n, n)), -0.5, g, g)
    fd_p = interior_forms(res_p.mesh, g, g)
    assert np.max(np.abs(fd_p.M + 1.0)) <= 1e-3   # M = F H = -1
    assert np.max(np.abs(fd_p.H + 0.5)) <= 1e-3


def test_cmc_pair_rejects_degenerate():
    g = np.linspace(0.0, 1.0, 11)
    with pytest.raises(ls.DegeneracyError):
        ls.cmc_pair(np.ones((11, 11)), 1.0, g, g)


def test_cmc_pair_rejects_zero_H():
    g = np.linspace(0.0, 1.0, 11)
    with pytest.raises(ValueError):
        ls.cmc_pair(np.zeros((11, 11)), 0.0, g, g)


def test_minimal_from_K_enneper1():
    n = 81
    u = np.linspace(1.0, 2.0, n)
    v = np.linspace(-1.0, 0.0, n)
    U, V = np.meshgrid(u, v, indexing="ij")
    res = ls.minimal_from_K(-4.0 / (U - V) ** 4, u, v)
    assert (res.eps1, res.eps2) == (1, 1)
    h = 1.0 / (n - 1)
    assert res.form_mismatch.f_max <= 5 * h**2
    rep = ls.congruence_check(res.mesh, ls.get("enneper1").position(U, V), u, v,
                              tol=50 * h**2)
    assert rep.verdict is ls.CongruenceVerdict.CONGRUENT


def test_minimal_from_K_enneper2():
    n = 81
    u = np.linspace(1.0, 2.0, n)
    U, V = np.meshgrid(u, u, indexing="ij")
    res = ls.minimal_from_K(4.0 / (U + V) ** 4, u, u)
    assert (res.eps1, res.eps2) == (1, -1)
    rep = ls.congruence_check(res.mesh, ls.get("enneper2").position(U, V), u, u,
                              tol=50 / (n - 1) ** 2)
    assert rep.verdict is ls.CongruenceVerdict.CONGRUENT


def test_minimal_from_K_refuses_invalid_K():
    g = np.linspace(0.0, 1.0, 11)
    K = np.full((11, 11), -1.0)    # minimal residual is identically 1
    with pytest.raises(ls.NaturalEquationError):
        ls.minimal_from_K(K, g, g)
    with pytest.warns(UserWarning):
        res = ls.minimal_from_K(K, g, g, force=True)
    assert res.natural_warning


# -- congruence loads ------------------------------------------------------------------

def test_congruence_boosted_mesh():
    g = np.linspace(0.0, 1.0, 41)
    U, V = np.meshgrid(g, g, indexing="ij")
    mesh = ls.get("cylinder").position(U, V)
    A = ls.boost(1.2) @ ls.spatial_rotation(0.7)
    moved = mesh @ A.T + np.array([5.0, -3.0, 1.0])
    rep = ls.congruence_check(mesh, moved, g, g, tol=1e-8)
    assert rep.verdict is ls.CongruenceVerdict.CONGRUENT


def test_congruence_reflection_is_non_proper():
    g = np.linspace(0.0, 1.0, 41)
    U, V = np.meshgrid(g, g, indexing="ij")
    mesh = ls.get("cylinder").position(U, V)
    reflected = mesh @ np.diag([-1.0, 1.0, 1.0])
    rep = ls.congruence_check(mesh, reflected, g, g, tol=1e-8)
    assert rep.verdict is ls.CongruenceVerdict.NON_PROPER


def test_congruence_pair_members_differ():
    g = np.linspace(0.0, 1.0, 41)
    U, V = np.meshgrid(g, g, indexing="ij")
    a = ls.get("cylinder").position(U, V)
    b = ls.get("hyperbolic_cylinder").position(U, V)
    rep = ls.congruence_check(a, b, g, g, tol=1e-4)
    assert rep.verdict is ls.CongruenceVerdict.DISTINCT
    # F agrees (up to FD truncation) but M does not flip with L, N:
    # neither proper nor non-proper
    assert rep.mismatch["F"] <= 1e-3
    assert rep.mismatch["L"] > 1.0 and rep.mismatch["N"] > 1.0
    assert rep.mismatch_flipped["M"] > 1.0
