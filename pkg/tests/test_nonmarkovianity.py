import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from parabattery import (
    AmplitudePair,
    GridTooCoarseWarning,
    InitialPair,
    SearchSpec,
    SystemParams,
    TimeGrid,
    blp_measure,
    density_matrix,
    derive_constants,
    nonmarkovianity_vs_nu,
    survival_amplitude,
    trace_distance,
)
from parabattery.nonmarkovianity import (
    distinguishability_series,
    revival_intervals,
    single_excitation_trace_distance,
)

QUICK = SearchSpec(n_theta=6, n_phi=4, check_refinement=False)


def test_trace_distance_examples():
    rho = density_matrix(AmplitudePair(0.6, 0.8j))
    assert trace_distance(rho, rho) == 0.0
    assert trace_distance(np.diag([0, 1, 0, 0]), np.diag([0, 0, 1, 0])) == pytest.approx(1.0)
    # anchor from a 4x4 eigen-solve
    d = trace_distance(density_matrix(AmplitudePair(1, 0)),
                       density_matrix(AmplitudePair(2**-0.5, 2**-0.5)))
    assert d == pytest.approx(0.7071067811865477, abs=1e-15)


def test_trace_distance_dimension_mismatch():
    with pytest.raises(ValueError):
        trace_distance(np.eye(2) / 2, np.eye(4) / 4)


amp = st.complex_numbers(max_magnitude=1.0, allow_nan=False, allow_infinity=False)


@settings(max_examples=200)
@given(amp, amp, amp, amp)
def test_closed_form_matches_eigensolve(a1, a2, b1, b2):
    na, nb = abs(a1) ** 2 + abs(a2) ** 2, abs(b1) ** 2 + abs(b2) ** 2
    s = math.sqrt(max(na, nb, 1.0))
    a1, a2, b1, b2 = a1 / s, a2 / s, b1 / s, b2 / s
    ref = trace_distance(density_matrix(AmplitudePair(a1, a2)), density_matrix(AmplitudePair(b1, b2)))
    assert single_excitation_trace_distance(a1, a2, b1, b2) == pytest.approx(ref, abs=1e-12)


def test_identical_pair_gives_zero_series():
    p = SystemParams.compensated(-0.3, 50.0)
    pair = InitialPair(1.0, 0.3, 1.0, 0.3)
    assert np.all(distinguishability_series(p, pair, TimeGrid(1.0, 101)) == 0.0)


@settings(max_examples=30, deadline=None)
@given(st.tuples(*[st.floats(0, math.pi), st.floats(0, 2 * math.pi)] * 2))
def test_markovian_series_contractive(angles):
    p = SystemParams(nu=0.0, delta=0.0, rabi_ratio=0.4)
    grid = TimeGrid(30.0, 3001)
    pt = survival_amplitude(derive_constants(p), grid.times)
    # premises: real, positive, non-increasing p(t)
    assert np.all(np.abs(pt.imag) < 1e-15) and np.all(pt.real > 0)
    assert np.all(np.diff(pt.real) <= 0)
    D = distinguishability_series(p, InitialPair(*angles), grid)
    assert np.all(np.diff(D) <= 1e-14)


def test_strong_coupling_series_revives():
    p = SystemParams.compensated(-0.3, 50.0)
    D = distinguishability_series(p, InitialPair(0.0, 0.0, math.pi, 0.0), TimeGrid(0.5, 5001))
    k = np.flatnonzero((D[1:-1] < D[:-2]) & (D[1:-1] < D[2:]))
    assert k.size >= 1
    assert D[k[0] + 1:].max() > D[k[0] + 1] + 0.1


def test_revival_intervals_on_sampled_series():
    t = np.linspace(0, 10, 1001)
    D = np.abs(np.cos(t)) * np.exp(-0.1 * t)
    ivals = revival_intervals(t, D)
    assert len(ivals) == 3
    for iv in ivals:
        assert iv.gain > 0 and iv.t_end > iv.t_start
    assert revival_intervals(t, np.exp(-t)) == []


def test_blp_markovian_zero():
    res = blp_measure(SystemParams(nu=0.0, delta=0.0, rabi_ratio=0.4))
    assert res.value <= 1e-6
    assert res.n_revivals == 0 and res.grid_converged


def test_blp_value_is_sum_of_intervals():
    res = blp_measure(SystemParams.compensated(-0.45, 0.4), search=QUICK)
    assert res.value > 0
    assert res.value == pytest.approx(sum(iv.gain for iv in res.revival_intervals), abs=1e-10)


def test_blp_swap_invariance():
    p = SystemParams.compensated(-0.4, 2.0)
    grid = TimeGrid(10.0, 4001)
    pair = InitialPair(0.3, 1.0, 2.5, 4.0)
    a = distinguishability_series(p, pair, grid)
    b = distinguishability_series(p, pair.swapped(), grid)
    assert np.array_equal(a, b)


def test_blp_oscillation_onset():
    # beta^2 < 0 and the first zero of p(t) lies inside the window -> N > 0
    p = SystemParams.compensated(-0.25, 0.4)
    c = derive_constants(p)
    assert (c.lambda_prime**2 - 4 * c.deformation_factor * c.calR**2).real < 0
    grid = TimeGrid(30.0, 6000)
    pt = survival_amplitude(c, grid.times).real
    assert np.any(pt < 0)
    assert blp_measure(p, grid, QUICK).value > 0


def test_grid_too_coarse_warning():
    p = SystemParams.compensated(-0.3, 50.0)
    with pytest.warns(GridTooCoarseWarning):
        res = blp_measure(p, TimeGrid(5.0, 101), SearchSpec(n_theta=4, n_phi=2, refine=False))
    assert not res.grid_converged


def test_default_grid_quiet_on_strong_coupling():
    with warnings.catch_warnings():
        warnings.simplefilter("error", GridTooCoarseWarning)
        res = blp_measure(SystemParams.compensated(-0.3, 50.0),
                          search=SearchSpec(n_theta=4, n_phi=2, refine=False))
    assert res.value > 0


def test_scan_order_and_edge_cases():
    tpl = SystemParams(rabi_ratio=0.4)
    assert nonmarkovianity_vs_nu(tpl, []) == []
    rows = nonmarkovianity_vs_nu(tpl, [0.0], search=QUICK)
    assert len(rows) == 1 and rows[0].value == 0.0
    with pytest.raises(ValueError):
        nonmarkovianity_vs_nu(tpl, [-0.6])


def test_canonical_pair():
    pair = InitialPair(-0.2, 7.0, 3.5, -1.0).canonical()
    for th, ph in (pair.angles[:2], pair.angles[2:]):
        assert 0 <= th <= math.pi and 0 <= ph < 2 * math.pi
    a = InitialPair(-0.2, 7.0, 3.5, -1.0)
    d1 = single_excitation_trace_distance(a.first.c1, a.first.c2, a.second.c1, a.second.c2)
    b = pair
    d2 = single_excitation_trace_distance(b.first.c1, b.first.c2, b.second.c1, b.second.c2)
    assert d1 == pytest.approx(d2, abs=1e-14)
