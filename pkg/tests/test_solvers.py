import itertools
import math

import numpy as np
import pytest

from conftest import rng_for, swap_matrix
from qxor.budget import SolverBudget
from qxor.games import (
    OwcStrategy,
    QuantumXorGame,
    associated_map,
    bias_of,
    chsh,
    diagonal_game,
    product_state_game,
    random_game,
    swap_game,
)
from qxor.solvers import (
    beta_entangled,
    beta_entangled_schedule,
    beta_owc,
    beta_owc_schedule,
    beta_owq,
    beta_product,
    hierarchy_report,
    owq_witness,
    pi1cb_bounds,
    pi1o_exact,
)

BUDGET = SolverBudget(restarts=6, max_sweeps=120, seed=11)


def diagonal_sign_oracle(M) -> float:
    """Best product bias of a diagonal game by exhausting sign observables;
    diagonal games only see the observable diagonals, whose extreme points
    are signs."""
    M = np.asarray(M, dtype=float)
    n, m = M.shape
    best = -np.inf
    for s in itertools.product((-1, 1), repeat=n):
        for t in itertools.product((-1, 1), repeat=m):
            best = max(best, float(np.einsum("i,ij,j->", s, M, t)))
    return best


def test_beta_owq_gallery():
    assert beta_owq(swap_game(2)) == pytest.approx(1.0, abs=1e-12)
    assert beta_owq(swap_game(3)) == pytest.approx(1.0, abs=1e-12)
    assert beta_owq(chsh()) == pytest.approx(1.0, abs=1e-12)
    rng = rng_for("owq-ps")
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    rho_a = a @ a.conj().T
    rho_a /= np.trace(rho_a).real
    assert beta_owq(product_state_game(rho_a, np.eye(3) / 3)) == pytest.approx(1.0, abs=1e-10)


def test_owq_witness_attains_trace_norm():
    g = random_game(2, 2, seed=21)
    x = owq_witness(g)
    assert np.trace(g.G @ x).real == pytest.approx(beta_owq(g), abs=1e-10)


def test_beta_product_chsh_matches_sign_oracle():
    oracle = diagonal_sign_oracle(np.array([[1.0, 1.0], [1.0, -1.0]]) / 4)
    assert oracle == pytest.approx(0.5, abs=1e-12)
    res = beta_product(chsh(), BUDGET)
    assert res.interval.lower == pytest.approx(oracle, abs=1e-6)


def test_beta_product_product_state_and_swap():
    rng = rng_for("bp-states")
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    rho_a = a @ a.conj().T
    rho_a /= np.trace(rho_a).real
    res = beta_product(product_state_game(rho_a, np.eye(2) / 2), BUDGET)
    assert res.interval.lower == pytest.approx(1.0, abs=1e-8)
    # contractions satisfy |tr(AB)| <= n, attained at the identity pair
    for n in (2, 3):
        res = beta_product(swap_game(n), BUDGET)
        assert res.interval.lower == pytest.approx(1.0 / n, abs=1e-6)


def test_beta_product_upper_routes():
    res = beta_product(chsh(), BUDGET)
    assert res.interval.upper <= 1.0 + 1e-12
    if res.assisted_stabilized:
        assert res.interval.upper == pytest.approx(
            min(1.0, math.sqrt(2) * res.assisted_norm_estimate), abs=1e-9
        )


def test_beta_entangled_chsh_tsirelson():
    res = beta_entangled(chsh(), 2, 2, BUDGET)
    assert res.interval.lower >= math.sqrt(2) / 2 - 1e-4
    # the standard minimizer argument caps correlations at sqrt(2)/2
    assert res.interval.lower <= math.sqrt(2) / 2 + 1e-6


def test_beta_entangled_trivial_ancilla_matches_product():
    g = random_game(2, 2, seed=33)
    ent = beta_entangled(g, 1, 1, BUDGET)
    prod = beta_product(g, BUDGET)
    assert ent.interval.lower == pytest.approx(prod.interval.lower, abs=1e-7)


def test_beta_entangled_product_state_game():
    rng = rng_for("be-ps")
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    rho_a = a @ a.conj().T
    rho_a /= np.trace(rho_a).real
    res = beta_entangled(product_state_game(rho_a, np.eye(2) / 2), 2, 2, BUDGET)
    assert res.interval.lower == pytest.approx(1.0, abs=1e-8)


def test_beta_owc_d1_equals_product_shared_seeds():
    for seed in (1, 2, 3):
        g = random_game(2, 2, seed=seed)
        budget = SolverBudget(restarts=4, max_sweeps=80, seed=5 * seed)
        assert (
            beta_owc(g, 1, budget).interval.lower
            == beta_product(g, budget).interval.lower
        )


def test_beta_owc_chsh_measure_and_forward():
    # explicit protocol: Alice measures her basis, forwards the index, and
    # answers +1; Bob answers the sign of the coefficient row
    g = chsh()
    e_plus = np.zeros((2, 2, 2), dtype=complex)
    e_plus[0, 0, 0] = 1.0
    e_plus[1, 1, 1] = 1.0
    e_minus = np.zeros((2, 2, 2), dtype=complex)
    m_signs = np.sign(np.array([[1.0, 1.0], [1.0, -1.0]]))
    obs = np.stack([np.diag(m_signs[k]).astype(complex) for k in range(2)])
    protocol = OwcStrategy(2, e_plus, e_minus, obs)
    assert bias_of(g, protocol) == pytest.approx(1.0, abs=1e-12)
    res = beta_owc(g, 2, BUDGET)
    assert res.interval.lower >= 1 - 1e-6
    assert res.interval.lower <= 1 + 1e-9


def test_beta_owc_swap_warm_start_dominance():
    for n in (2, 3):
        g = swap_game(n)
        prod = beta_product(g, BUDGET)
        owc = beta_owc(g, 1, BUDGET)
        assert owc.interval.lower >= prod.interval.lower - 1e-12
        assert owc.interval.lower >= 1.0 / n - 1e-6


def test_beta_owc_monotone_in_messages():
    g = random_game(2, 2, seed=44)
    results = beta_owc_schedule(g, (1, 2, 4), BUDGET)
    lows = [r.interval.lower for r in results]
    assert all(lows[i] <= lows[i + 1] + 1e-8 for i in range(len(lows) - 1))


def test_beta_entangled_monotone_in_ancillas():
    g = random_game(2, 2, seed=45)
    results = beta_entangled_schedule(g, ((1, 1), (2, 2), (3, 3)), BUDGET)
    lows = [r.interval.lower for r in results]
    assert all(lows[i] <= lows[i + 1] + 1e-8 for i in range(len(lows) - 1))


def test_all_lower_bounds_below_owq():
    for seed in range(6):
        g = random_game(2, 2, seed=100 + seed)
        owq = beta_owq(g)
        small = SolverBudget(restarts=3, max_sweeps=60, seed=seed)
        assert beta_product(g, small).interval.lower <= owq + 1e-8
        assert beta_entangled(g, 2, 2, small).interval.lower <= owq + 1e-8
        assert beta_owc(g, 2, small).interval.lower <= owq + 1e-8


def test_claim_sqrt2_consistency():
    # the associated-map norm sits between the sign bias and sqrt(2) times it
    for seed in range(20):
        g = random_game(2, 2, seed=200 + seed)
        res = beta_product(g, SolverBudget(restarts=50, max_sweeps=150, seed=seed))
        herm = res.interval.lower
        cplx = res.assisted_norm_estimate
        assert herm <= cplx + 1e-9
        assert cplx <= math.sqrt(2) * herm + 5e-3


def test_owc_lower_vs_known_summing_values():
    # gallery families with analytically known (1, cb)-summing values: the
    # one-way bias may undershoot them by at most the factor four
    budget = SolverBudget(restarts=5, max_sweeps=100, seed=77)
    for n in (2, 3):
        g = swap_game(n)
        known = 1.0 / n  # transpose kernel scaled to unit trace norm
        owc = beta_owc_schedule(g, (1, 2), budget)
        best = max(r.interval.lower for r in owc)
        assert best >= known / 4 - 1e-6
    M = np.array([[0.3, -0.2], [0.1, 0.25]])
    g = diagonal_game(M)
    known = float(np.abs(M).sum())
    owc = beta_owc_schedule(g, (1, 2), budget)
    best = max(r.interval.lower for r in owc)
    assert best >= known / 4 - 1e-6


def test_swap_family_no_communication_advantage():
    # for the swap family the one-way-classical and entangled witnesses both
    # settle at the product value 1/n: messages buy nothing here
    budget = SolverBudget(restarts=5, max_sweeps=100, seed=19)
    for n in (2, 3):
        g = swap_game(n)
        owc = beta_owc_schedule(g, (1, 2, n), budget)
        ent = beta_entangled_schedule(g, ((1, 1), (2, 2)), budget)
        best_owc = max(r.interval.lower for r in owc)
        assert best_owc == pytest.approx(1.0 / n, abs=1e-6)
        assert ent[-1].interval.lower == pytest.approx(1.0 / n, abs=1e-6)


def test_pi1o_values():
    for n in (2, 3):
        tau = associated_map(swap_matrix(n), n, n)
        assert pi1o_exact(tau) == pytest.approx(n * n, abs=1e-8)
    g = random_game(2, 2, seed=7)
    assert pi1o_exact(g) == pytest.approx(beta_owq(g), abs=1e-12)
    M = np.array([[0.3, -0.2], [0.1, 0.25]])
    assert pi1o_exact(diagonal_game(M)) == pytest.approx(np.abs(M).sum(), abs=1e-10)


def test_pi1cb_transpose_bracket():
    for n in (2, 3):
        tau = associated_map(swap_matrix(n), n, n)
        res = pi1cb_bounds(tau, (1, 2), BUDGET)
        assert res.interval.lower >= n - 1e-6
        assert res.interval.upper <= n * n + 1e-8


def test_pi1cb_diagonal_reaches_mass():
    M = np.array([[0.3, -0.2], [0.1, 0.25]])
    g = diagonal_game(M)
    res = pi1cb_bounds(g, (1, g.n), BUDGET)
    mass = float(np.abs(M).sum())
    assert res.interval.lower >= mass - 1e-6
    assert res.interval.upper >= mass - 1e-10
    assert res.interval.lower <= res.interval.upper + 1e-9


def test_pi1cb_zero_game():
    g = QuantumXorGame(1, 1, np.zeros((1, 1)))
    res = pi1cb_bounds(g, (1, 2), SolverBudget(restarts=2, max_sweeps=30, seed=0))
    assert res.interval.lower == pytest.approx(0.0, abs=1e-12)
    assert res.interval.upper == pytest.approx(0.0, abs=1e-12)


def test_hierarchy_report_small():
    games = [(f"g{k}", random_game(2, 2, seed=300 + k)) for k in range(3)]
    small = SolverBudget(restarts=3, max_sweeps=60, seed=9)
    rep = hierarchy_report(games, small, d_schedule=(1, 2), ancilla_schedule=((1, 1), (2, 2)))
    assert rep.violations == ()
    assert len(rep.rows) == 3
    assert [r.game_id for r in rep.rows] == sorted(r.game_id for r in rep.rows)
    for row in rep.rows:
        assert row.beta_product.lower <= row.beta_owq + 1e-8
        assert row.pi1cb.lower <= row.pi1cb.upper + 1e-9


def test_hierarchy_report_empty():
    rep = hierarchy_report([], BUDGET)
    assert rep.rows == ()
    assert rep.max_ratio == 0.0
