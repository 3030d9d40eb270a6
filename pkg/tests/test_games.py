import numpy as np
import pytest

from conftest import gue, matrix_unit, random_herm_contraction, rng_for, swap_matrix
from qxor.config import ValidationError
from qxor.games import (
    Episode,
    EntangledStrategy,
    OwcStrategy,
    ProductStrategy,
    QuantumXorGame,
    associated_map,
    bias_of,
    chsh,
    diagonal_game,
    from_episodes,
    hadamard_game,
    hadamard_matrix,
    mab_game,
    mab_tensor,
    product_state_game,
    random_game,
    swap_game,
    to_episodes,
)
from qxor.linalg import trace_norm


def random_density(d, rng):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def random_owc(n, m, d, rng):
    blocks = []
    for _ in range(2 * d):
        x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        blocks.append(x @ x.conj().T + 0.05 * np.eye(n))
    s = sum(blocks)
    w, u = np.linalg.eigh(s)
    s_inv_half = (u * (1 / np.sqrt(w))) @ u.conj().T
    blocks = [s_inv_half @ b @ s_inv_half for b in blocks]
    obs = np.stack([random_herm_contraction(m, rng) for _ in range(d)])
    return OwcStrategy(d, np.stack(blocks[:d]), np.stack(blocks[d:]), obs)


def test_from_episodes_single():
    rng = rng_for("ep-single")
    rho = random_density(4, rng)
    g = from_episodes(2, 2, [Episode(1.0, 1, rho)])
    assert np.abs(g.G - rho).max() < 1e-12


def test_from_episodes_two_orthogonal_pure_states():
    psi = np.zeros(4, dtype=complex)
    psi[0] = 1.0
    phi = np.zeros(4, dtype=complex)
    phi[3] = 1.0
    g = from_episodes(
        2,
        2,
        [
            Episode(0.5, 1, np.outer(psi, psi.conj())),
            Episode(0.5, -1, np.outer(phi, phi.conj())),
        ],
    )
    expected = (np.outer(psi, psi.conj()) - np.outer(phi, phi.conj())) / 2
    assert np.abs(g.G - expected).max() < 1e-14
    assert trace_norm(g.G) == pytest.approx(1.0, abs=1e-12)


def test_from_episodes_random_reconstruction():
    rng = rng_for("ep-recon")
    eps = []
    probs = rng.dirichlet(np.ones(4))
    for x in range(4):
        eps.append(Episode(float(probs[x]), 1 if x % 2 == 0 else -1, random_density(4, rng)))
    g = from_episodes(2, 2, eps)
    direct = sum(e.c * e.p * e.rho for e in eps)
    assert np.abs(g.G - direct).max() < 1e-12


def test_from_episodes_rejects_bad_probabilities():
    rng = rng_for("ep-bad")
    rho = random_density(4, rng)
    with pytest.raises(ValidationError):
        from_episodes(2, 2, [Episode(0.7, 1, rho)])


def test_to_episodes_pure_density_single_episode():
    psi = np.array([1.0, 1.0, 0.0, 1.0], dtype=complex)
    psi /= np.linalg.norm(psi)
    g = QuantumXorGame(2, 2, np.outer(psi, psi.conj()))
    eps = to_episodes(g)
    assert len(eps) == 1
    assert eps[0].c == 1
    assert eps[0].p == pytest.approx(1.0, abs=1e-12)


def test_to_episodes_padding_for_subnormalized_game():
    rng = rng_for("ep-pad")
    h = gue(4, rng)
    g = QuantumXorGame(2, 2, 0.5 * h / trace_norm(h))
    eps = to_episodes(g)
    assert sum(e.p for e in eps) == pytest.approx(1.0, abs=1e-12)
    rebuilt = from_episodes(2, 2, eps)
    assert np.abs(rebuilt.G - g.G).max() < 1e-10


def test_episode_round_trip_random_games():
    for trial in range(100):
        g = random_game(2, 2, seed=trial)
        rebuilt = from_episodes(2, 2, to_episodes(g))
        assert np.abs(rebuilt.G - g.G).max() < 1e-10


def test_associated_map_swap_is_transpose():
    t = associated_map(swap_matrix(3), 3, 3)
    for i in range(3):
        for j in range(3):
            e = matrix_unit(3, i, j)
            assert np.abs(t.apply(e) - e.T).max() < 1e-13


def test_associated_map_maximally_entangled_is_identity():
    g = sum(np.kron(matrix_unit(2, i, j), matrix_unit(2, i, j)) for i in range(2) for j in range(2))
    t = associated_map(g, 2, 2)
    rng = rng_for("amap-id")
    x = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    assert np.abs(t.apply(x) - x).max() < 1e-13


def test_associated_map_product_kernel():
    rng = rng_for("amap-prod")
    p = gue(2, rng)
    q = gue(3, rng)
    t = associated_map(np.kron(p, q), 2, 3)
    x = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    assert np.abs(t.apply(x) - np.trace(p @ x.T) * q).max() < 1e-12


def test_associated_map_basis_reconstruction():
    g = random_game(2, 3, seed=7)
    t = associated_map(g)
    rebuilt = np.zeros_like(np.asarray(g.G))
    for i in range(2):
        for j in range(2):
            d = t.apply(matrix_unit(2, i, j))
            for k in range(3):
                for l in range(3):
                    rebuilt[i * 3 + k, j * 3 + l] = d[k, l]
    assert np.abs(rebuilt - g.G).max() < 1e-12


def test_bias_product_state_identity_observables():
    rng = rng_for("bias-prod")
    g = product_state_game(random_density(2, rng), random_density(3, rng))
    s = ProductStrategy(np.eye(2), np.eye(3))
    assert bias_of(g, s) == pytest.approx(1.0, abs=1e-10)


def test_bias_swap_identity_observables():
    for n in (2, 3):
        g = swap_game(n)
        s = ProductStrategy(np.eye(n), np.eye(n))
        assert bias_of(g, s) == pytest.approx(1.0 / n, abs=1e-12)


def test_bias_owc_matches_episode_form():
    rng = rng_for("bias-owc-episodes")
    g = random_game(2, 2, seed=11)
    eps = to_episodes(g)
    s = random_owc(2, 2, 2, rng)
    direct = bias_of(g, s)
    episode_form = 0.0
    for e in eps:
        corr = 0.0
        for k in range(s.d):
            corr += np.trace(np.kron(s.alice_observables[k], s.observables[k]) @ e.rho).real
        episode_form += e.p * e.c * corr
    assert direct == pytest.approx(episode_form, abs=1e-10)


def test_bias_owc_d1_equals_product():
    rng = rng_for("bias-owc-d1")
    g = random_game(2, 3, seed=3)
    a = random_herm_contraction(2, rng)
    b = random_herm_contraction(3, rng)
    prod = bias_of(g, ProductStrategy(a, b))
    owc = OwcStrategy(
        1,
        np.stack([(np.eye(2) + a) / 2]),
        np.stack([(np.eye(2) - a) / 2]),
        np.stack([b]),
    )
    assert bias_of(g, owc) == pytest.approx(prod, abs=1e-14)


def test_bias_entangled_trivial_ancilla_reduces_to_product():
    rng = rng_for("bias-ent-triv")
    g = random_game(2, 2, seed=5)
    a = random_herm_contraction(2, rng)
    b = random_herm_contraction(2, rng)
    prod = bias_of(g, ProductStrategy(a, b))
    ent = EntangledStrategy(2, 2, 1, 1, np.array([1.0]), a, b)
    assert bias_of(g, ent) == pytest.approx(prod, abs=1e-12)


def test_bias_bounded_by_trace_norm_over_all_variants():
    count = 0
    for trial in range(170):
        rng = rng_for("bias-bound", trial)
        g = random_game(2, 2, seed=1000 + trial)
        tn = trace_norm(g.G)
        s_p = ProductStrategy(random_herm_contraction(2, rng), random_herm_contraction(2, rng))
        assert abs(bias_of(g, s_p)) <= tn + 1e-9
        psi = rng.normal(size=4) + 1j * rng.normal(size=4)
        psi /= np.linalg.norm(psi)
        s_e = EntangledStrategy(
            2, 2, 2, 2, np.kron(psi[:2] / np.linalg.norm(psi[:2]), psi[2:] / np.linalg.norm(psi[2:])),
            random_herm_contraction(4, rng), random_herm_contraction(4, rng),
        )
        assert abs(bias_of(g, s_e)) <= tn + 1e-9
        s_o = random_owc(2, 2, 2, rng)
        assert abs(bias_of(g, s_o)) <= tn + 1e-9
        count += 3
    assert count >= 500


def test_gallery_swap_trace_norm():
    assert trace_norm(swap_game(2).G) == pytest.approx(1.0, abs=1e-12)
    assert trace_norm(swap_game(3).G) == pytest.approx(1.0, abs=1e-12)


def test_gallery_chsh_diagonal():
    g = chsh()
    assert np.abs(np.asarray(g.G) - np.diag([0.25, 0.25, 0.25, -0.25])).max() < 1e-15
    assert trace_norm(g.G) == pytest.approx(1.0, abs=1e-12)


def test_gallery_mab_unit_pair():
    e11 = matrix_unit(2, 0, 0)
    g = mab_game(e11, e11)
    assert np.abs(g.G - np.kron(e11, e11)).max() < 1e-15
    assert trace_norm(g.G) == pytest.approx(1.0, abs=1e-12)


def test_mab_tensor_basis_action():
    rng = rng_for("mab-basis")
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    b = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    t = associated_map(mab_tensor(a, b), 3, 3)
    for i in range(3):
        for j in range(3):
            e = matrix_unit(3, i, j)
            assert np.abs(t.apply(e) - a @ e @ b).max() < 1e-12


def test_mab_tensor_trace_norm_is_s2_product():
    rng = rng_for("mab-tn")
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    b = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    tn = trace_norm(mab_tensor(a, b))
    assert tn == pytest.approx(np.linalg.norm(a, "fro") * np.linalg.norm(b, "fro"), rel=1e-12)


def test_mab_game_rejects_large_factors():
    with pytest.raises(ValidationError):
        mab_game(2 * np.eye(2), np.eye(2))


def test_diagonal_game_rejects_oversized_mass():
    with pytest.raises(ValidationError):
        diagonal_game([[0.8, 0.4], [0.0, 0.0]])


def test_hadamard_game_orders():
    for n in (1, 2, 4):
        g = hadamard_game(n)
        assert trace_norm(g.G) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValidationError):
        hadamard_game(3)
    h = hadamard_matrix(4)
    assert np.abs(h @ h.T - 4 * np.eye(4)).max() == 0


def test_random_game_determinism_and_normalization():
    g1 = random_game(2, 3, seed=42)
    g2 = random_game(2, 3, seed=42)
    assert np.array_equal(g1.G, g2.G)
    assert trace_norm(g1.G) == pytest.approx(1.0, abs=1e-12)
    g_scalar = random_game(1, 1, seed=0)
    assert abs(abs(g_scalar.G[0, 0]) - 1.0) < 1e-12


def test_owc_strategy_validation():
    rng = rng_for("owc-valid")
    # instrument blocks that do not sum to the identity
    bad = np.stack([np.eye(2, dtype=complex) * 0.3])
    with pytest.raises(ValidationError):
        OwcStrategy(1, bad, bad, np.stack([np.eye(2, dtype=complex)]))
    # a block with a clearly negative eigenvalue
    neg = np.stack([np.diag([1.0, -0.5]).astype(complex)])
    rest = np.stack([np.eye(2, dtype=complex) - neg[0]])
    with pytest.raises(ValidationError):
        OwcStrategy(1, neg, rest, np.stack([np.eye(2, dtype=complex)]))


def test_entangled_strategy_validation():
    with pytest.raises(ValidationError):
        EntangledStrategy(2, 2, 1, 1, np.array([0.5]), np.eye(2), np.eye(2))
    with pytest.raises(ValidationError):
        EntangledStrategy(2, 2, 2, 2, np.eye(4)[0], np.eye(4) * 2, np.eye(4))


def test_product_strategy_rejects_expansion():
    with pytest.raises(ValidationError):
        ProductStrategy(1.5 * np.eye(2), np.eye(2))


def test_episode_validation():
    rho = np.eye(4) / 4
    with pytest.raises(ValidationError):
        Episode(0.5, 2, rho)
    with pytest.raises(ValidationError):
        Episode(0.5, 1, np.eye(4))  # trace four, not one


def test_game_rejects_oversized_trace_norm():
    with pytest.raises(ValidationError):
        QuantumXorGame(2, 2, np.eye(4))


def test_game_rejects_non_hermitian():
    g = np.zeros((4, 4), dtype=complex)
    g[0, 1] = 0.3
    with pytest.raises(ValidationError):
        QuantumXorGame(2, 2, g)
