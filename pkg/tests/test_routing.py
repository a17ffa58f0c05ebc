import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from risscatter import routing
from risscatter.array_model import ArrayGeometry, CoupledArray, dft2_matrix, dft_matrix, steering_vector
from risscatter.errors import DomainError, RouteConflictError
from risscatter.scattering import (Model, PhasedLoad, PlaneWaveSet, SwitchedDFTLoad, apply_transfer,
                                   realize_load, scatter)


def swap(i, j):
    return SwitchedDFTLoad(pairs=((i, j),))


class TestCombineRedirective:
    def test_two_swaps(self):
        S = routing.combine_redirective([swap(0, 1), swap(2, 3)])
        expected = [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]
        np.testing.assert_array_equal(S.permutation(4), expected)

    def test_single_route(self):
        r = swap(1, 3)
        np.testing.assert_array_equal(routing.combine_redirective([r]).permutation(4), r.permutation(4))

    def test_overlap_lists_ports(self):
        with pytest.raises(RouteConflictError) as exc:
            routing.combine_redirective([swap(0, 1), swap(1, 2)])
        assert exc.value.ports == [1]

    def test_empty(self):
        with pytest.raises(ValueError):
            routing.combine_redirective([])

    @given(st.integers(4, 32).flatmap(lambda m: st.tuples(st.just(m), st.permutations(range(m)))),
           st.integers(1, 4))
    def test_partial_symmetric_permutation_and_zero_error(self, m_perm, K):
        m, perm = m_perm
        K = min(K, m // 2)
        routes = [swap(perm[2 * k], perm[2 * k + 1]) for k in range(K)]
        P = routing.combine_redirective(routes).permutation(m)
        assert np.array_equal(P, P.T)
        assert set(np.unique(P)) <= {0.0, 1.0}
        assert P.sum(axis=0).max() <= 1
        assert routing.redirective_objective(routing.combine_redirective(routes), routes, m) == 0

    def test_objective_matches_full_matrices(self):
        routes = [swap(0, 5), swap(2, 3)]
        comb = routing.combine_redirective(routes)
        m = 8
        total = 0.0
        for r in routes:
            rows = sorted(r.support)
            D = realize_load(comb, m) - realize_load(r, m)
            # row restriction in the beam domain = restriction of F^H D F
            F = dft_matrix(m)
            total += np.sum(np.abs((F.conj() @ D @ F.conj())[rows]) ** 2)
        assert total == pytest.approx(0, abs=1e-25)
        assert routing.redirective_objective(comb, routes, m, restrict=False) > 0


class TestCombineReflective:
    def test_single_route(self):
        ph = np.array([0.3, -1.2, 2.9])
        np.testing.assert_allclose(routing.combine_reflective([PhasedLoad(ph)]).phases, ph, atol=1e-15)

    @given(st.floats(-np.pi, np.pi), st.floats(-np.pi, np.pi))
    def test_bisector(self, a, b):
        if abs(a - b) >= np.pi - 1e-6:
            return
        out = routing.combine_reflective([PhasedLoad([a]), PhasedLoad([b])]).phases[0]
        assert np.exp(1j * out) == pytest.approx(np.exp(1j * (a + b) / 2), abs=1e-9)

    def test_degenerate_gets_zero_phase(self):
        out = routing.combine_reflective([PhasedLoad([0.0, 0.4]), PhasedLoad([np.pi, 0.4])]).phases
        assert out[0] == 0.0 and out[1] == pytest.approx(0.4)

    def test_accepts_matrices_and_phasors(self):
        ph = np.array([0.1, 0.2])
        a = routing.combine_reflective([np.diag(np.exp(1j * ph)), np.exp(1j * ph)]).phases
        np.testing.assert_allclose(a, ph, atol=1e-15)

    @given(st.integers(0, 2**32 - 1), st.integers(1, 6))
    def test_unit_modulus(self, seed, K):
        rng = np.random.default_rng(seed)
        S = realize_load(routing.combine_reflective([PhasedLoad(rng.uniform(-np.pi, np.pi, 9)) for _ in range(K)]), 9)
        np.testing.assert_allclose(np.abs(np.diag(S)), 1, atol=1e-15)

    def test_scaled_sum_approximation(self):
        rng = np.random.default_rng(0)
        rel = []
        for _ in range(200):
            S = np.exp(1j * rng.uniform(-np.pi, np.pi, (4, 16)))
            total = S.sum(axis=0)
            L = realize_load(routing.combine_reflective(list(S)), 16).diagonal()
            rel.append(np.linalg.norm(L - total / 2) / np.linalg.norm(total))
        # i.i.d. phases: E|1 - r/sqrt(K)|^2 = 2 - sqrt(pi) gives about 0.24
        assert np.mean(rel) == pytest.approx(np.sqrt((2 - np.sqrt(np.pi)) / 4), rel=0.1)

    def test_is_closest_diagonal_unitary(self):
        rng = np.random.default_rng(1)
        S = np.exp(1j * rng.uniform(-np.pi, np.pi, (3, 8)))
        best = realize_load(routing.combine_reflective(list(S)), 8).diagonal()
        obj = lambda d: sum(np.linalg.norm(d - s) ** 2 for s in S)  # noqa: E731
        for _ in range(200):
            trial = best * np.exp(1j * rng.normal(0, 0.1, 8))
            assert obj(trial) >= obj(best) - 1e-12


class TestBeams:
    def test_beam_port_receives_its_direction(self):
        g = ArrayGeometry(4, 0.5)
        F2 = dft2_matrix(4)
        for p in routing.visible_ports(g):
            s = steering_vector(g, *routing.beam_direction(g, p))
            y = F2 @ s
            assert np.argmax(np.abs(y)) == p
            assert np.abs(y[p]) ** 2 == pytest.approx(np.sum(np.abs(y) ** 2), rel=1e-12)

    def test_invisible_beam(self):
        g = ArrayGeometry(4, 0.25)
        invisible = set(range(16)) - set(routing.visible_ports(g))
        with pytest.raises(DomainError):
            routing.beam_direction(g, invisible.pop())

    def test_port_range(self):
        with pytest.raises(DomainError):
            routing.beam_frequency(ArrayGeometry(2), 4)


class TestRouteGain:
    def test_single_route_normalized(self, coupled4):
        r = routing.beam_route(0, 15, 4)
        d_in, d_out = routing.beam_direction(coupled4.geometry, 0), routing.beam_direction(coupled4.geometry, 15)
        assert routing.route_gain(coupled4, r, d_in, d_out, reference=r) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("K", [1, 2, 3])
    def test_disjoint_redirective_unit_gain(self, coupled4, K):
        g = routing.redirective_gains(coupled4, K, np.random.default_rng(K), Model.NAIVE)
        np.testing.assert_allclose(g, 1.0, atol=1e-9)

    @pytest.mark.parametrize("K", [2, 3])
    def test_disjoint_redirective_exact_model(self, coupled4, K):
        # coupling through S_aa perturbs the naive unit gain slightly
        g = routing.redirective_gains(coupled4, K, np.random.default_rng(K), Model.EXACT)
        np.testing.assert_allclose(g, 1.0, atol=1e-2)

    def test_too_many_routes(self, coupled4):
        with pytest.raises(DomainError):
            routing.redirective_gains(coupled4, 20, np.random.default_rng(0))

    @pytest.mark.parametrize("K", [2, 4])
    def test_reflective_gain_loss(self, K):
        c = CoupledArray.from_geometry(ArrayGeometry(16, 0.5))
        g = routing.reflective_gains(c, K, 200, np.random.default_rng(K), Model.NAIVE)
        assert 0.7 / K <= g.mean() <= 1.3 / K

    def test_steering_phases_cophase(self, coupled4):
        d_in, d_out = (0.3, 0.2), (0.7, -2.0)
        ld = routing.steering_phases(coupled4, d_in, d_out)
        g = routing.raw_route_gain(coupled4, ld, d_in, d_out, Model.NAIVE)
        bound = (np.sum(np.abs(coupled4.pattern(*d_in) * coupled4.pattern(*d_out)))) ** 2
        assert g == pytest.approx(bound, rel=1e-12)


class TestLeakage:
    def test_redirective_output_confined_to_routes(self, coupled8):
        g = coupled8.geometry
        ports = routing.visible_ports(g, 0.9)
        routes = [routing.beam_route(ports[0], ports[5], 8), routing.beam_route(ports[10], ports[20], 8)]
        comb = routing.combine_redirective(routes)
        F2 = dft2_matrix(8)
        x = coupled8.pattern(*routing.beam_direction(g, ports[0]))
        beams = F2.conj() @ apply_transfer(coupled8, comb, x, Model.EXACT)
        out_ports = sorted(comb.support)
        leak = np.sum(np.abs(np.delete(beams, out_ports)) ** 2) / np.sum(np.abs(beams) ** 2)
        assert leak < 1e-20
        assert np.abs(beams[ports[5]]) ** 2 / np.sum(np.abs(beams) ** 2) > 0.99

    def test_reflective_spreads_over_all_beams(self, coupled8):
        rng = np.random.default_rng(2)
        dirs = [(routing.random_direction(rng), routing.random_direction(rng)) for _ in range(4)]
        comb = routing.combine_reflective([routing.steering_phases(coupled8, i, o) for i, o in dirs])
        F2 = dft2_matrix(8)
        beams = F2.conj() @ apply_transfer(coupled8, comb, coupled8.pattern(*dirs[0][0]), Model.EXACT)
        p = np.abs(beams) ** 2 / np.sum(np.abs(beams) ** 2)
        assert np.sort(p)[::-1][:8].sum() < 0.9

    def test_reflective_energy_accounting(self, coupled8, grid):
        rng = np.random.default_rng(1)
        ratios, gains = [], []
        for _ in range(30):
            dirs = [(routing.random_direction(rng), routing.random_direction(rng)) for _ in range(4)]
            i0 = grid.nearest(*dirs[0][0])
            d0 = (grid.theta[i0], grid.phi[i0])
            wave = PlaneWaveSet.on_grid(grid, [i0], [1.0])
            single = routing.steering_phases(coupled8, d0, dirs[0][1])
            comb = routing.combine_reflective([single] + [routing.steering_phases(coupled8, i, o) for i, o in dirs[1:]])
            ratios.append(scatter(coupled8, comb, wave, grid).power() / scatter(coupled8, single, wave, grid).power())
            gains.append(routing.route_gain(coupled8, comb, d0, dirs[0][1], reference=single))
        assert np.mean(ratios) == pytest.approx(1.0, abs=0.1)
        assert np.mean(gains) < 0.5
