import numpy as np
import pytest

from wavescatter import (
    DIRAC,
    DiracCombData,
    ParameterError,
    RefinementError,
    RegularData,
    ReflectionWeights,
    StructureError,
    build_bundle,
    build_grid,
    compute_weights,
    constant_medium,
    dalembert_constant,
    gaussian_mover,
    initialize,
    matrix_step_reference,
    rescaled_regular_waveform,
    run,
    run_dirac,
    sample_medium,
    separate_scales,
    step,
    step_medium,
)
from wavescatter import engine
from wavescatter.verification import random_weights


def zero(x):
    return np.zeros_like(np.asarray(x, dtype=np.float64))


def zero_weights(n):
    return ReflectionWeights(np.zeros(n))


class TestStep:
    def test_zero_weights_pure_shift(self):
        n = 4
        v = np.arange(1.0, 2 * n + 3)
        out = step(v, zero_weights(n), 100.0, 200.0)
        # rights shift in from the left neighbour, lefts from the right neighbour
        for j in range(1, n + 1):
            assert out[2 * j] == v[2 * (j - 1)]
        for j in range(n):
            assert out[2 * j + 1] == v[2 * (j + 1) + 1]
        assert out[0] == 100.0
        assert out[-1] == 200.0

    def test_single_interface_split(self):
        # unit right-mover at node 2, only interface 2 reflects
        n = 5
        r = np.zeros(n)
        r[2] = 0.25
        v = np.zeros(2 * n + 2)
        v[2 * 2] = 1.0
        out = step(v, ReflectionWeights(r), 0.0, 0.0)
        expected = np.zeros(2 * n + 2)
        expected[2 * 3] = 1.25  # transmitted, right-moving at node 3
        expected[2 * 2 + 1] = 0.25  # reflected, left-moving at node 2
        np.testing.assert_array_equal(out, expected)

    def test_matches_dense_matrix_product(self):
        rng = np.random.default_rng(5)
        n = 16
        weights = random_weights(rng, n)
        bundle = build_bundle(weights)
        for _ in range(25):
            v = rng.standard_normal(2 * n + 2)
            left, right = rng.standard_normal(2)
            got = step(v, weights, left, right)
            want = matrix_step_reference(v, bundle, left, right)
            assert np.max(np.abs(got - want)) <= 1e-13

    def test_length_mismatch_rejected(self):
        with pytest.raises(StructureError):
            step(np.zeros(9), zero_weights(4), 0.0, 0.0)


class TestRun:
    def test_constant_medium_reproduces_translation_exactly(self):
        # dyadic grid: every node and time is exactly representable, so the
        # pure-shift scheme must agree with the translated movers bit for bit
        grid, temporal = build_grid(-16.0, 16.0, 256, 8.0)
        weights = compute_weights(sample_medium(constant_medium(1.0), grid))
        alpha = gaussian_mover(2.0, 0.05, -10.0)
        beta = gaussian_mover(0.5, 0.2, 6.0)
        state = initialize(RegularData(alpha=alpha, beta=beta), grid, temporal)
        fld = run(state, weights, grid, temporal)
        for k in range(temporal.m + 1):
            exact = dalembert_constant(alpha, beta, grid.nodes, temporal.times[k])
            assert np.array_equal(fld.u[k], exact)

    def test_zero_data_stays_zero(self):
        grid, temporal = build_grid(0.0, 1.0, 16, 2.0)
        weights = ReflectionWeights(np.random.default_rng(0).uniform(-0.5, 0.5, 16))
        state = initialize(RegularData(alpha=zero, beta=zero), grid, temporal)
        fld = run(state, weights, grid, temporal)
        assert not np.any(fld.u)

    def test_linearity(self):
        rng = np.random.default_rng(3)
        grid, temporal = build_grid(0.0, 1.0, 32, 1.5)
        weights = random_weights(rng, 32)
        lam = 0.731

        def random_state():
            from wavescatter.initial import InitialState

            return InitialState(
                v0=rng.standard_normal(66),
                left_boundary=rng.standard_normal(temporal.m),
                right_boundary=rng.standard_normal(temporal.m),
            )

        s1, s2 = random_state(), random_state()
        from wavescatter.initial import InitialState

        combo = InitialState(
            v0=lam * s1.v0 + s2.v0,
            left_boundary=lam * s1.left_boundary + s2.left_boundary,
            right_boundary=lam * s1.right_boundary + s2.right_boundary,
        )
        u_combo = run(combo, weights, grid, temporal).u
        u_split = lam * run(s1, weights, grid, temporal).u + run(s2, weights, grid, temporal).u
        np.testing.assert_allclose(u_combo, u_split, rtol=1e-12, atol=1e-12)

    def test_causality_cone(self):
        rng = np.random.default_rng(9)
        n = 32
        grid, temporal = build_grid(0.0, 1.0, n, 0.5)
        weights = random_weights(rng, n)
        base = initialize(RegularData(alpha=zero, beta=zero), grid, temporal)
        j = 13
        comb = DiracCombData(c={j: 1.0}, d={j: -0.5})
        poked = initialize(comb, grid, temporal)
        u0 = run(base, weights, grid, temporal).u
        u1 = run(poked, weights, grid, temporal).u
        diff = np.abs(u1 - u0)
        for k in range(temporal.m + 1):
            touched = np.nonzero(diff[k])[0]
            if len(touched):
                assert np.max(np.abs(touched - j)) <= k

    def test_matrix_equivalence_full_run(self):
        rng = np.random.default_rng(11)
        n = 16
        grid, temporal = build_grid(0.0, 1.0, n, 2.0)
        weights = random_weights(rng, n)
        bundle = build_bundle(weights)
        state = initialize(random_comb(rng, n, temporal.m), grid, temporal)
        fld = run(state, weights, grid, temporal)
        v = state.v0.copy()
        for k in range(1, temporal.m + 1):
            v = matrix_step_reference(
                v, bundle, state.left_boundary[k - 1], state.right_boundary[k - 1]
            )
            assert np.max(np.abs(fld.u[k] - (v[0::2] + v[1::2]))) <= 1e-13

    def test_weighted_norm_never_grows_without_injection(self):
        rng = np.random.default_rng(21)
        n = 24
        grid, temporal = build_grid(0.0, 1.0, n, 3.0)
        weights = random_weights(rng, n)
        bundle = build_bundle(weights)
        v = rng.standard_normal(2 * n + 2)
        prev = np.linalg.norm(v * bundle.D)
        for _ in range(temporal.m):
            v = step(v, weights, 0.0, 0.0)
            cur = np.linalg.norm(v * bundle.D)
            assert cur <= prev + 1e-12
            prev = cur

    def test_record_final_matches_full_run(self):
        rng = np.random.default_rng(2)
        n = 16
        grid, temporal = build_grid(0.0, 1.0, n, 2.0)
        weights = random_weights(rng, n)
        state = initialize(random_comb(rng, n, temporal.m), grid, temporal)
        full = run(state, weights, grid, temporal)
        final = run(state, weights, grid, temporal, record="final")
        np.testing.assert_array_equal(final.u[0], full.u[-1])
        sparse = run(state, weights, grid, temporal, record=[0, 5, temporal.m])
        np.testing.assert_array_equal(sparse.u[1], full.u[5])
        np.testing.assert_array_equal(sparse.row_at_step(5), full.u[5])
        with pytest.raises(ParameterError):
            sparse.row_at_step(4)

    def test_structural_validation(self):
        grid, temporal = build_grid(0.0, 1.0, 8, 1.0)
        weights = zero_weights(8)
        state = initialize(RegularData(alpha=zero, beta=zero), grid, temporal)
        bad_grid, bad_temporal = build_grid(0.0, 1.0, 16, 1.0)
        with pytest.raises(StructureError):
            run(state, weights, bad_grid, bad_temporal)
        with pytest.raises(ParameterError):
            run(state, weights, grid, temporal, record=[temporal.m + 1])
        with pytest.raises(ParameterError):
            run(state, weights, grid, temporal, backend="fortran")


class TestBackends:
    def test_import_falls_back_without_extension(self):
        # block the compiled module in a fresh interpreter: the package must
        # import anyway and route runs through the NumPy kernel
        import subprocess
        import sys

        code = (
            "import sys\n"
            "import importlib.abc\n"
            "class Block(importlib.abc.MetaPathFinder):\n"
            "    def find_spec(self, name, path=None, target=None):\n"
            "        if name == 'wavescatter._kernels':\n"
            "            raise ImportError(name)\n"
            "        return None\n"
            "sys.meta_path.insert(0, Block())\n"
            "import wavescatter as ws\n"
            "assert ws.active_backend() == 'python'\n"
            "import numpy as np\n"
            "grid, temporal = ws.build_grid(0.0, 8.0, 8, 2.0)\n"
            "w = ws.compute_weights(ws.sample_medium(ws.constant_medium(1.0), grid))\n"
            "fld = ws.run_dirac(ws.DiracCombData(c={2: 1.0}), w, grid, temporal)\n"
            "assert fld.u[1][3] == 1.0\n"
            "print('fallback ok')\n"
        )
        out = subprocess.run(
            [sys.executable, "-c", code], capture_output=True, text=True, timeout=120
        )
        assert out.returncode == 0, out.stderr
        assert "fallback ok" in out.stdout

    def test_backends_agree_bitwise(self):
        if engine.active_backend() != "compiled":
            pytest.skip("compiled extension not built")
        rng = np.random.default_rng(17)
        n = 64
        grid, temporal = build_grid(-2.0, 2.0, n, 3.0)
        weights = random_weights(rng, n)
        state = initialize(random_comb(rng, n, temporal.m), grid, temporal)
        fast = run(state, weights, grid, temporal, backend="compiled")
        slow = run(state, weights, grid, temporal, backend="python")
        np.testing.assert_array_equal(fast.u, slow.u)


class TestRunDirac:
    def test_unit_atom_travels_one_node_per_step(self):
        n = 8
        grid, temporal = build_grid(0.0, 8.0, n, 5.0)
        fld = run_dirac(DiracCombData(c={1: 1.0}), zero_weights(n), grid, temporal)
        assert fld.mode == DIRAC
        for k in range(temporal.m + 1):
            expected = np.zeros(n + 1)
            if 1 + k <= n:
                expected[1 + k] = 1.0
            np.testing.assert_array_equal(fld.u[k], expected)

    def test_single_interface_coefficients(self):
        # atom crosses the one reflecting interface: 1+r transmitted, r reflected
        n = 4
        r_val = -0.375
        r = np.zeros(n)
        r[1] = r_val
        grid, temporal = build_grid(0.0, 4.0, n, 2.0)
        fld = run_dirac(DiracCombData(c={1: 1.0}), ReflectionWeights(r), grid, temporal)
        expected = np.zeros(n + 1)
        expected[2] = 1.0 + r_val  # transmitted right-mover reached node 2
        expected[1] = r_val  # reflected left-mover back at node 1
        np.testing.assert_array_equal(fld.u[1], expected)
        # one step later both products have moved one more cell
        expected2 = np.zeros(n + 1)
        expected2[3] = 1.0 + r_val
        expected2[0] = r_val
        np.testing.assert_array_equal(fld.u[2], expected2)


def random_comb(rng, n, m, max_atoms=8):
    from wavescatter.verification import random_comb as rc

    return rc(rng, n, m, max_atoms)


class TestSeparateScales:
    def constant_runs(self, ns=(16, 32, 64)):
        runs = []
        for n in ns:
            grid, temporal = build_grid(-8.0, 8.0, n, 6.0 + 0.5 / n)
            comb = DiracCombData.from_positions(grid, right=[(-3.0, 1.0)])
            ratio = n // ns[0]
            record = [k * ratio for k in range(0, 6 + 1)]
            runs.append(run_dirac(comb, zero_weights(n), grid, temporal, record=record))
        return runs

    def test_constant_medium_masks_only_the_characteristic(self):
        sep = separate_scales(self.constant_runs())
        coarse = sep.grid
        for row, k in enumerate(range(0, 7)):
            masked = np.nonzero(sep.singular_mask[row])[0]
            assert len(masked) == 1
            assert coarse.nodes[masked[0]] == -3.0 + k  # unit speed, rightward
            clean = np.ones(coarse.n + 1, dtype=bool)
            clean[masked[0] - 1 : masked[0] + 1] = False  # pair pollution
            assert np.max(np.abs(sep.regular[row][clean])) == 0.0

    def test_single_interface_amplitudes_match_split_laws(self):
        # refinement by factor 3 keeps the physical jump on a midpoint of every
        # level, so the reflected characteristic stays aligned across levels
        zL, zR = 1.0, 2.25
        r = (zL - zR) / (zL + zR)
        med = step_medium([0.5], [zL, zR])
        runs = []
        for n in (16, 48, 144):
            grid, temporal = build_grid(-8.0, 8.0, n, 6.0 + 0.5 / n)
            weights = compute_weights(sample_medium(med, grid))
            comb = DiracCombData.from_positions(grid, right=[(-3.0, 1.0)])
            ratio = n // 16
            runs.append(
                run_dirac(comb, weights, grid, temporal, record=[k * ratio for k in range(7)])
            )
        sep = separate_scales(runs)
        nodes = sep.grid.nodes
        raw_coarse = runs[0].u

        # before the crossing: one singular atom of coefficient 1
        masked0 = np.nonzero(sep.singular_mask[0])[0]
        assert [nodes[j] for j in masked0] == [-3.0]
        assert raw_coarse[0][masked0[0]] == 1.0
        # after the crossing: transmitted 1+r and reflected r, nothing else
        masked6 = np.nonzero(sep.singular_mask[6])[0]
        assert sorted(nodes[j] for j in masked6) == [-2.0, 3.0]
        by_pos = {nodes[j]: raw_coarse[6][j] for j in masked6}
        assert by_pos[3.0] == 1.0 + r
        assert by_pos[-2.0] == r
        clean = np.ones(len(nodes), dtype=bool)
        for j in masked6:
            clean[max(j - 1, 0) : j + 1] = False
        assert np.max(np.abs(sep.regular[6][clean])) == 0.0

    def test_requires_three_dirac_levels(self):
        runs = self.constant_runs()
        with pytest.raises(RefinementError):
            separate_scales(runs[:2])

    def test_rejects_regular_mode_runs(self):
        grid, temporal = build_grid(0.0, 1.0, 8, 1.0)
        state = initialize(RegularData(alpha=zero, beta=zero), grid, temporal)
        reg = run(state, zero_weights(8), grid, temporal)
        with pytest.raises(RefinementError):
            separate_scales([reg, reg, reg])

    def test_rejects_mismatched_domains(self):
        runs = self.constant_runs()
        grid, temporal = build_grid(-7.0, 8.0, 128, 6.0)
        comb = DiracCombData(c={8: 1.0})
        other = run_dirac(comb, zero_weights(128), grid, temporal, record=[0])
        with pytest.raises(RefinementError):
            separate_scales([runs[0], runs[1], other])

    def test_rejects_missing_shared_rows(self):
        runs = self.constant_runs()
        grid, temporal = build_grid(-8.0, 8.0, 128, 6.0 + 0.5 / 128)
        comb = DiracCombData.from_positions(grid, right=[(-3.0, 1.0)])
        partial = run_dirac(comb, zero_weights(128), grid, temporal, record="final")
        with pytest.raises(RefinementError):
            separate_scales([runs[0], runs[1], partial])


def test_rescaled_waveform_pairs_and_clamps():
    row = np.array([0.0, 1.0, 0.0, 3.0])
    w = rescaled_regular_waveform(row, delta=0.5)
    np.testing.assert_array_equal(w, [1.0, 1.0, 3.0, 3.0])
