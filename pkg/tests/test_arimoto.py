"""The multiplicative capacity iteration and its certificate bracket."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chancap import (
    Distribution,
    NonInteriorInput,
    ParameterOutOfRange,
    Termination,
    arimoto_step,
    bsc,
    capacity_bracket,
    mutual_information,
    joint,
    solve_arimoto,
    uniform_rows,
    z_channel,
)
from chancap.arimoto import _multiplicative_update
from support import random_channel, random_interior

BSC01_CAPACITY = math.log(2.0) + 0.1 * math.log(0.1) + 0.9 * math.log(0.9)


class TestStep:
    def test_symmetric_fixed_point(self):
        q = Distribution.uniform(2)
        stepped = arimoto_step(q, bsc(0.1))
        assert np.max(np.abs(stepped.weights - 0.5)) <= 1e-15

    def test_z_channel_single_sweep(self):
        # Oracle: with uniform input on the half-flip z channel the
        # divergences are log(4/3) and log(4/3)/2, so the reweighted law is
        # (4/3, 2/sqrt(3)) normalized.
        w0 = 0.5 * (4.0 / 3.0)
        w1 = 0.5 * (2.0 / math.sqrt(3.0))
        oracle = np.array([w0, w1]) / (w0 + w1)
        assert oracle[0] == pytest.approx(0.5358983848622455, abs=1e-15)
        stepped = arimoto_step(Distribution.uniform(2), z_channel(0.5))
        assert np.max(np.abs(stepped.weights - oracle)) <= 1e-12
        # mass moves toward the noiseless input
        assert stepped.weights[0] > 0.5

    def test_requires_interior(self):
        with pytest.raises(NonInteriorInput):
            arimoto_step(Distribution(np.array([1.0, 0.0])), bsc(0.1))

    def test_never_increases_then_decreases_information(self):
        rng = np.random.default_rng(2)
        for _ in range(200):
            n, m = int(rng.integers(2, 9)), int(rng.integers(2, 9))
            ch = random_channel(rng, n, m)
            q = random_interior(rng, n)
            before = mutual_information(joint(q, ch))
            after = mutual_information(joint(arimoto_step(q, ch), ch))
            assert after >= before - 1e-12

    def test_step_output_is_interior_distribution(self):
        rng = np.random.default_rng(8)
        for _ in range(100):
            n, m = int(rng.integers(2, 9)), int(rng.integers(2, 9))
            ch = random_channel(rng, n, m)
            stepped = arimoto_step(random_interior(rng, n), ch)
            assert stepped.is_interior
            assert abs(float(np.sum(stepped.weights)) - 1.0) <= 1e-12

    @given(st.floats(-50.0, 50.0))
    @settings(max_examples=200)
    def test_update_ignores_constant_divergence_shifts(self, shift):
        rng = np.random.default_rng(77)
        q = rng.dirichlet(np.ones(5))
        d = rng.uniform(0.0, 3.0, size=5)
        base, _ = _multiplicative_update(q, d)
        shifted, _ = _multiplicative_update(q, d + shift)
        assert np.max(np.abs(base - shifted)) <= 1e-12

    def test_underflow_clamp_keeps_iterate_interior(self):
        q = np.array([1e-300, 1.0 - 1e-300])
        fresh, clamped = _multiplicative_update(q, np.array([0.0, 800.0]))
        assert clamped
        assert np.all(fresh > 0.0)
        assert abs(float(np.sum(fresh)) - 1.0) <= 1e-12


class TestBracket:
    def test_bracket_contains_capacity_of_bsc(self):
        rng = np.random.default_rng(4)
        ch = bsc(0.1)
        for _ in range(100):
            lower, upper = capacity_bracket(random_interior(rng, 2), ch)
            assert lower <= BSC01_CAPACITY + 1e-12
            assert upper >= BSC01_CAPACITY - 1e-12
            assert lower <= upper

    def test_lower_is_mutual_information(self):
        rng = np.random.default_rng(9)
        ch = random_channel(rng, 4, 5)
        q = random_interior(rng, 4)
        lower, _ = capacity_bracket(q, ch)
        assert lower == pytest.approx(mutual_information(joint(q, ch)), abs=1e-13)


class TestSolve:
    def test_bsc_capacity_matches_closed_form(self):
        result, trace = solve_arimoto(bsc(0.1))
        assert result.termination is Termination.CONVERGED
        assert result.capacity == pytest.approx(BSC01_CAPACITY, abs=1e-8)
        assert result.bracket.lower <= result.capacity <= result.bracket.upper
        assert result.capacity == 0.5 * (result.bracket.lower + result.bracket.upper)
        assert len(trace) == result.iterations

    def test_useless_channel_terminates_immediately(self):
        result, trace = solve_arimoto(uniform_rows(3, 4))
        assert result.iterations == 1
        assert result.capacity == 0.0

    def test_gap_at_termination(self):
        result, _ = solve_arimoto(z_channel(0.5), tol=1e-9)
        assert result.bracket.upper - result.bracket.lower <= 1e-9

    def test_trace_brackets_are_ordered_and_monotone(self):
        _, trace = solve_arimoto(z_channel(0.3), tol=1e-10)
        previous = -np.inf
        for rec in trace:
            assert rec.lower_bound <= rec.upper_bound
            assert rec.mutual_info >= previous - 1e-12
            previous = rec.mutual_info
        trace.validate()

    def test_max_iters_termination(self):
        result, trace = solve_arimoto(z_channel(0.5), tol=1e-15, max_iters=3)
        assert result.termination is Termination.MAX_ITERATIONS
        assert result.iterations == 3

    def test_explicit_initial_law(self):
        start = Distribution(np.array([0.9, 0.1]))
        result, trace = solve_arimoto(bsc(0.2), initial=start)
        assert np.array_equal(trace.records[0].input_distribution.weights, start.weights)
        assert result.capacity == pytest.approx(
            math.log(2.0) + 0.2 * math.log(0.2) + 0.8 * math.log(0.8), abs=1e-8
        )

    def test_rejects_bad_parameters(self):
        with pytest.raises(ParameterOutOfRange):
            solve_arimoto(bsc(0.1), tol=0.0)
        with pytest.raises(ParameterOutOfRange):
            solve_arimoto(bsc(0.1), max_iters=0)
        with pytest.raises(NonInteriorInput):
            solve_arimoto(bsc(0.1), initial=Distribution(np.array([1.0, 0.0])))

    def test_deterministic_across_runs(self):
        first, _ = solve_arimoto(z_channel(0.4))
        second, _ = solve_arimoto(z_channel(0.4))
        assert first.capacity == second.capacity
        assert np.array_equal(first.optimal_input.weights, second.optimal_input.weights)
