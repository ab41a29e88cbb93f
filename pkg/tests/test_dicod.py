"""Tests for DICOD workers, termination detection and the stepped runtime"""

import numpy as np
import pytest

from src.dicod.config import DicodConfig
from src.dicod.messages import ProbeReply, UpdateMessage
from src.dicod.partition import partition
from src.dicod.runtime_interface import assemble_code
from src.dicod.runtimes.stepped import SteppedRuntime
from src.dicod.schedule import ScheduleScript, check_h3
from src.dicod.solver import dicod_solve, run_dicod
from src.dicod.stats import InterferenceStats, interference_rate, simulate_uniform_interference
from src.dicod.termination import TerminationDetector, detect_termination
from src.dicod.update_log import (
    check_h2,
    read_update_log,
    replay_update_log,
    update_log_frame,
    write_update_log,
)
from src.dicod.worker import (
    UpdateRecord,
    WorkerState,
    receive_messages,
    signal_slice,
    worker_step,
)
from src.errors import ConfigurationError, ProtocolViolation
from src.objective.beta import beta_init, max_abs_dz
from src.objective.deltas import delta_cost_pair
from src.signals.kernels import cost, reconstruct
from src.signals.types import Dictionary, MultivariateSignal, SparseCode
from src.solvers.config import SolverConfig
from src.solvers.greedy import greedy_cd

from .problems import make_problem

# Autocorrelation is 1.25 at lag 0, 0.5 at lags +-3 and 0 elsewhere.
SPARSE_ATOM = np.array([[[1.0], [0.0], [0.0], [0.5], [0.0]]])


def _spike_problem(spikes: dict[int, float], n_times: int = 100):
    """Noise-free signal of SPARSE_ATOM placed at the given times"""
    dictionary = Dictionary(SPARSE_ATOM)
    codes = np.zeros((1, n_times))
    for t, value in spikes.items():
        codes[0, t] = value
    signal = reconstruct(SparseCode(codes), dictionary)
    return signal, dictionary


def _worker(signal, dictionary, n_workers, m, reg=1.0, tol=1e-6):
    L = signal.n_times - dictionary.width + 1
    segment = partition(L, n_workers, dictionary.width)[m]
    return WorkerState.create(
        segment,
        signal_slice(signal, segment, dictionary.width),
        dictionary,
        reg,
        tol,
        n_workers,
        L,
    )


def _reply(worker, converged=True, sent=0, received=0, generation=0, epoch=1):
    return ProbeReply(
        worker=worker,
        epoch=epoch,
        local_converged=converged,
        sent=sent,
        received=received,
        generation=generation,
    )


class TestPartition:
    def test_balanced_segments(self):
        segments = partition(100, 4, 10)
        assert [(s.start, s.end) for s in segments] == [(0, 24), (25, 49), (50, 74), (75, 99)]
        assert all(s.halo == 9 for s in segments)

    def test_single_worker_owns_everything(self):
        (segment,) = partition(57, 1, 5)
        assert (segment.start, segment.end) == (0, 56)

    def test_segments_shorter_than_width_are_rejected(self):
        with pytest.raises(ConfigurationError):
            partition(10, 4, 5)

    def test_extended_range_is_clipped(self):
        first, second = partition(100, 2, 10)
        assert first.extended(100) == (0, 58)
        assert second.extended(100) == (41, 99)


class TestWorkerStep:
    def test_nothing_to_do_sets_local_converged(self):
        signal, dictionary = _spike_problem({})
        worker = _worker(signal, dictionary, 1, 0)
        result = worker_step(worker, [])
        assert result.update is None
        assert result.outbound == []
        assert result.local_converged and worker.paused

    def test_center_update_sends_nothing(self):
        signal, dictionary = _spike_problem({25: 10.0})
        worker = _worker(signal, dictionary, 2, 0)
        result = worker_step(worker, [])
        assert result.update.t0 == 25
        assert result.outbound == []

    def test_border_update_goes_to_right_neighbor(self):
        signal, dictionary = _spike_problem({48: 10.0})
        worker = _worker(signal, dictionary, 2, 0)
        result = worker_step(worker, [])
        (msg,) = result.outbound
        assert (msg.k0, msg.t0, msg.sender, msg.receiver) == (0, 48, 0, 1)
        assert msg.delta == result.update.delta
        assert msg.seq == 1 and msg.ack == 0
        assert worker.sent == 1 and worker.border_updates == 1

    def test_border_update_goes_to_left_neighbor(self):
        signal, dictionary = _spike_problem({52: 10.0})
        worker = _worker(signal, dictionary, 2, 1)
        (msg,) = worker_step(worker, []).outbound
        assert msg.receiver == 0

    def test_message_outside_halo_is_protocol_violation(self):
        signal, dictionary = _spike_problem({})
        worker = _worker(signal, dictionary, 2, 0)
        msg = UpdateMessage(k0=0, t0=90, delta=1.0, sender=1, receiver=0, seq=1)
        with pytest.raises(ProtocolViolation):
            worker_step(worker, [msg])

    def test_message_from_non_neighbor_is_protocol_violation(self):
        signal, dictionary = _spike_problem({})
        worker = _worker(signal, dictionary, 3, 0)
        msg = UpdateMessage(k0=0, t0=34, delta=1.0, sender=2, receiver=0, seq=1)
        with pytest.raises(ProtocolViolation):
            worker_step(worker, [msg])

    def test_message_wakes_paused_worker(self):
        signal, dictionary = _spike_problem({53: 10.0})
        left = _worker(signal, dictionary, 2, 0)
        right = _worker(signal, dictionary, 2, 1)
        assert worker_step(left, []).update is None
        assert left.paused
        (msg,) = worker_step(right, []).outbound
        receive_messages(left, [msg])
        assert not left.paused and not left.local_converged
        assert left.received == 1


class TestInterference:
    """Two workers forced to update within W of each other in the same round"""

    @pytest.fixture
    def colliding(self):
        signal, dictionary = _spike_problem({48: 10.0, 51: 10.0})
        runtime = SteppedRuntime(signal, dictionary, DicodConfig(reg=1.0, n_workers=2))
        return signal, dictionary, runtime

    def test_joint_cost_change_matches_pair_formula(self, colliding):
        signal, dictionary, runtime = colliding
        first, second = sorted(runtime.step_round(), key=lambda r: r.update.t0)
        assert (first.update.t0, second.update.t0) == (48, 51)

        before = 0.5 * float(np.sum(signal.samples**2))
        code = assemble_code([w.report() for w in runtime.workers], 1, runtime.n_times)
        after = cost(signal, dictionary, code, 1.0)
        expected = delta_cost_pair(
            first.update, second.update, dictionary.cross_corr, first.gain, second.gain
        )
        assert before - after == pytest.approx(expected, rel=1e-9)

    def test_pair_is_detected_once_and_flagged_on_both_sides(self, colliding):
        _, _, runtime = colliding
        runtime.step_round()
        runtime.step_round()
        left, right = runtime.workers
        assert left.interfering_pairs == 0
        assert right.interfering_pairs == 1
        assert left.log[0].interfering and right.log[0].interfering
        (event,) = right.events
        assert (event.mine.t0, event.theirs.t0) == (51, 48)

    def test_run_to_termination_certifies(self, colliding):
        signal, dictionary, runtime = colliding
        outcome = runtime.run()
        assert outcome.converged
        code = assemble_code(outcome.reports, 1, runtime.n_times)
        assert max_abs_dz(beta_init(signal, dictionary, code, 1.0)) < 1e-6


class TestTermination:
    def test_needs_two_probes(self):
        replies = [_reply(0), _reply(1)]
        assert not detect_termination(replies, None)
        assert detect_termination(replies, replies)

    def test_in_flight_message_blocks_termination(self):
        replies = [_reply(0, sent=1), _reply(1)]
        assert not detect_termination(replies, replies)

    def test_activity_between_probes_blocks_termination(self):
        earlier = [_reply(0, sent=1), _reply(1, received=1)]
        later = [_reply(0, sent=1, generation=2), _reply(1, received=1, generation=1)]
        assert not detect_termination(later, earlier)

    def test_unconverged_worker_blocks_termination(self):
        replies = [_reply(0), _reply(1, converged=False)]
        assert not detect_termination(replies, replies)

    def test_single_worker(self):
        detector = TerminationDetector(1)
        assert not detector.observe([_reply(0, converged=False)])
        assert not detector.observe([_reply(0)])
        assert detector.observe([_reply(0)])

    def test_missing_reply_never_fires(self):
        detector = TerminationDetector(2)
        detector.observe([_reply(0)])
        assert not detector.observe([_reply(0)])


class TestSteppedRuntime:
    def test_single_worker_matches_greedy(self, small_problem):
        signal, dictionary, reg = small_problem
        greedy_code, greedy_trace = greedy_cd(
            signal, dictionary, SolverConfig(reg=reg, strategy="greedy")
        )
        code, trace, stats = dicod_solve(signal, dictionary, DicodConfig(reg=reg, n_workers=1))
        assert trace.iterations == greedy_trace.iterations
        np.testing.assert_array_equal(code.codes, greedy_code.codes)
        assert stats.border_updates == 0 and stats.messages == 0

    @pytest.mark.parametrize("n_workers", [2, 4, 8])
    def test_matches_greedy_cost(self, small_problem, n_workers):
        signal, dictionary, reg = small_problem
        _, greedy_trace = greedy_cd(signal, dictionary, SolverConfig(reg=reg))
        _, trace, stats = dicod_solve(
            signal, dictionary, DicodConfig(reg=reg, n_workers=n_workers, seed=n_workers)
        )
        assert trace.converged
        assert trace.final_max_dz < 1e-6
        gap = abs(trace.final_cost - greedy_trace.final_cost) / greedy_trace.final_cost
        assert gap < 1e-4
        assert stats.total_updates == trace.iterations

    @pytest.mark.parametrize("seed", range(20))
    def test_cost_never_increases_with_prompt_delivery(self, seed):
        """Segments of 2.5 W with d_max = 1 put many updates on the borders"""
        signal, dictionary, reg = make_problem(seed=seed, n_times=209, rho=0.08)
        config = DicodConfig(reg=reg, n_workers=8, seed=seed, log_every=1)
        run = run_dicod(signal, dictionary, config)
        costs = np.array([c for _, _, _, c in run.checkpoints])
        assert np.all(np.diff(costs) <= 1e-10 * costs[0])
        assert run.trace.converged

    def test_collisions_happen_on_crowded_borders(self):
        total = 0
        for seed in range(5):
            signal, dictionary, reg = make_problem(seed=seed, n_times=209, rho=0.08)
            run = run_dicod(signal, dictionary, DicodConfig(reg=reg, n_workers=8, seed=seed))
            total += run.stats.interfering_pairs
        assert total > 0

    @pytest.mark.parametrize("seed", range(100))
    def test_termination_is_sound_under_delays(self, seed):
        signal, dictionary, reg = make_problem(seed=seed % 10)
        config = DicodConfig(reg=reg, n_workers=4, seed=seed, d_max=1 + seed % 3)
        runtime = SteppedRuntime(signal, dictionary, config)
        outcome = runtime.run()
        assert outcome.converged and runtime.terminated
        assert runtime.in_flight() == 0

        code = assemble_code(outcome.reports, dictionary.n_atoms, runtime.n_times)
        assert max_abs_dz(beta_init(signal, dictionary, code, reg)) < 1e-6
        betas = [w.beta.copy() for w in runtime.workers]
        for _ in range(3):
            assert runtime.step_round() == []
        for w, beta in zip(runtime.workers, betas):
            np.testing.assert_array_equal(w.beta, beta)

    def test_same_seed_gives_identical_logs(self, small_problem, tmp_path):
        signal, dictionary, reg = small_problem
        config = DicodConfig(reg=reg, n_workers=4, seed=9, d_max=3, step_probability=0.7)
        paths = []
        for i in range(2):
            run = run_dicod(signal, dictionary, config)
            paths.append(tmp_path / f"log{i}.csv")
            write_update_log(paths[-1], run.log)
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_budget_exhaustion_is_not_converged(self, small_problem):
        signal, dictionary, reg = small_problem
        _, trace, _ = dicod_solve(
            signal, dictionary, DicodConfig(reg=reg, n_workers=2, max_iter=5)
        )
        assert not trace.converged


class TestUpdateLog:
    @pytest.fixture
    def separated_run(self):
        """Activations at least 2W from every border: no border updates"""
        spikes = {t: 10.0 - 0.5 * i for i, t in enumerate((5, 25, 30, 75, 80, 120, 170))}
        signal, dictionary = _spike_problem(spikes, n_times=200)
        return signal, dictionary, run_dicod(
            signal, dictionary, DicodConfig(reg=1.0, n_workers=4, d_max=2, seed=1)
        )

    def test_no_border_updates_means_no_interference(self, separated_run):
        _, _, run = separated_run
        assert run.stats.border_updates == 0
        assert interference_rate(run.stats, 4, 5 / 204).observed == 0.0

    def test_replay_reproduces_code(self, separated_run):
        signal, dictionary, run = separated_run
        replayed = replay_update_log(signal, dictionary, 1.0, run.log)
        np.testing.assert_allclose(replayed.codes, run.code.codes, atol=1e-12)

    def test_csv_columns_and_reload(self, separated_run, tmp_path):
        _, _, run = separated_run
        path = tmp_path / "log.csv"
        write_update_log(path, run.log)
        assert path.read_text().splitlines()[0] == "round,worker,k,t,old,new,interfering"
        reloaded = read_update_log(path)
        assert update_log_frame(reloaded).equals(update_log_frame(run.log))

    def test_check_h2(self):
        records = [
            UpdateRecord(round=r, worker=w, k=0, t=0, old=0.0, new=1.0)
            for w, r in [(0, 1), (0, 2), (0, 3), (1, 1), (1, 5)]
        ]
        assert not check_h2(records, n_workers=2, window=3)
        assert check_h2(records, n_workers=2, window=4)
        with pytest.raises(ConfigurationError):
            check_h2(records, n_workers=2, window=0)


class TestInterferenceRate:
    def test_single_worker_has_no_interference(self):
        stats = InterferenceStats(total_updates=10, rounds=10)
        assert interference_rate(stats, 1, 0.01).observed == 0.0

    def test_prediction(self):
        rate = interference_rate(InterferenceStats(interfering_pairs=3, rounds=10), 4, 0.05)
        assert rate.predicted == pytest.approx(0.04)
        assert rate.observed == pytest.approx(0.1)

    def test_uniform_model_matches_prediction(self):
        stats = simulate_uniform_interference(8, 1 / 64, rounds=10_000, seed=0)
        rate = interference_rate(stats, 8, 1 / 64)
        assert 1 / 3 <= rate.ratio <= 3

    def test_rejects_bad_alpha(self):
        with pytest.raises(ConfigurationError):
            interference_rate(InterferenceStats(rounds=1), 2, 0.0)


class TestScheduleScript:
    def test_h3(self):
        assert check_h3(ScheduleScript(d_max=1))
        assert not check_h3(ScheduleScript(d_max=2))
        assert not check_h3(ScheduleScript(mode="free-running"))

    def test_from_config(self):
        script = ScheduleScript.from_config(DicodConfig(reg=1.0, seed=4, d_max=2))
        assert (script.seed, script.d_max, script.mode) == (4, 2, "stepped")
