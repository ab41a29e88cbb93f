"""Tests for instance generation, the speedup bound and the benchmark harness"""

import math
from unittest.mock import patch

import numpy as np
import pytest
from pydantic import ValidationError

from src.bench.bounds import expansion_tolerance, theoretical_speedup_bound, transition_workers
from src.bench.comparison import run_comparison, run_solver
from src.bench.config_file import parse_config_text, read_config_file
from src.bench.generation import GenerationSpec, generate_instance, resolve_regularization
from src.bench.report import comparison_svg, render_svg, speedup_svg, write_csv
from src.bench.speedup import run_speedup_sweep, update_count_speedup
from src.errors import ConfigurationError

SMALL = dict(n_times=600, width=10, n_atoms=3, n_channels=2, rho=0.02, seed=0)


class TestGeneration:
    def test_atoms_have_unit_norm(self):
        _, dictionary, _ = generate_instance(GenerationSpec(**SMALL))
        np.testing.assert_allclose(dictionary.sq_norms, 1.0, atol=1e-12)

    def test_zero_rate_gives_pure_noise(self):
        spec = GenerationSpec(**{**SMALL, "rho": 0.0})
        signal, _, z_true = generate_instance(spec)
        assert z_true.nnz() == 0
        assert np.any(signal.samples)

    def test_activation_rate_concentrates(self):
        spec = GenerationSpec(n_times=20_020, width=20, n_atoms=5, n_channels=1, seed=3)
        _, _, z_true = generate_instance(spec)
        n = z_true.codes.size
        assert n >= 100_000
        band = 5 * math.sqrt(spec.rho * (1 - spec.rho) / n)
        assert abs(z_true.nnz() / n - spec.rho) <= band

    def test_same_seed_same_instance(self):
        a = generate_instance(GenerationSpec(**SMALL))
        b = generate_instance(GenerationSpec(**SMALL))
        assert np.array_equal(a[0].samples, b[0].samples)
        assert np.array_equal(a[1].atoms, b[1].atoms)

    def test_invalid_specs(self):
        with pytest.raises(ValidationError):
            GenerationSpec(n_times=5, width=10)
        with pytest.raises(ValidationError):
            GenerationSpec(rho=1.0)

    def test_full_scale(self):
        spec = GenerationSpec.full_scale(seed=2)
        assert (spec.n_times, spec.width, spec.n_atoms, spec.n_channels) == (120_000, 200, 25, 7)
        assert spec.reg == 1.0 and not spec.auto_reg
        assert spec.alpha == pytest.approx(1 / 600)

    def test_degenerate_reg_is_retuned(self):
        spec = GenerationSpec(**{**SMALL, "reg": 1e6})
        signal, dictionary, _ = generate_instance(spec)
        reg = resolve_regularization(spec, signal, dictionary)
        assert 0 < reg < 1e6

    def test_fixed_reg_is_kept(self):
        spec = GenerationSpec(**{**SMALL, "reg": 1e6, "auto_reg": False})
        signal, dictionary, _ = generate_instance(spec)
        assert resolve_regularization(spec, signal, dictionary) == 1e6


class TestSpeedupBound:
    @pytest.mark.parametrize("n_workers", range(1, 11))
    def test_no_overlap_gives_quadratic_speedup(self, n_workers):
        assert theoretical_speedup_bound(n_workers, 0.0).value == n_workers**2

    def test_single_worker_closed_form(self):
        alpha = 0.05
        direct = 1 - 2 * alpha**2 * (1 + 2 * alpha**2) ** -0.5
        assert theoretical_speedup_bound(1, alpha).value == pytest.approx(direct, abs=1e-6)

    def test_expansion_agrees_on_grid(self):
        for M in range(1, 11):
            for step in range(1, 11):
                alpha = 0.01 * step / M
                bound = theoretical_speedup_bound(M, alpha)
                gap = abs(bound.value - bound.expansion)
                assert gap <= expansion_tolerance(M, alpha)
                if M <= 3:
                    assert gap <= 2 * (alpha * M) ** 4 * M**2 * (1 + 1e-9) + 1e-14 * M**2

    def test_tolerance_covers_tight_four_worker_case(self):
        # At M = 4 the remainder equals 64 (alpha M)^4 exactly.
        bound = theoretical_speedup_bound(4, 0.01)
        gap = abs(bound.value - bound.expansion)
        assert gap == pytest.approx(64 * 0.04**4, rel=1e-9)
        assert gap <= expansion_tolerance(4, 0.01)

    def test_bound_below_quadratic(self):
        for M in (2, 4, 8):
            assert theoretical_speedup_bound(M, 0.01).value < M**2

    def test_hypothesis_flag(self):
        assert theoretical_speedup_bound(4, 0.05).hypothesis_holds
        assert not theoretical_speedup_bound(4, 0.1).hypothesis_holds

    def test_invalid_arguments(self):
        with pytest.raises(ConfigurationError):
            theoretical_speedup_bound(0, 0.1)
        with pytest.raises(ConfigurationError):
            theoretical_speedup_bound(2, -0.1)

    def test_transition(self):
        assert transition_workers(1 / 300) == pytest.approx(150)
        assert transition_workers(0.0) == math.inf


@pytest.fixture(scope="module")
def report():
    return run_comparison(
        GenerationSpec(**SMALL),
        ["greedy", "randomized", "seq-dicod", "dicod", "fista"],
        tol=1e-6,
        prox_iters=3000,
        n_workers=4,
        log_every=10,
    )


class TestComparison:
    def test_converged_solvers_agree(self, report):
        finals = [s.final_cost for s in report.summaries if s.converged]
        assert len(finals) >= 4
        assert (max(finals) - min(finals)) / min(finals) < 1e-4

    def test_trajectories_start_at_half_energy(self, report):
        signal, _, _ = generate_instance(report.spec)
        initial = 0.5 * float(np.sum(signal.samples**2))
        for s in report.summaries:
            assert s.trace.initial_cost == pytest.approx(initial), s.solver

    def test_trace_table(self, report):
        frame = report.trajectory_frame()
        assert list(frame.columns) == ["solver", "updates", "seconds", "cost"]
        greedy = frame[frame.solver == "greedy"]["cost"].to_numpy()
        assert np.all(np.diff(greedy) <= 1e-10)

    def test_summaries_carry_config(self, report):
        for s in report.summaries:
            assert s.config["reg"] == report.reg
            assert s.config["instance_seed"] == 0

    def test_csv_is_deterministic_apart_from_timing(self, tmp_path):
        frames = []
        for i in range(2):
            report = run_comparison(GenerationSpec(**SMALL), ["greedy", "dicod"], log_every=10)
            path = tmp_path / f"trace{i}.csv"
            write_csv(report.trajectory_frame().drop(columns="seconds"), path)
            frames.append(path.read_bytes())
        assert frames[0] == frames[1]

    def test_svg(self, report):
        svg = comparison_svg(report)
        assert svg.startswith("<svg")
        assert svg.count("<polyline") == len(report.summaries)

    def test_unknown_solver(self):
        signal, dictionary, _ = generate_instance(GenerationSpec(**SMALL))
        with pytest.raises(ConfigurationError):
            run_solver("lbfgs", signal, dictionary, 1.0)


class TestSpeedupSweep:
    def test_stepped_sweep(self):
        spec = GenerationSpec(**SMALL)
        report = run_speedup_sweep(spec, [2], repeats=2, mode="stepped")
        frame = report.speedup_frame()
        assert list(frame.columns) == [
            "M", "run", "seconds", "speedup", "run_speedup", "bound", "warm_seconds"
        ]
        assert sorted(set(frame.M)) == [1, 2]
        assert report.median_speedup(1) == 1.0
        assert (frame[frame.M == 1].speedup == 1.0).all()
        bound = theoretical_speedup_bound(2, spec.alpha).value
        assert np.allclose(frame[frame.M == 2].bound, bound)
        assert "<polyline" in speedup_svg(report)

    def test_speedup_is_ratio_of_medians(self):
        times = [1.0, 3.0, 2.0, 4.0, 0.5, 1.5, 1.0, 2.0]
        with patch("src.bench.speedup._seconds_to_reach", side_effect=times):
            report = run_speedup_sweep(GenerationSpec(**SMALL), [2], repeats=4, mode="stepped")
        frame = report.speedup_frame()
        assert report.median_speedup(1) == 1.0
        assert report.median_speedup(2) == pytest.approx(2.5 / 1.25)
        assert np.allclose(frame[frame.M == 2].speedup, 2.0)
        assert list(frame[frame.M == 1].run_speedup) == pytest.approx([2.5, 2.5 / 3, 1.25, 0.625])

    def test_oversubscription_is_reported(self):
        with patch("src.bench.speedup.available_workers", return_value=1):
            report = run_speedup_sweep(
                GenerationSpec(**SMALL), [2], repeats=1, mode="free-running"
            )
        assert any("oversubscribed" in w for w in report.warnings)

    def test_rejects_zero_repeats(self):
        with pytest.raises(ConfigurationError):
            run_speedup_sweep(GenerationSpec(**SMALL), [2], repeats=0)


@pytest.mark.slow
@pytest.mark.parametrize("n_workers", [2, 4, 8])
def test_update_count_speedup_is_near_quadratic(n_workers):
    spec = GenerationSpec(seed=0)
    signal, dictionary, _ = generate_instance(spec)
    reg = resolve_regularization(spec, signal, dictionary)
    assert spec.alpha * n_workers <= 0.1
    proxy = update_count_speedup(signal, dictionary, reg, n_workers)
    assert proxy.value >= 0.5 * n_workers**2


class TestReport:
    def test_render_svg_handles_log_scale_and_markers(self):
        svg = render_svg(
            {"a": [(0, 1.0), (1, 0.1)], "b": [(0, 2.0), (1, 0.0)]},
            "t",
            "x",
            "y",
            log_y=True,
            markers=[(0.5, "mid")],
        )
        assert svg.count("<polyline") == 2
        assert "mid" in svg


class TestConfigFile:
    def test_parse(self):
        text = "# comment\nT = 4000\n\nnoise-std=0.5  # trailing\nseed=7\n"
        assert parse_config_text(text) == {"T": "4000", "noise_std": "0.5", "seed": "7"}

    def test_malformed_line(self):
        with pytest.raises(ConfigurationError):
            parse_config_text("just words")

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError):
            read_config_file(tmp_path / "absent.conf")
