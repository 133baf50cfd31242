"""Dataset loading, per-sample verdicts, batch runs, CLI surface."""

from __future__ import annotations

import gzip
import json
import struct
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from svmcert.cli import (
    STATUS_MISCLASSIFIED,
    STATUS_ROBUST,
    STATUS_UNKNOWN,
    STATUS_VULNERABLE,
    RunConfig,
    Sample,
    load_dataset,
    main,
    run,
    verify_sample,
)
from svmcert.perturb import LinfSpec
from svmcert.svm_model import Kernel, SvmModel, decision_value, load_model

DATA = Path(__file__).parent / "data"
FIXTURES = Path(__file__).parents[1] / "fixtures"


def write_idx(tmp_path, pixels, labels, bad_magic=False, gz=False):
    n, d = pixels.shape
    side = int(d ** 0.5)
    img = struct.pack(">IIII", 0x803 if not bad_magic else 0x123,
                      n, side, side) + pixels.astype(np.uint8).tobytes()
    lab = struct.pack(">II", 0x801, len(labels)) + bytes(int(v) for v in labels)
    opener = gzip.open if gz else open
    suffix = ".gz" if gz else ""
    ip = tmp_path / f"images{suffix}"
    lp = tmp_path / f"labels{suffix}"
    with opener(ip, "wb") as fh:
        fh.write(img)
    with opener(lp, "wb") as fh:
        fh.write(lab)
    return ip, lp


class TestLoadCsv:
    def test_basic(self, tmp_path):
        p = tmp_path / "d.csv"
        p.write_text("7,0.0,0.5,1.0\n3,0.25,0.25,0.25\n")
        samples = load_dataset(p, "csv")
        assert samples[0].label == 7
        assert list(samples[0].features) == [0.0, 0.5, 1.0]
        assert len(samples) == 2

    def test_ragged(self, tmp_path):
        p = tmp_path / "d.csv"
        p.write_text("1,0.0,0.5\n2,0.25\n")
        with pytest.raises(ValueError, match="ragged"):
            load_dataset(p, "csv")

    def test_non_numeric(self, tmp_path):
        p = tmp_path / "d.csv"
        p.write_text("1,0.0,zebra\n")
        with pytest.raises(ValueError, match="non-numeric"):
            load_dataset(p, "csv")

    def test_range_check(self, tmp_path):
        p = tmp_path / "d.csv"
        p.write_text("1,0.0,1.5\n")
        with pytest.raises(ValueError, match="outside"):
            load_dataset(p, "csv")
        assert load_dataset(p, "csv", clip=None)[0].features[1] == 1.5


class TestLoadIdx:
    def test_roundtrip_and_scaling(self, tmp_path):
        px = np.array([[0, 51, 255, 128]], dtype=np.uint8)
        ip, lp = write_idx(tmp_path, px, [9])
        (s,) = load_dataset(ip, "idx", labels_path=lp)
        assert s.label == 9
        assert s.features[2] == 1.0
        exact = Fraction(51, 255)
        got = Fraction(s.features[1])
        assert abs(got - exact) <= Fraction(1, 2**50)

    def test_gzip(self, tmp_path):
        px = np.array([[255, 0, 0, 0]], dtype=np.uint8)
        ip, lp = write_idx(tmp_path, px, [1], gz=True)
        (s,) = load_dataset(ip, "idx", labels_path=lp)
        assert s.features[0] == 1.0

    def test_bad_magic(self, tmp_path):
        px = np.zeros((1, 4), dtype=np.uint8)
        ip, lp = write_idx(tmp_path, px, [0], bad_magic=True)
        with pytest.raises(ValueError, match="magic"):
            load_dataset(ip, "idx", labels_path=lp)

    def test_needs_labels(self, tmp_path):
        px = np.zeros((1, 4), dtype=np.uint8)
        ip, _ = write_idx(tmp_path, px, [0])
        with pytest.raises(ValueError, match="labels"):
            load_dataset(ip, "idx")


class TestVerifySample:
    @pytest.fixture
    def toy(self):
        return load_model(DATA / "toy_poly2.model")

    def test_golden_domains(self, toy):
        sample = Sample(1, np.array([5.0, 1.0]))
        spec = LinfSpec(1.0, clip=None)
        v_int = verify_sample(toy, sample, spec, domain="interval")
        assert v_int.status == STATUS_UNKNOWN
        for domain in ("raf", "hybrid"):
            v = verify_sample(toy, sample, spec, domain=domain)
            assert v.status == STATUS_ROBUST, domain
            assert v.correct and v.prediction == 1

    def test_degenerate_region_always_decided(self, toy):
        spec = LinfSpec(0.0, clip=None)
        good = verify_sample(toy, Sample(1, np.array([5.0, 1.0])), spec)
        assert good.status == STATUS_ROBUST
        bad = verify_sample(toy, Sample(-1, np.array([5.0, 1.0])), spec)
        assert not bad.correct and bad.status == STATUS_MISCLASSIFIED

    def test_linear_vulnerable_with_witness(self):
        sv = np.array([[1.0, 0.0], [0.0, 1.0]])
        model = SvmModel(labels=(0, 1), kernel=Kernel("linear"),
                         support_vectors=sv,
                         dual_coeffs=np.array([[1.0, -1.0]]),
                         rho=np.array([0.0]), nr_sv=(1, 1))
        sample = Sample(0, np.array([0.5, 0.45]))
        verdict = verify_sample(model, sample, LinfSpec(0.2), domain="hybrid")
        assert verdict.status == STATUS_VULNERABLE
        y, z = verdict.witness
        bp = model.binary_problem(0, 1)
        assert decision_value(bp, model.kernel, y) >= 0
        assert decision_value(bp, model.kernel, z) < 0


class TestRun:
    def config(self, **kw):
        base = dict(model_path=str(FIXTURES / "digits_rbf_1k.model"),
                    dataset_path=str(FIXTURES / "digits_test_100.csv"),
                    perturbation=LinfSpec(0.0), domain="hybrid")
        base.update(kw)
        return RunConfig(**base)

    def test_delta_zero_all_correct_proved(self):
        report = run(self.config())
        assert report.counts[STATUS_ROBUST] == report.correct
        assert report.counts[STATUS_MISCLASSIFIED] == report.total - report.correct
        assert report.robustness_pct == 100.0

    def test_monotone_in_delta(self):
        pcts = []
        for delta in (0.01, 0.05, 0.09):
            report = run(self.config(perturbation=LinfSpec(delta)))
            pcts.append(report.robustness_pct)
        assert pcts[0] >= pcts[1] >= pcts[2]

    def test_deterministic(self):
        r1 = run(self.config(perturbation=LinfSpec(0.02)))
        r2 = run(self.config(perturbation=LinfSpec(0.02)))
        assert [v.status for v in r1.verdicts] == [v.status for v in r2.verdicts]
        assert [v.prediction for v in r1.verdicts] == [v.prediction for v in r2.verdicts]

    def test_only_correct_filters(self):
        report = run(self.config(perturbation=LinfSpec(0.01), only_correct=True))
        assert report.total == report.correct
        assert report.vulnerability_pct is None

    def test_parallel_matches_serial(self):
        serial = run(self.config(perturbation=LinfSpec(0.03)))
        parallel = run(self.config(perturbation=LinfSpec(0.03), jobs=2))
        assert [v.status for v in serial.verdicts] == \
            [v.status for v in parallel.verdicts]

    def test_empty_dataset_is_error(self, tmp_path):
        p = tmp_path / "empty.csv"
        p.write_text("")
        with pytest.raises(ValueError, match="empty"):
            run(self.config(dataset_path=str(p)))

    def test_out_file_records(self, tmp_path):
        out = tmp_path / "report.jsonl"
        report = run(self.config(perturbation=LinfSpec(0.01), out=str(out)))
        lines = [json.loads(l) for l in out.read_text().splitlines()]
        samples = [l for l in lines if l["type"] == "sample"]
        summaries = [l for l in lines if l["type"] == "summary"]
        assert len(samples) == report.total and len(summaries) == 1
        assert {"id", "label", "prediction", "correct", "status", "ms"} \
            <= set(samples[0])
        s = summaries[0]
        assert s["counts"][STATUS_ROBUST] == report.counts[STATUS_ROBUST]
        assert sum(s["counts"].values()) == s["samples"]


class TestMain:
    def test_cli_ok_exit_zero(self, tmp_path, capsys):
        out = tmp_path / "r.jsonl"
        code = main(["--model", str(FIXTURES / "digits_rbf_1k.model"),
                     "--dataset", str(FIXTURES / "digits_test_100.csv"),
                     "--linf", "0.01", "--domain", "interval",
                     "--out", str(out)])
        assert code == 0
        assert "proved robust" in capsys.readouterr().out
        assert out.exists()

    def test_cli_error_exit_nonzero(self, capsys):
        code = main(["--model", "/nonexistent.model",
                     "--dataset", str(FIXTURES / "digits_test_100.csv"),
                     "--linf", "0.01"])
        assert code == 2
        assert "error" in capsys.readouterr().err

    def test_cli_clip_off_and_frame_flags(self, tmp_path, capsys):
        csv = tmp_path / "toy.csv"
        csv.write_text("1," + ",".join(["0.5"] * 16) + "\n")
        model = tmp_path / "m.model"
        model.write_text("""svm_type c_svc
kernel_type rbf
gamma 0.5
nr_class 2
total_sv 2
rho 0.1
label 0 1
nr_sv 1 1
SV
1.0 1:0.5 16:0.5
-1.0 2:0.25
""")
        code = main(["--model", str(model), "--dataset", str(csv),
                     "--frame", "1", "--height", "4", "--width", "4"])
        assert code == 0
        code = main(["--model", str(model), "--dataset", str(csv),
                     "--linf", "0.1", "--clip", "off"])
        assert code == 0

    def test_console_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "svmcert.cli", "--help"],
            capture_output=True, text=True)
        assert proc.returncode == 0
        assert "--domain" in proc.stdout
