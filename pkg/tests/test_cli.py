import subprocess
import sys

import numpy as np
import pytest

from dsvis.cli import main
from dsvis.data import load_series, read_records
from dsvis.raster import RasterImage


@pytest.fixture
def noise_csv(tmp_path):
    path = tmp_path / "in.csv"
    assert main(["gen-noise", str(path), "--size", "5000", "--seed", "2"]) == 0
    return path


class TestDownsample:
    def test_lttb_rows(self, noise_csv, tmp_path):
        out = tmp_path / "out.csv"
        assert main(["downsample", str(noise_csv), str(out), "--algo", "lttb", "--n-out", "1000"]) == 0
        assert len(out.read_text().splitlines()) == 1001

    def test_m4_at_most(self, noise_csv, tmp_path):
        out = tmp_path / "out.f64"
        assert main(["downsample", str(noise_csv), str(out), "--algo", "m4", "--n-out", "1000"]) == 0
        assert len(load_series(out)) <= 1000

    def test_minmax_odd(self, noise_csv, tmp_path, capsys):
        assert main(["downsample", str(noise_csv), str(tmp_path / "o.csv"), "--algo", "minmax", "--n-out", "3"]) == 2
        assert "divisible by 2" in capsys.readouterr().err

    def test_missing_file(self, tmp_path):
        assert main(["downsample", str(tmp_path / "nope.csv"), str(tmp_path / "o.csv"), "--algo", "lttb", "--n-out", "10"]) == 2


class TestRender:
    def test_default_canvas(self, noise_csv, tmp_path):
        out = tmp_path / "a.pgm"
        assert main(["render", str(noise_csv), str(out)]) == 0
        img = RasterImage.load_pgm(out)
        assert (img.width, img.height) == (800, 250)

    def test_aliased_binary(self, noise_csv, tmp_path):
        out = tmp_path / "a.pgm"
        assert main(["render", str(noise_csv), str(out), "--no-antialias", "--line-width", "1"]) == 0
        assert set(np.unique(RasterImage.load_pgm(out).pixels).tolist()) <= {0, 255}

    @pytest.mark.parametrize("flags", [["--line-width", "0"], ["--canvas", "800by250"], ["--canvas", "0x5"]])
    def test_usage_errors(self, noise_csv, tmp_path, flags):
        with pytest.raises(SystemExit) as exc:
            main(["render", str(noise_csv), str(tmp_path / "a.pgm"), *flags])
        assert exc.value.code == 1

    def test_template_input(self, tmp_path):
        out = tmp_path / "a.pgm"
        assert main(["render", "noise:3000", str(out), "--canvas", "100x40", "--algo", "minmax", "--n-out", "200"]) == 0
        assert RasterImage.load_pgm(out).width == 100


class TestSweeps:
    def test_eval_repr(self, tmp_path):
        out = tmp_path / "r.csv"
        argv = ["eval-repr", "--template", "noise:5000", "--n-out", "200:600:200", "--line-width", "1,2", "--out", str(out)]
        assert main(argv) == 0
        records = read_records(out)
        assert len(records) == 4 * 3 * 2 * 3
        first = out.read_bytes()
        assert main(argv) == 0
        assert out.read_bytes() == first

    def test_eval_repr_skip_log(self, tmp_path):
        out = tmp_path / "r.csv"
        assert main(["eval-repr", "--template", "noise:3000", "--algo", "m4", "--n-out", "200,202", "--out", str(out)]) == 0
        skipped = (tmp_path / "r.skipped.csv").read_text().splitlines()
        assert len(skipped) == 2 and "InvalidNOutError" in skipped[1]

    def test_eval_stability_and_report(self, tmp_path, capsys):
        out = tmp_path / "s.csv"
        assert main(["eval-stability", "--template", "noise:5000", "--n-out", "200,400", "--kinds", "pan",
                     "--offsets", "1/53,2/11", "--out", str(out)]) == 0
        assert len(read_records(out)) == 4 * 2 * 4 * 2
        assert main(["report", str(out), "--out", str(tmp_path / "rep")]) == 0
        assert "minmax" in capsys.readouterr().out
        lines = (tmp_path / "rep" / "stability_quartiles.csv").read_text().splitlines()
        assert lines[0].startswith("template,algorithm,metric,count,mean") and len(lines) == 1 + 8

    @pytest.mark.parametrize("flags", [["--offsets", "0"], ["--kinds", "tilt"], ["--algo", "visval"], ["--n-out", "9:1"]])
    def test_stability_usage(self, tmp_path, flags):
        with pytest.raises(SystemExit) as exc:
            main(["eval-stability", "--out", str(tmp_path / "s.csv"), *flags])
        assert exc.value.code == 1

    def test_even_kernel(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["eval-repr", "--kernel-size", "4", "--out", str(tmp_path / "r.csv")])
        assert exc.value.code == 1

    def test_report_empty(self, tmp_path, capsys):
        from dsvis.data import write_records
        write_records([], tmp_path / "e.csv")
        assert main(["report", str(tmp_path / "e.csv")]) == 0
        assert capsys.readouterr().out == ""

    def test_report_bad_file(self, tmp_path):
        (tmp_path / "bad.csv").write_text("a,b\n")
        assert main(["report", str(tmp_path / "bad.csv")]) == 2


class TestPredictElbow:
    def test_defaults(self, capsys):
        assert main(["predict-elbow"]) == 0
        out = capsys.readouterr().out.split()
        assert "predicted=1600" in out and "predicted=800" in out and "predicted=533" in out

    def test_everynth(self):
        assert main(["predict-elbow", "--algo", "everynth"]) == 2

    def test_with_records(self, tmp_path, capsys):
        out = tmp_path / "r.csv"
        main(["eval-repr", "--template", "noise:4000", "--algo", "lttb", "--n-out", "200:1000:200", "--out", str(out)])
        assert main(["predict-elbow", "--line-width", "2", "--records", str(out)]) == 0
        assert "empirical=" in capsys.readouterr().out


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "dsvis", "predict-elbow", "--algo", "m4", "--line-width", "2"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "predicted=2400" in res.stdout


def test_no_command():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 1
