import pytest

from suita_lab import analysis
from suita_lab.domains import EllipsoidSpec, VolumeResult
from suita_lab.errors import ConvergenceError, CoverageError, ParameterError, SuitaError
from suita_lab.figures import plot_rows
from suita_lab.verification import run_suite


def test_spec():
    s = EllipsoidSpec.omega(3)
    assert s.exponents() == (3.0, 1.0) and s.contains((0.5, 0.5))
    assert not s.contains((0.99, 0.5))
    assert EllipsoidSpec.l1().exponents() == (0.5, 0.5)
    assert EllipsoidSpec.l1().contains((0.3, 0.3j))
    with pytest.raises(ParameterError):
        EllipsoidSpec.omega(0.4)
    with pytest.raises(ParameterError):
        EllipsoidSpec("l1", 2.0)
    with pytest.raises(ParameterError):
        EllipsoidSpec("ball")


def test_errors_carry_data():
    e = ConvergenceError("x", partial=1.5, err_est=0.1)
    assert e.partial == 1.5 and isinstance(e, SuitaError)
    c = CoverageError("y", failed=3, total=10)
    assert c.failed == 3 and c.total == 10


def test_volume_result_meta_not_compared():
    a = VolumeResult(1.0, "closed", 0.1, EllipsoidSpec.l1(), "BELOW_QUARTER", meta={"x": 1})
    b = VolumeResult(1.0, "closed", 0.1, EllipsoidSpec.l1(), "BELOW_QUARTER")
    assert a == b


@pytest.mark.parametrize("suffix", ["png", "svg"])
def test_figure_is_reproducible(tmp_path, suffix):
    rows = analysis.scan("em", [0.1, 0.5, 0.9], m=4) + analysis.scan("em", [0.1, 0.5, 0.9], m=8)
    a = plot_rows(rows, tmp_path / f"a.{suffix}", title="F")
    b = plot_rows(rows, tmp_path / f"b.{suffix}", title="F")
    assert a.read_bytes() == b.read_bytes()


def test_figure_needs_rows(tmp_path):
    with pytest.raises(ParameterError):
        plot_rows([], tmp_path / "x.png")


def test_run_suite_names():
    assert run_suite("ball").passed
    with pytest.raises(ParameterError):
        run_suite("nope")
