import pytest

from quasiflow.config import load_config, parse_config
from quasiflow.errors import ParseError, ValidationError
from quasiflow.frames import FrameKind
from quasiflow.models import ModelKind

MINIMAL = """
# pure decoherence, defaults elsewhere
model.kind = pure-decoherence
model.G.family = exponential
model.G.params.kappa = 1.0
grid.t1 = 5
"""


def test_minimal_defaults():
    cfg = parse_config(MINIMAL)
    assert cfg.model.kind is ModelKind.PURE_DECOHERENCE
    assert cfg.grid.steps == 2000 and cfg.grid.t0 == 0.0 and cfg.grid.t1 == 5.0
    assert cfg.frame_kind is FrameKind.WOOTTERS_WIGNER
    assert cfg.output_path is None and cfg.emit_eigenvalues and not cfg.emit_entropy


def test_qutrit_defaults_to_gross_and_zero_rates():
    cfg = parse_config("model.kind = random-unitary\nmodel.dim = 3\nmodel.rates.4.family = ramp\n"
                       "model.rates.4.params.a = 0.1\nmodel.rates.4.params.b = 0.2\ngrid.t1 = 1\n")
    assert cfg.frame_kind is FrameKind.GROSS_WIGNER
    values = cfg.model.rates.values(1.0)
    assert len(values) == 8 and values[3] == pytest.approx(0.3) and values[[0, 1, 2, 4, 5, 6, 7]].sum() == 0


def test_reversed_grid_names_t1():
    with pytest.raises(ValidationError) as exc:
        parse_config(MINIMAL.replace("grid.t1 = 5", "grid.t0 = 3\ngrid.t1 = 1"))
    assert any("grid.t1" in p for p in exc.value.problems)


def test_rate_index_beyond_qubit_count():
    text = "model.kind = random-unitary\nmodel.rates.9.family = constant\nmodel.rates.9.params.c = 1\ngrid.t1 = 1\n"
    with pytest.raises(ValidationError) as exc:
        parse_config(text)
    assert any("rate index 9" in p and "line 2" in p for p in exc.value.problems)


def test_problems_are_aggregated_with_lines():
    text = "model.kind = pure-decoherence\nmodel.G.family = lorentzian\nmodel.colour = red\ngrid.t1 = 1\ngrid.steps = 2\n"
    with pytest.raises(ValidationError) as exc:
        parse_config(text)
    problems = exc.value.problems
    assert len(problems) == 3
    assert any(p.startswith("line 3:") and "unknown key" in p for p in problems)
    assert any(p.startswith("line 5:") for p in problems)
    assert any(p.startswith("line 2:") for p in problems)


def test_missing_required_keys():
    with pytest.raises(ValidationError) as exc:
        parse_config("model.G.family = exponential\n")
    joined = "\n".join(exc.value.problems)
    assert "model.kind" in joined and "grid.t1" in joined


@pytest.mark.parametrize("text", ["just words\n", "model.kind =\n", "grid.t1 = 1\ngrid.t1 = 2\n"])
def test_parse_errors(text):
    with pytest.raises(ParseError) as exc:
        parse_config(text)
    assert exc.value.problems and all(p.startswith("line ") for p in exc.value.problems)


def test_bad_numbers_and_flags():
    with pytest.raises(ValidationError) as exc:
        parse_config(MINIMAL + "grid.steps = many\noutput.entropy = perhaps\nmodel.G.params.extra = 1\n")
    joined = "\n".join(exc.value.problems)
    assert "grid.steps" in joined and "boolean" in joined and "extra" in joined


def test_model_specific_keys():
    with pytest.raises(ValidationError):
        parse_config(MINIMAL + "model.rates.1.family = constant\n")
    with pytest.raises(ValidationError):
        parse_config(MINIMAL.replace("pure-decoherence", "random-unitary"))
    with pytest.raises(ValidationError):
        parse_config(MINIMAL + "model.dim = 3\n")
    with pytest.raises(ValidationError):
        parse_config(MINIMAL + "frame.kind = polar\n")
    with pytest.raises(ValidationError) as exc:
        parse_config(MINIMAL + "frame.kind = gross\n")
    assert "not available for d=2" in exc.value.problems[0]


def test_outputs_and_frame(tmp_path):
    path = tmp_path / "scan.cfg"
    path.write_text(MINIMAL + "frame.kind = sic\noutput.path = out.csv\noutput.entropy = yes\noutput.compare = true\n")
    cfg = load_config(str(path))
    assert cfg.frame_kind is FrameKind.SIC_POVM and cfg.frame().n == 4
    assert cfg.output_path == "out.csv" and cfg.emit_entropy and cfg.compare_oracles
