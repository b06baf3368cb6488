"""Scan configuration: a flat ``dotted.key = value`` document.

Example::

    model.kind = pure-decoherence
    model.G.family = jaynes-cummings
    model.G.params.lambda = 1.0
    model.G.params.gamma0 = 5.0
    grid.t1 = 10
    frame.kind = wootters

Random-unitary rates are given per index ``k`` in ``1..d*d-1``
(``model.rates.k.family``, ``model.rates.k.params.*``); unspecified rates are zero.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ParseError, QuasiflowError, ValidationError
from .frames import SUPPORTED, FrameKind, build_frame
from .grid import TimeGrid
from .models import (
    DecoherenceFunction,
    DynamicalModel,
    ModelKind,
    RateFunction,
    RateFunctions,
    _parse_enum,
)

DEFAULT_STEPS = 2000

_LINE = re.compile(r"^\s*([A-Za-z0-9_.\-]+)\s*[=:]\s*(.*?)\s*$")
_SCALAR_KEYS = {
    "model.kind", "model.dim", "model.G.family",
    "grid.t0", "grid.t1", "grid.steps", "frame.kind",
    "output.path", "output.eigenvalues", "output.entropy", "output.compare",
    "blp.resolution",
}
_G_PARAM = re.compile(r"^model\.G\.params\.([A-Za-z0-9_]+)$")
_RATE_FAMILY = re.compile(r"^model\.rates\.(\d+)\.family$")
_RATE_PARAM = re.compile(r"^model\.rates\.(\d+)\.params\.([A-Za-z0-9_]+)$")

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


@dataclass
class ScanConfig:
    model: DynamicalModel
    frame_kind: FrameKind
    grid: TimeGrid
    output_path: str | None = None
    emit_eigenvalues: bool = True
    emit_entropy: bool = False
    compare_oracles: bool = False
    blp_resolution: int = 24
    raw: dict[str, str] = field(default_factory=dict, repr=False)

    def frame(self):
        return build_frame(self.frame_kind, self.model.d)


def _read(text: str) -> tuple[dict[str, str], dict[str, int]]:
    values, lines, problems = {}, {}, []
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        match = _LINE.match(body)
        if not match:
            problems.append(f"line {lineno}: expected 'key = value', got {line.strip()!r}")
            continue
        key, value = match.groups()
        if not value:
            problems.append(f"line {lineno}: key {key!r} has no value")
        elif key in values:
            problems.append(f"line {lineno}: duplicate key {key!r} (first on line {lines[key]})")
        else:
            values[key], lines[key] = value.strip().strip('"').strip("'"), lineno
    if problems:
        raise ParseError(problems)
    return values, lines


def parse_config(text: str) -> ScanConfig:
    values, lines = _read(text)
    problems: list[str] = []

    def where(key):
        return f"line {lines[key]}: " if key in lines else ""

    def number(key, default=None, kind=float):
        if key not in values:
            if default is None:
                problems.append(f"missing required key {key!r}")
            return default
        try:
            return kind(values[key])
        except ValueError:
            problems.append(f"{where(key)}{key} = {values[key]!r} is not a valid {kind.__name__}")
            return default

    def flag(key, default):
        if key not in values:
            return default
        v = values[key].lower()
        if v in _TRUE or v in _FALSE:
            return v in _TRUE
        problems.append(f"{where(key)}{key} = {values[key]!r} is not a boolean")
        return default

    g_params, rate_family, rate_params = {}, {}, {}
    for key, value in values.items():
        if key in _SCALAR_KEYS:
            continue
        if m := _G_PARAM.match(key):
            g_params[m.group(1)] = key
        elif m := _RATE_FAMILY.match(key):
            rate_family[int(m.group(1))] = key
        elif m := _RATE_PARAM.match(key):
            rate_params.setdefault(int(m.group(1)), {})[m.group(2)] = key
        else:
            problems.append(f"{where(key)}unknown key {key!r}")

    kind = None
    if "model.kind" not in values:
        problems.append("missing required key 'model.kind'")
    else:
        try:
            kind = _parse_enum(ModelKind, values["model.kind"])
        except QuasiflowError as exc:
            problems.append(f"{where('model.kind')}model.kind: {exc}")
    dim = number("model.dim", 2, int)
    if dim not in (2, 3):
        problems.append(f"{where('model.dim')}model.dim must be 2 or 3, got {dim}")
        dim = 2

    t0 = number("grid.t0", 0.0)
    t1 = number("grid.t1")
    steps = number("grid.steps", DEFAULT_STEPS, int)
    if t0 is not None and t0 < 0:
        problems.append(f"{where('grid.t0')}grid.t0 must be >= 0, got {t0}")
    if t1 is not None and t0 is not None and not t1 > t0:
        problems.append(f"{where('grid.t1')}grid.t1 must exceed grid.t0 ({t1} <= {t0})")
    if steps is not None and steps < 3:
        problems.append(f"{where('grid.steps')}grid.steps must be >= 3, got {steps}")

    default_frame = FrameKind.WOOTTERS_WIGNER if dim == 2 else FrameKind.GROSS_WIGNER
    frame_kind = default_frame
    if "frame.kind" in values:
        try:
            frame_kind = FrameKind.parse(values["frame.kind"])
        except QuasiflowError as exc:
            problems.append(f"{where('frame.kind')}frame.kind: {exc}")
        else:
            if (frame_kind, dim) not in SUPPORTED:
                problems.append(f"{where('frame.kind')}frame.kind: {frame_kind.value} is not available for d={dim}")

    model = None
    if kind in (ModelKind.PURE_DECOHERENCE, ModelKind.DISSIPATION):
        if rate_family or rate_params:
            first = min(list(rate_family.values()) + [k for p in rate_params.values() for k in p.values()],
                        key=lambda k: lines[k])
            problems.append(f"{where(first)}{kind.value} model takes no rates ({first!r})")
        if dim != 2:
            problems.append(f"{where('model.dim')}{kind.value} model requires model.dim = 2")
        if "model.G.family" not in values:
            problems.append("missing required key 'model.G.family'")
        else:
            params = {}
            for name, key in g_params.items():
                value = number(key)
                if value is not None:
                    params[name] = value
            try:
                g = DecoherenceFunction(values["model.G.family"], params)
                model = DynamicalModel(kind, 2, decoherence=g)
            except QuasiflowError as exc:
                problems.append(f"{where('model.G.family')}model.G: {exc}")
    elif kind is ModelKind.RANDOM_UNITARY:
        if "model.G.family" in values or g_params:
            problems.append(f"{where('model.G.family')}random-unitary model takes rates, not model.G")
        n_rates = dim * dim - 1
        gammas = []
        ok = True
        for k in sorted(set(rate_family) | set(rate_params)):
            if not 1 <= k <= n_rates:
                key = rate_family.get(k) or next(iter(rate_params[k].values()))
                problems.append(f"{where(key)}{key}: rate index {k} outside 1..{n_rates} for d={dim}")
                ok = False
            elif k not in rate_family:
                key = next(iter(rate_params[k].values()))
                problems.append(f"{where(key)}rate {k} has params but no model.rates.{k}.family")
                ok = False
        if ok:
            for k in range(1, n_rates + 1):
                if k not in rate_family:
                    gammas.append(RateFunction.constant(0.0))
                    continue
                params = {}
                for name, key in rate_params.get(k, {}).items():
                    value = number(key)
                    if value is not None:
                        params[name] = value
                try:
                    gammas.append(RateFunction(values[rate_family[k]], params))
                except QuasiflowError as exc:
                    problems.append(f"{where(rate_family[k])}model.rates.{k}: {exc}")
            if len(gammas) == n_rates:
                model = DynamicalModel.random_unitary(RateFunctions(dim, tuple(gammas)))

    resolution = number("blp.resolution", 24, int)
    if resolution is not None and resolution < 12:
        problems.append(f"{where('blp.resolution')}blp.resolution must be >= 12")
    cfg_kwargs = dict(
        output_path=values.get("output.path"),
        emit_eigenvalues=flag("output.eigenvalues", True),
        emit_entropy=flag("output.entropy", False),
        compare_oracles=flag("output.compare", False),
        blp_resolution=resolution,
    )
    if problems:
        raise ValidationError(problems)
    return ScanConfig(model, frame_kind, TimeGrid(t0, t1, steps), raw=values, **cfg_kwargs)


def load_config(path: str) -> ScanConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
