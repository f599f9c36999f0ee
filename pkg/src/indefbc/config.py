"""INI run configuration: parsing, validation, and echo round-tripping."""

from __future__ import annotations

import configparser
import io
from dataclasses import dataclass, field

import numpy as np

from .domain import DISK, INTERVAL, Domain, build_domain
from .errors import ConfigError
from .problem import F_FORM, LOGISTIC, W_FORM, ProblemSpec, logistic_spec
from .weights import trig_weight

_FORMS = (W_FORM, F_FORM, LOGISTIC)


@dataclass(frozen=True)
class RunConfig:
    """Validated run settings plus the raw key/value echo."""

    domain_kind: str
    m: int
    p: float
    form: str
    lam_window: tuple
    lam_samples: int
    deltas: tuple
    newton_tol: float
    eigen_tol: float
    step_min: float
    step_max: float
    seed: int
    out_dir: str
    n_inits: int
    raw: dict = field(repr=False)  # {section: {key: value}} as read

    def build_domain(self) -> Domain:
        return build_domain(self.domain_kind, self.m)

    def build_weight(self, domain: Domain, name: str):
        """Weight named ``name`` from the [problem] section.

        Interval weights are two comma-separated literals; disk weights
        are "<name>_terms" triples mode:cos:sin joined by ";", with
        optional "<name>_plateaus" angle intervals lo:hi and a
        "<name>_transition_width".
        """
        section = self.raw.get("problem", {})
        if domain.kind == INTERVAL:
            text = section.get(name)
            if text is None:
                raise ConfigError(f"[problem] {name} is required for the interval")
            values = _parse_floats(text, name)
            if len(values) != domain.m:
                raise ConfigError(f"{name} needs {domain.m} values, got {len(values)}")
            return np.array(values)
        terms_text = section.get(f"{name}_terms")
        if terms_text is None:
            raise ConfigError(f"[problem] {name}_terms is required for the disk")
        terms = []
        for chunk in _split_items(terms_text):
            parts = chunk.split(":")
            if len(parts) != 3:
                raise ConfigError(f"bad term {chunk!r} in {name}_terms")
            terms.append((int(parts[0]), float(parts[1]), float(parts[2])))
        plateaus = []
        for chunk in _split_items(section.get(f"{name}_plateaus", "")):
            parts = chunk.split(":")
            if len(parts) != 2:
                raise ConfigError(f"bad interval {chunk!r} in {name}_plateaus")
            plateaus.append((float(parts[0]), float(parts[1])))
        width = float(section.get(f"{name}_transition_width", "0.05"))
        return trig_weight(domain, terms, plateaus, width)

    def build_spec(self, domain: Domain) -> ProblemSpec:
        if self.form == LOGISTIC:
            return logistic_spec(domain, self.build_weight(domain, "r"))
        g = self.build_weight(domain, "g")
        f = self.build_weight(domain, "f") if self.form == F_FORM else None
        return ProblemSpec(domain, self.p, g, f, self.form)


def _split_items(text: str):
    return [chunk.strip() for chunk in text.split(";") if chunk.strip()]


def _parse_floats(text: str, label: str):
    try:
        return [float(v) for v in text.replace(",", " ").split()]
    except ValueError as exc:
        raise ConfigError(f"bad number in {label}: {exc}") from exc


def _get(parser, section, key, default=None):
    if parser.has_option(section, key):
        return parser.get(section, key)
    return default


def config_from_dict(raw: dict) -> RunConfig:
    """Validate a {section: {key: value}} mapping into a RunConfig."""
    parser = configparser.ConfigParser()
    try:
        parser.read_dict(raw)
    except (configparser.Error, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    try:
        kind = _get(parser, "domain", "kind", INTERVAL)
        m = int(_get(parser, "domain", "m", "2"))
        p = float(_get(parser, "problem", "p", "2.0"))
        form = _get(parser, "problem", "form", W_FORM)
        window = _parse_floats(_get(parser, "lambda", "window", "0.001, 0.1"), "window")
        samples = int(_get(parser, "lambda", "samples", "5"))
        deltas = tuple(_parse_floats(_get(parser, "sweep", "deltas", ""), "deltas"))
        newton_tol = float(_get(parser, "tolerances", "newton", "1e-11"))
        eigen_tol = float(_get(parser, "tolerances", "eigen", "1e-10"))
        step_min = float(_get(parser, "tolerances", "step_min", "1e-10"))
        step_max = float(_get(parser, "tolerances", "step_max", "0.2"))
        seed = int(_get(parser, "run", "seed", "0"))
        out_dir = _get(parser, "run", "out_dir", ".")
        n_inits = int(_get(parser, "run", "n_inits", "64"))
    except (ValueError, configparser.Error) as exc:
        raise ConfigError(str(exc)) from exc
    if kind not in (INTERVAL, DISK) and kind != "disk":
        raise ConfigError(f"unknown domain kind {kind!r}")
    if form not in _FORMS:
        raise ConfigError(f"unknown form {form!r}")
    if len(window) != 2 or not 0.0 <= window[0] < window[1]:
        raise ConfigError(f"bad lambda window {window}")
    for label, tol in (("newton", newton_tol), ("eigen", eigen_tol),
                       ("step_min", step_min), ("step_max", step_max)):
        if tol <= 0.0:
            raise ConfigError(f"tolerance {label} must be positive, got {tol}")
    if samples < 1 or n_inits < 1 or m < 2 or seed < 0:
        raise ConfigError("samples, n_inits, m must be >= 1 (m >= 2); seed >= 0")
    echo = {section: dict(parser.items(section)) for section in parser.sections()}
    return RunConfig(kind, m, p, form, (window[0], window[1]), samples, deltas,
                     newton_tol, eigen_tol, step_min, step_max, seed, out_dir,
                     n_inits, echo)


def load_config(path: str) -> RunConfig:
    """Parse an INI file into a validated RunConfig."""
    parser = configparser.ConfigParser()
    try:
        with open(path, encoding="utf-8") as handle:
            parser.read_file(handle)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    raw = {section: dict(parser.items(section)) for section in parser.sections()}
    return config_from_dict(raw)


def config_to_ini(raw: dict) -> str:
    """Serialize an echoed config mapping back to INI text (round-trip)."""
    parser = configparser.ConfigParser()
    parser.read_dict(raw)
    buffer = io.StringIO()
    parser.write(buffer)
    return buffer.getvalue()
