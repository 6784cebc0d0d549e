"""Scenario files: one ``[scenario]`` section of ``key = value`` lines.

Physical inputs are in degrees, Hz and deg/sqrt(h); conversion to
radians happens here.  Example::

    [scenario]
    kind = freq_sweep
    alpha_deg = 1
    fs = 1000
    duration = 10
    runs = poly_plain:8:8, efh_bac:8:8, poly_bac:8:8, poly_bac:16:16
    seed = 7
"""

from __future__ import annotations

import configparser
import math
import re
from dataclasses import dataclass, field

from .errors import ConfigError
from .interp_core import CHEBYSHEV2, EQUISPACED, SCHEMES

KINDS = ("interp_demo", "lebesgue_table", "coning_run", "freq_sweep", "noise_sweep")
SWEEP_GRID = (1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 150.0, 200.0)
NOISE_SWEEP_GRID = (10.0, 20.0, 50.0, 60.0, 100.0, 150.0, 200.0)

_SIN_RE = re.compile(r"^\s*(?:([-+0-9.eE]+)\s*\*\s*)?sin\(\s*([-+0-9.eE]*)\s*\*?\s*pi\s*\*\s*t\s*\)\s*$")


@dataclass(frozen=True)
class Run:
    scheme: str
    N: int
    d: int


@dataclass
class Scenario:
    kind: str
    seed: int = 0
    out: str | None = None
    # interp_demo
    amplitude: float = 1.0
    signal_freq: float = 0.3  # Hz: sin(2 pi f t)
    sample_rate: float = 100.0
    t_start: float = 0.0
    t_end: float = 1.0
    noise_sigma: float = 0.0
    points_per_gap: int = 20
    # lebesgue_table: (scheme, N, d, node_kind)
    entries: list = field(default_factory=list)
    resolution: int = 500
    # coning scenarios
    alpha: float = math.radians(1.0)
    fc: float = 50.0
    fs: float = 1000.0
    duration: float = 10.0
    fc_list: tuple = SWEEP_GRID
    arw: float = 0.0  # rad/sqrt(s)
    cases: list = field(default_factory=list)  # noise_sweep: (arw rad/sqrt(s), alpha rad)
    runs: list = field(default_factory=list)
    n_theta: int | None = None
    P_theta: int | None = None
    picard_max_order: int = 40
    picard_tol: float = 1e-15
    picard_max_iters: int = 30
    raw: dict = field(default_factory=dict)

    def echo(self) -> dict:
        """Config as read, plus the effective seed."""
        out = {k: " ".join(str(v).split()) for k, v in self.raw.items()}
        out["seed"] = str(self.seed)
        return out


def _parse_sin(text, line):
    m = _SIN_RE.match(text)
    if not m:
        raise ConfigError(f"cannot parse signal {text!r}; expected 'A*sin(k*pi*t)'", line, "signal")
    amp = float(m.group(1)) if m.group(1) else 1.0
    k = float(m.group(2)) if m.group(2) not in ("", None) else 1.0
    return amp, k / 2.0


def _items(text):
    return [s.strip() for s in text.replace(";", ",").split(",") if s.strip()]


def parse_scenario(text: str, default_kind: str | None = None) -> Scenario:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"), interpolation=None)
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed scenario file: {exc}", getattr(exc, "lineno", None)) from exc
    if not cp.has_section("scenario"):
        raise ConfigError("missing [scenario] section", 1)
    lines = {}
    for i, ln in enumerate(text.splitlines(), 1):
        m = re.match(r"^\s*([A-Za-z_][\w]*)\s*[=:]", ln)
        if m:
            lines.setdefault(m.group(1).lower(), i)
    sec = dict(cp.items("scenario"))
    kind = sec.get("kind", default_kind)
    if kind is None:
        raise ConfigError("scenario kind not given", None, "kind")
    kind = kind.replace("-", "_")
    if kind not in KINDS:
        raise ConfigError(f"unknown scenario kind {kind!r}", lines.get("kind"), "kind")
    sc = Scenario(kind=kind, raw={k: v for k, v in sec.items()})
    sc.raw["kind"] = kind

    def number(key, conv=float, positive=True, allow_zero=False):
        try:
            v = conv(sec[key])
        except (TypeError, ValueError):
            raise ConfigError(f"{key} must be a number, got {sec[key]!r}", lines.get(key), key) from None
        if positive and not (v > 0 or (allow_zero and v == 0)):
            raise ConfigError(f"{key} must be positive, got {v}", lines.get(key), key)
        return v

    handlers = {
        "seed": lambda: setattr(sc, "seed", number("seed", int, positive=False)),
        "out": lambda: setattr(sc, "out", sec["out"]),
        "kind": lambda: None,
        "amplitude": lambda: setattr(sc, "amplitude", number("amplitude")),
        "signal_freq": lambda: setattr(sc, "signal_freq", number("signal_freq")),
        "sample_rate": lambda: setattr(sc, "sample_rate", number("sample_rate")),
        "t_start": lambda: setattr(sc, "t_start", number("t_start", positive=False)),
        "t_end": lambda: setattr(sc, "t_end", number("t_end")),
        "noise_sigma": lambda: setattr(sc, "noise_sigma", number("noise_sigma", allow_zero=True)),
        "points_per_gap": lambda: setattr(sc, "points_per_gap", number("points_per_gap", int)),
        "resolution": lambda: setattr(sc, "resolution", number("resolution", int)),
        "alpha_deg": lambda: setattr(sc, "alpha", math.radians(number("alpha_deg"))),
        "fc": lambda: setattr(sc, "fc", number("fc")),
        "fs": lambda: setattr(sc, "fs", number("fs")),
        "duration": lambda: setattr(sc, "duration", number("duration")),
        "arw_deg_per_sqrt_h": lambda: setattr(
            sc, "arw", number("arw_deg_per_sqrt_h", allow_zero=True) * math.pi / 180.0 / 60.0
        ),
        "n_theta": lambda: setattr(sc, "n_theta", number("n_theta", int)),
        "p_theta": lambda: setattr(sc, "P_theta", number("p_theta", int)),
        "picard_max_order": lambda: setattr(sc, "picard_max_order", number("picard_max_order", int)),
        "picard_tol": lambda: setattr(sc, "picard_tol", number("picard_tol")),
        "picard_max_iters": lambda: setattr(sc, "picard_max_iters", number("picard_max_iters", int)),
    }
    for key in sec:
        if key in handlers:
            handlers[key]()
        elif key not in ("signal", "entries", "runs", "schemes", "n", "d", "fc_list", "cases"):
            raise ConfigError(f"unknown field {key!r}", lines.get(key), key)

    if "signal" in sec:
        sc.amplitude, sc.signal_freq = _parse_sin(sec["signal"], lines.get("signal"))

    if "fc_list" in sec:
        try:
            sc.fc_list = tuple(float(v) for v in _items(sec["fc_list"]))
        except ValueError:
            raise ConfigError("fc_list must be numbers", lines.get("fc_list"), "fc_list") from None
        if not sc.fc_list or min(sc.fc_list) <= 0:
            raise ConfigError("fc_list must hold positive frequencies", lines.get("fc_list"), "fc_list")
    elif kind == "noise_sweep":
        sc.fc_list = NOISE_SWEEP_GRID

    if "cases" in sec:
        for item in _items(sec["cases"]):
            try:
                arw, alpha = (float(v) for v in item.split(":"))
            except ValueError:
                raise ConfigError(f"case {item!r} must be arw_deg_per_sqrt_h:alpha_deg",
                                  lines.get("cases"), "cases") from None
            if arw < 0 or not alpha > 0:
                raise ConfigError(f"case {item!r} has a non-positive value", lines.get("cases"), "cases")
            sc.cases.append((arw * math.pi / 180.0 / 60.0, math.radians(alpha)))
    elif kind == "noise_sweep":
        sc.cases = [(sc.arw, sc.alpha)]

    if "runs" in sec:
        for item in _items(sec["runs"]):
            parts = item.split(":")
            try:
                scheme, N, d = parts[0].strip(), int(parts[1]), int(parts[2])
            except (IndexError, ValueError):
                raise ConfigError(f"run {item!r} must be scheme:N:d", lines.get("runs"), "runs") from None
            if scheme not in SCHEMES or N < 1 or d < 0:
                raise ConfigError(f"invalid run {item!r}", lines.get("runs"), "runs")
            sc.runs.append(Run(scheme, N, d))
    else:
        schemes = _items(sec.get("schemes", ",".join(SCHEMES)))
        if not schemes:
            raise ConfigError("schemes list is empty", lines.get("schemes"), "schemes")
        for s in schemes:
            if s not in SCHEMES:
                raise ConfigError(f"unknown scheme {s!r}", lines.get("schemes"), "schemes")
        try:
            Ns = [int(v) for v in _items(sec.get("n", "8"))]
            ds = [int(v) for v in _items(sec.get("d", ",".join(str(n) for n in Ns)))]
        except ValueError:
            raise ConfigError("N and d must be integers", lines.get("n") or lines.get("d"), "N") from None
        if len(ds) != len(Ns) or min(Ns) < 1 or min(ds) < 0:
            raise ConfigError("N and d lists must pair up with N >= 1, d >= 0", lines.get("d"), "d")
        sc.runs = [Run(s, n, d) for n, d in zip(Ns, ds) for s in schemes]

    if "entries" in sec:
        for item in _items(sec["entries"]):
            parts = [p.strip() for p in item.split(":")]
            try:
                scheme, N = parts[0], int(parts[1])
                d = int(parts[2]) if len(parts) > 2 else 0
                node_kind = parts[3] if len(parts) > 3 else EQUISPACED
            except (IndexError, ValueError):
                raise ConfigError(f"entry {item!r} must be scheme:N[:d[:node_kind]]",
                                  lines.get("entries"), "entries") from None
            if scheme not in ("poly", "fh", "efh_bac", "poly_bac") or node_kind not in (EQUISPACED, CHEBYSHEV2):
                raise ConfigError(f"invalid entry {item!r}", lines.get("entries"), "entries")
            sc.entries.append((scheme, N, d, node_kind))
    elif kind == "lebesgue_table":
        raise ConfigError("lebesgue_table needs an entries list", None, "entries")

    if kind == "interp_demo" and sc.t_end <= sc.t_start:
        raise ConfigError("t_end must exceed t_start", lines.get("t_end"), "t_end")
    return sc


def load_scenario(path, default_kind: str | None = None) -> Scenario:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read scenario file {path}: {exc}") from exc
    return parse_scenario(text, default_kind)
