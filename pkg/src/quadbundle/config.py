"""Run configuration: a flat ``key = value`` block with one matrix section.

    name = diag_net
    base = rational            # or: finite 5 1 / quadratic -5
    params = 2                 # r, parameters are l0..lr
    mode = by-snc              # smooth | by-corank | by-snc
    primes = 5, 7, 11
    assume = snc: declared     # repeatable
    format = text              # or structured
    matrix:
      l0, 0, 0
      0, l1, 0
      0, 0, l2
    end
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from .errors import ConfigError, QuadBundleError
from .strata import BaseRing, QuadraticFamily

MODES = ("smooth", "by-corank", "by-snc")
FORMATS = ("text", "structured")
_KEYS = ("name", "base", "params", "mode", "primes", "assume", "format")


@dataclass(frozen=True)
class RunConfig:
    name: str
    base: BaseRing
    r: int
    rows: tuple
    family: QuadraticFamily
    mode: str
    primes: tuple
    assumptions: tuple = ()
    format: str = "text"

    def with_overrides(self, primes=None, format=None) -> "RunConfig":
        from dataclasses import replace

        kw = {}
        if primes is not None:
            kw["primes"] = tuple(primes)
        if format is not None:
            if format not in FORMATS:
                raise ConfigError(f"unknown format {format!r}", key="format")
            kw["format"] = format
        return replace(self, **kw)


def _parse_base(value: str, line: int) -> BaseRing:
    parts = value.split()
    try:
        if parts == ["rational"]:
            return BaseRing.rational()
        if parts and parts[0] == "finite" and len(parts) in (2, 3):
            return BaseRing.finite(int(parts[1]), int(parts[2]) if len(parts) == 3 else 1)
        if parts and parts[0] == "quadratic" and len(parts) == 2:
            return BaseRing.quadratic(int(parts[1]))
    except ValueError as exc:
        raise ConfigError(str(exc), line, "base") from None
    raise ConfigError(f"unknown base ring {value!r}", line, "base")


def _parse_int_list(value: str, line: int, key: str) -> tuple:
    try:
        return tuple(int(x) for x in value.replace(",", " ").split())
    except ValueError:
        raise ConfigError(f"expected integers, got {value!r}", line, key) from None


def parse_config(text: str) -> RunConfig:
    """Parse and validate a config; errors name the offending line and key."""
    vals: dict = {}
    lines: dict = {}
    assume = []
    rows = None
    matrix_line = None
    in_matrix = False
    for no, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        if in_matrix:
            if body == "end":
                in_matrix = False
                continue
            rows.append((no, [c.strip() for c in body.split(",")]))
            continue
        if body == "matrix:":
            if rows is not None:
                raise ConfigError("second matrix block", no, "matrix")
            rows, in_matrix, matrix_line = [], True, no
            continue
        if "=" not in body:
            raise ConfigError(f"expected 'key = value', got {body!r}", no)
        key, value = (s.strip() for s in body.split("=", 1))
        if key not in _KEYS:
            raise ConfigError(f"unknown key {key!r}", no, key)
        if key == "assume":
            assume.append(value)
            continue
        if key in vals:
            raise ConfigError("duplicate key", no, key)
        vals[key], lines[key] = value, no
    if in_matrix:
        raise ConfigError("matrix block is not closed by 'end'", matrix_line, "matrix")
    for key in ("base", "params", "mode"):
        if key not in vals:
            raise ConfigError("missing required key", key=key)
    if rows is None:
        raise ConfigError("missing matrix block", key="matrix")
    base = _parse_base(vals["base"], lines["base"])
    try:
        r = int(vals["params"])
    except ValueError:
        raise ConfigError(f"expected an integer, got {vals['params']!r}", lines["params"], "params") from None
    if r < 0:
        raise ConfigError("parameter count must be non-negative", lines["params"], "params")
    mode = vals["mode"]
    if mode not in MODES:
        raise ConfigError(f"unknown mode {mode!r}", lines["mode"], "mode")
    fmt = vals.get("format", "text")
    if fmt not in FORMATS:
        raise ConfigError(f"unknown format {fmt!r}", lines.get("format"), "format")
    primes = _parse_int_list(vals.get("primes", ""), lines.get("primes"), "primes")
    n = len(rows)
    for no, row in rows:
        if len(row) != n:
            raise ConfigError(f"row has {len(row)} entries, expected {n}", no, "matrix")
    entries = tuple(tuple(row) for _, row in rows)
    try:
        fam = QuadraticFamily.from_strings([list(r_) for r_ in entries], r, base)
    except QuadBundleError as exc:
        bad = _locate_entry(entries, rows, r, base)
        raise ConfigError(str(exc), bad, "matrix") from None
    for q in primes:
        try:
            base.residue(q)
        except QuadBundleError as exc:
            raise ConfigError(str(exc), lines.get("primes"), "primes") from None
    return RunConfig(vals.get("name", "unnamed"), base, r, entries, fam, mode, primes, tuple(assume), fmt)


def _locate_entry(entries, rows, r, base):
    """Line of the first entry that does not parse on its own (None if all do)."""
    from .exact import parse_poly

    d = base.d if base.kind == "quadratic" else None
    for no, row in rows:
        for e in row:
            try:
                parse_poly(e, r + 1, d)
            except QuadBundleError:
                return no
    return rows[0][0] if rows else None


def _configs_dir():
    return resources.files("quadbundle").joinpath("configs")


def bundled_configs() -> list[str]:
    return sorted(p.name for p in _configs_dir().iterdir() if p.name.endswith(".cfg"))


def bundled_config_text(name: str) -> str:
    if not name.endswith(".cfg"):
        name += ".cfg"
    return _configs_dir().joinpath(name).read_text(encoding="utf-8")


def load_config(path_or_name: str) -> RunConfig:
    """Read a config file, falling back to a bundled config of that name."""
    try:
        with open(path_or_name, encoding="utf-8") as fh:
            text = fh.read()
    except FileNotFoundError:
        try:
            text = bundled_config_text(path_or_name.rsplit("/", 1)[-1])
        except FileNotFoundError:
            raise ConfigError(f"no such config {path_or_name!r}") from None
    return parse_config(text)
