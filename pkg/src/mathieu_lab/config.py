"""Flat ``key = value`` settings with defaults; CLI flags override file values."""

from __future__ import annotations

from pathlib import Path

from .errors import SpecInvalid

DEFAULTS = {
    "prime_cap": 10_000,
    "term_budget": 10**7,
    "emap_slack": 2,
    "charp_slack": None,  # None means n * p
    "imd1_slack": 0,
    "probe_window": 4,
    "gap_n": None,  # None means 10 * r * (deg S + 1)
    "m_max": 8,
    "checkpoint_every": 64,
    "chunksize": 64,
    "timing": False,
}


def parse_value(text: str):
    t = text.strip()
    low = t.lower()
    if low in ("true", "yes", "on"):
        return True
    if low in ("false", "no", "off"):
        return False
    if low in ("none", "null", ""):
        return None
    try:
        return int(t)
    except ValueError:
        return t


def read_flat(path) -> dict:
    """Parse a flat key = value file; '#' starts a comment."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SpecInvalid(f"{path}:{lineno}: expected 'key = value'")
        key, value = line.split("=", 1)
        out[key.strip().lower().replace("-", "_")] = parse_value(value)
    return out


def load_config(path=None, overrides=None) -> dict:
    cfg = dict(DEFAULTS)
    if path:
        values = read_flat(path)
        unknown = sorted(set(values) - set(DEFAULTS))
        if unknown:
            raise SpecInvalid(f"unknown config keys: {', '.join(unknown)}")
        cfg.update(values)
    for k, v in (overrides or {}).items():
        if v is not None:
            cfg[k] = v
    return cfg


def write_flat(path, values: dict):
    lines = []
    for k, v in values.items():
        if isinstance(v, (list, tuple)):
            v = ", ".join(str(x) for x in v)
        lines.append(f"{k} = {'' if v is None else v}")
    Path(path).write_text("\n".join(lines) + "\n")
