"""Key-rate analysis for mode-pairing QKD with flexible pairing.

Scenarios start from the built-in defaults (or a config text in the same
``section.key = value`` format the CLI reads) and accept keyword overrides,
with dots replaced by double underscores or given as a dict::

    import mpqkd
    mpqkd.evaluate(link__distance_km=100, protocol__mode="asymptotic")["key_rate"]["R"]
"""

import csv
import io
import json

from . import _mpqkd
from ._mpqkd import ConfigError

__all__ = [
    "ConfigError",
    "binary_entropy",
    "chernoff",
    "default_config",
    "evaluate",
    "mc_validate",
    "optimize_p_save",
    "plob_bound",
    "sweep",
    "verify",
    "__version__",
]

__version__ = _mpqkd.version()


def _text(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _overrides(overrides, kwargs):
    merged = dict(overrides or {})
    merged.update({k.replace("__", "."): v for k, v in kwargs.items()})
    return {k: _text(v) for k, v in merged.items()}


def default_config():
    """Config text with every key at its default value."""
    return _mpqkd.default_config()


def evaluate(config="", overrides=None, **kwargs):
    """Counts, decoy bounds and key rate for one scenario."""
    return json.loads(_mpqkd.evaluate(config, _overrides(overrides, kwargs)))


def optimize_p_save(config="", overrides=None, resolution=40, **kwargs):
    """Best p_save for the flexible strategy and the rate it achieves."""
    return json.loads(_mpqkd.optimize(config, _overrides(overrides, kwargs), resolution))


def sweep(distances, config="", overrides=None, optimize=True, resolution=40, **kwargs):
    """Both strategies over a distance grid; one dict per (distance, strategy) row."""
    text = _mpqkd.sweep_csv(config, _overrides(overrides, kwargs), [float(d) for d in distances], optimize, resolution)
    rows = list(csv.DictReader(io.StringIO(text)))
    for row in rows:
        for key in ("distance_km", "N", "p_save", "R", "E_z", "n11_lower", "e11x_upper", "improvement"):
            row[key] = float(row[key])
        row["l"] = int(row["l"])
    return rows


def mc_validate(seed=1, rounds=10_000_000, config="", overrides=None, **kwargs):
    """Monte Carlo run compared with the analytic counts."""
    return json.loads(_mpqkd.mc_validate(config, _overrides(overrides, kwargs), seed, rounds))


def chernoff(n, eps_l=1e-10, eps_u=1e-10):
    """Lower and upper bounds on the expectation of an observed count."""
    return json.loads(_mpqkd.chernoff(n, eps_l, eps_u))


def verify():
    """Algebra checks as (name, deviation, tolerance) tuples."""
    return _mpqkd.verify()


binary_entropy = _mpqkd.binary_entropy
plob_bound = _mpqkd.plob_bound
