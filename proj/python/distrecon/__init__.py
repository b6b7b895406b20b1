"""Distance reconstruction from randomly revealed pairs, and graph bootstrap percolation."""

import json
from fractions import Fraction

from . import _core
from ._core import (
    Error,
    build_gadget,
    closure,
    embed_from_distances,
    is_independent,
    p_star,
    polluted_closure,
    recover_missing_distance,
)

__all__ = [
    "Error",
    "build_gadget",
    "closure",
    "embed_from_distances",
    "eta",
    "generate_points",
    "is_independent",
    "p_star",
    "polluted_closure",
    "reconstruct",
    "recover_missing_distance",
    "run_trials",
    "scan",
]


def _text(obj):
    return obj if isinstance(obj, str) else json.dumps(obj)


def eta(d):
    """Percolation exponent eta(d) as an exact fraction."""
    return Fraction(*_core.eta(d))


def generate_points(instance):
    """Point configuration (n x d array) for an instance spec dict."""
    return _core.generate_points(_text(instance))


def reconstruct(reveal, delta=0.1, rounds_per_level=0):
    """Pipeline report for a reveal file given as dict or JSON text."""
    return json.loads(_core.reconstruct(_text(reveal), delta, rounds_per_level))


def run_trials(config):
    """Per-trial reports for a schema-1 harness config."""
    return json.loads(_core.run_trials(_text(config)))


def scan(config):
    """Threshold scan: returns (report dict, csv text, svg text)."""
    report, csv, svg = _core.scan(_text(config))
    return json.loads(report), csv, svg
