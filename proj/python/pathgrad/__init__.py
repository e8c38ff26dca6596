"""Path-integral gradient attribution: integrated gradients along arbitrary paths."""

import json

from . import _core
from ._core import Field, Path, PathgradError

__all__ = [
    "Field",
    "Path",
    "PathgradError",
    "error_code",
    "field",
    "path",
    "integrated_gradients",
    "refine",
    "kink_crossings",
    "demonstrate_asymmetry",
    "validate_spec",
]


def error_code(exc):
    """Name of the failure carried by a PathgradError, e.g. "OutOfDomain"."""
    return str(exc).split(":", 1)[0]


def field(spec):
    return Field.from_json(spec if isinstance(spec, str) else json.dumps(spec))


def path(spec):
    return Path.from_json(spec if isinstance(spec, str) else json.dumps(spec))


def integrated_gradients(f, p, rule="gauss_legendre", nodes=32, split_at=()):
    return json.loads(_core.integrated_gradients(f, p, rule, nodes, list(split_at)))


def refine(f, p, tol=1e-6, max_nodes=65536, split_kinks=True):
    return json.loads(_core.refine(f, p, tol, max_nodes, split_kinks))


def kink_crossings(f, p):
    return _core.kink_crossings(f, p)


def demonstrate_asymmetry(p, i, j, rule="gauss_legendre", nodes=32):
    return json.loads(_core.demonstrate_asymmetry(p, i, j, rule, nodes))


def validate_spec(spec):
    return json.loads(_core.validate_spec(spec if isinstance(spec, str) else json.dumps(spec)))
