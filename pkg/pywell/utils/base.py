import hashlib
import json
from fractions import Fraction
from pathlib import Path

import numpy as np
from sklearn.utils.validation import check_array


class SpecError(ValueError):
    """Malformed JSON input; the message names the offending field."""


def validate_input(x, dim=None, name="x"):
    """Return ``x`` as a float array of points with a last axis of size ``dim``."""
    try:
        x = np.asarray(x, dtype=float)
    except (TypeError, ValueError):
        raise ValueError("{} must be array-like".format(name))
    if x.ndim == 0:
        x = x.reshape(1)
    check_array(x.reshape(-1, x.shape[-1]))
    if dim is not None and x.shape[-1] != dim:
        raise ValueError(
            "{} has dimension {}, expected {}".format(name, x.shape[-1], dim)
        )
    return x


def validate_positive(value, name):
    if not np.isscalar(value) or not np.isfinite(value) or value <= 0:
        raise ValueError("{} must be a positive number, got {}".format(name, value))
    return value


def reduce_mod1(x):
    """Reduce torus coordinates to [0, 1)."""
    x = np.asarray(x, dtype=float)
    r = x - np.floor(x)
    # floor can round 1 - tiny up to exactly 1
    return np.where(r >= 1.0, 0.0, r)


def torus_difference(a, b):
    """Componentwise signed difference ``a - b`` on R/Z, in [-1/2, 1/2)."""
    d = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
    return d - np.floor(d + 0.5)


def torus_distance(a, b):
    """Largest coordinate distance between points of the torus."""
    return float(np.max(np.abs(torus_difference(a, b))))


def fraction_to_str(value):
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return "{}/{}".format(value.numerator, value.denominator)


def fraction_from_str(text):
    try:
        return Fraction(text)
    except (TypeError, ValueError, ZeroDivisionError):
        raise SpecError("not a rational number: {!r}".format(text))


def load_spec(source):
    """Read a JSON input from a path, or pass a dict through."""
    if isinstance(source, dict):
        return source
    path = Path(source)
    try:
        with open(path, "r") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise SpecError(
            "{}: line {} column {}: {}".format(path, e.lineno, e.colno, e.msg)
        )


def require(spec, key, kind=None):
    """Fetch ``spec[key]``, raising SpecError naming the field when absent."""
    if not isinstance(spec, dict):
        raise SpecError("expected an object, got {}".format(type(spec).__name__))
    if key not in spec:
        raise SpecError("missing field '{}'".format(key))
    value = spec[key]
    if kind is not None and not isinstance(value, kind):
        raise SpecError(
            "field '{}' must be {}, got {}".format(
                key, getattr(kind, "__name__", kind), type(value).__name__
            )
        )
    return value


def file_sha256(path):
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def print_terms(coef, input_features, precision=3):
    """Format a linear combination ``sum coef_i * feature_i`` as a string."""

    def term(c, name):
        rounded_coef = np.round(float(c), precision)
        if rounded_coef == 0:
            return ""
        if name == "1":
            return f"{float(c):.{precision}f}"
        return f"{float(c):.{precision}f} {name}"

    components = [term(c, i) for c, i in zip(coef, input_features)]
    eq = " + ".join(filter(bool, components))
    return eq or f"{0:.{precision}f}"


def decimal_fraction(value):
    """Exact rational read from the shortest decimal form of ``value``."""
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    return Fraction(repr(float(value)))
