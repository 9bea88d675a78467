"""JSON encoding of specs and reports.

Complex numbers are ``[re, im]`` pairs; plain real numbers are accepted on
input. :func:`dumps` writes floats with 17 significant digits and keeps dict
insertion order, so equal inputs give byte-identical output.
"""

import json
import math

import numpy as np

from .boundary import Direction, MixedBC, OneDimBC, SeparatedBC, ThreeDimBC, Variant
from .errors import PtBiextError


class SpecError(PtBiextError):
    """A spec document is structurally invalid."""


# --- scalars -------------------------------------------------------------------------


def encode_complex(z):
    z = complex(z)
    return [z.real, z.imag]


def decode_complex(v):
    if isinstance(v, bool):
        raise SpecError(f"expected a number, got {v!r}")
    if isinstance(v, (int, float)):
        return complex(float(v), 0.0)
    if isinstance(v, (list, tuple)) and len(v) == 2 and all(
        isinstance(x, (int, float)) and not isinstance(x, bool) for x in v
    ):
        return complex(float(v[0]), float(v[1]))
    raise SpecError(f"expected a number or [re, im], got {v!r}")


def _real(v, name):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise SpecError(f"{name} must be a real number, got {v!r}")
    return float(v)


def encode_matrix(m):
    return [[encode_complex(x) for x in row] for row in np.asarray(m)]


def decode_matrix(v):
    if not (isinstance(v, list) and len(v) == 2 and all(isinstance(r, list) and len(r) == 2 for r in v)):
        raise SpecError(f"expected a 2x2 matrix, got {v!r}")
    return [[decode_complex(x) for x in row] for row in v]


# --- specs -----------------------------------------------------------------------------


def spec_to_dict(spec):
    if isinstance(spec, SeparatedBC):
        return {
            "type": "separated",
            "xi": encode_complex(spec.xi),
            "eta": encode_complex(spec.eta),
            "alpha": spec.alpha,
            "beta": spec.beta,
        }
    if isinstance(spec, MixedBC):
        return {"type": "mixed", "direction": spec.direction.value, "matrix": encode_matrix(spec.matrix)}
    if isinstance(spec, ThreeDimBC):
        return {"type": "three_dim", "coeffs": [encode_complex(c) for c in spec.coeffs]}
    if isinstance(spec, OneDimBC):
        return {
            "type": "one_dim",
            "variant": spec.variant.value,
            "pair": [encode_complex(c) for c in spec.pair],
            "matrix": encode_matrix(spec.matrix),
        }
    raise TypeError(f"not an extension spec: {spec!r}")


def _require(d, keys):
    missing = [k for k in keys if k not in d]
    if missing:
        raise SpecError(f"{d.get('type')} spec is missing {missing}")


def spec_from_dict(d):
    """Build a spec; raises :class:`SpecError` (or ``RankDeficient``) on bad input."""
    if not isinstance(d, dict) or "type" not in d:
        raise SpecError("a spec must be an object with a 'type' field")
    kind = d["type"]
    try:
        if kind == "separated":
            _require(d, ["xi", "eta", "alpha", "beta"])
            return SeparatedBC(
                decode_complex(d["xi"]),
                decode_complex(d["eta"]),
                _real(d["alpha"], "alpha"),
                _real(d["beta"], "beta"),
            )
        if kind == "mixed":
            _require(d, ["matrix"])
            direction = d.get("direction", Direction.ALPHA_FROM_BETA.value)
            return MixedBC(decode_matrix(d["matrix"]), Direction(direction))
        if kind == "three_dim":
            _require(d, ["coeffs"])
            coeffs = d["coeffs"]
            if not (isinstance(coeffs, list) and len(coeffs) == 4):
                raise SpecError("three_dim coeffs must be a list of 4 numbers")
            return ThreeDimBC(*(decode_complex(c) for c in coeffs))
        if kind == "one_dim":
            _require(d, ["variant", "pair", "matrix"])
            pair = d["pair"]
            if not (isinstance(pair, list) and len(pair) == 2):
                raise SpecError("one_dim pair must be a list of 2 numbers")
            return OneDimBC(
                Variant(d["variant"]),
                tuple(decode_complex(c) for c in pair),
                decode_matrix(d["matrix"]),
            )
    except ValueError as exc:
        # enum lookups and unit-modulus checks
        raise SpecError(str(exc)) from exc
    raise SpecError(f"unknown spec type {kind!r}")


def loads_spec(text):
    """Parse spec JSON text. ``json.JSONDecodeError`` is left to the caller."""
    return spec_from_dict(json.loads(text))


# --- reports ---------------------------------------------------------------------------


def report_to_dict(report):
    return {
        "dimension": report.dimension,
        "self_adjoint": report.self_adjoint,
        "p_self_adjoint": report.p_self_adjoint,
        "pt_symmetric": report.pt_symmetric,
        "phase": report.phase,
        "normal_form": None if report.normal_form is None else encode_matrix(report.normal_form),
    }


def subspace_to_list(space):
    """Orthonormal basis vectors of a boundary subspace, one list per vector."""
    return [[encode_complex(x) for x in col] for col in space.basis.T]


# --- deterministic output --------------------------------------------------------------


def _fmt(obj):
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return "null"
        if x == 0.0:
            return "0.0"
        text = "%.17g" % x
        if not any(ch in text for ch in ".en"):
            text += ".0"
        return text
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_fmt(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in obj) + "]"
    if isinstance(obj, (complex, np.complexfloating)):
        return _fmt(encode_complex(obj))
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj):
    """Compact, deterministic JSON with floats at 17 significant digits."""
    return _fmt(obj)
