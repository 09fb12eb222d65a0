"""JSON-friendly serialization: rationals as "p/q" strings, balls as
{mid, rad, bits}; no floats anywhere in reports."""

from __future__ import annotations

import json
from dataclasses import asdict, is_dataclass
from fractions import Fraction

from .ball import ComplexBall, RealBall
from .instability import InstabilityReport, Verdict
from .melb import SideReport
from .padic import PadicBall


def frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def parse_frac(s) -> Fraction:
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    return Fraction(s.strip())


def to_jsonable(obj, bits: int = 128):
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, Fraction):
        return frac_str(obj)
    if isinstance(obj, float):
        raise TypeError("floats are not allowed in reports")
    if isinstance(obj, RealBall):
        return {"mid": frac_str(obj.mid), "rad": frac_str(obj.rad), "bits": bits}
    if isinstance(obj, ComplexBall):
        return {"re": to_jsonable(obj.re, bits), "im": to_jsonable(obj.im, bits)}
    if isinstance(obj, PadicBall):
        return repr(obj)
    if isinstance(obj, Verdict):
        return {"verdict": obj.as_json(), "precision": obj.precision}
    if isinstance(obj, SideReport):
        return {
            "inequality": obj.inequality,
            "lhs": to_jsonable(obj.lhs, bits),
            "rhs": to_jsonable(obj.rhs, bits),
            "slack": to_jsonable(obj.slack, bits),
            "verdict": _verdict_str(obj.verdict),
            "constants": to_jsonable(obj.constants, bits),
            "per_place": to_jsonable(obj.per_place, bits),
            "notes": list(obj.notes),
        }
    if isinstance(obj, InstabilityReport):
        return {
            "mu": obj.mu,
            "graded_dims": {str(k): v for k, v in sorted(obj.graded_dims.items())},
            "p_min": obj.p_min,
            "p_max": obj.p_max,
        }
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v, bits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v, bits) for v in obj]
    if is_dataclass(obj):
        return to_jsonable(asdict(obj), bits)
    return repr(obj)


def _verdict_str(v) -> str:
    if v is True:
        return "true"
    if v is False:
        return "false"
    return "unknown"


def dump_report(obj, bits: int = 128) -> str:
    return json.dumps(to_jsonable(obj, bits), indent=2, sort_keys=True) + "\n"
