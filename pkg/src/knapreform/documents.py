"""Instance and report serialization.

Big integers travel as decimal strings, rationals as "num/den" strings;
floats never appear in an exact field.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Iterable

from .errors import InstanceError
from .exact import Matrix, Rational, format_decimal, sqrt_decimal_str
from .reform import KnapsackInstance, normalize_gcd

INSTANCE_SCHEMA = "knapreform.instance/1"
REPORT_SCHEMA = "knapreform.report/1"


def q(x: Rational) -> str:
    """Exact rational as a string."""
    return str(Fraction(x))


def exact_and_display(x: Rational) -> dict:
    return {"exact": q(x), "display": format_decimal(x)}


def ratio_field(ratio_sq: Rational) -> dict:
    """(||r||/lam)^2 exactly, plus a display-only rendering of ||r||/lam."""
    return {"squared_exact": q(ratio_sq), "display": sqrt_decimal_str(ratio_sq)}


def mat(M: Matrix) -> list[list[str]]:
    return [[q(x) for x in r] for r in M.rows]


def ivec(xs: Iterable) -> list[str]:
    return [q(x) for x in xs]


def _sorted(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {k: _sorted(obj[k]) for k in sorted(obj)}
    if isinstance(obj, list):
        return [_sorted(x) for x in obj]
    return obj


def instance_to_doc(inst: KnapsackInstance, provenance: dict | None = None) -> dict:
    doc = {
        "schema": INSTANCE_SCHEMA,
        "n": inst.n,
        "a": [str(x) for x in inst.a],
        "v": [str(x) for x in inst.v],
        "beta1": str(inst.beta1),
        "beta2": str(inst.beta2),
    }
    if provenance:
        doc["provenance"] = _sorted(provenance)
    return doc


def dumps_instance(inst: KnapsackInstance, provenance: dict | None = None) -> str:
    return json.dumps(instance_to_doc(inst, provenance))


def _int_field(doc: dict, key: str) -> int:
    if key not in doc:
        raise InstanceError(f"missing field {key!r}")
    val = doc[key]
    if isinstance(val, bool) or not isinstance(val, (int, str)):
        raise InstanceError(f"field {key!r} must be an integer or decimal string")
    try:
        return int(val)
    except ValueError:
        raise InstanceError(f"field {key!r} is not a decimal integer: {val!r}") from None


def _int_list(doc: dict, key: str) -> list[int]:
    vals = doc.get(key)
    if not isinstance(vals, list):
        raise InstanceError(f"field {key!r} must be a list")
    return [_int_field({key: x}, key) for x in vals]


def parse_instance_doc(doc: Any, normalize: bool = False) -> tuple[KnapsackInstance, dict | None]:
    """Validate an instance document; raises InstanceError with a readable message."""
    if not isinstance(doc, dict):
        raise InstanceError("instance document must be a JSON object")
    schema = doc.get("schema", INSTANCE_SCHEMA)
    if schema != INSTANCE_SCHEMA:
        raise InstanceError(f"unsupported schema {schema!r}")
    a = _int_list(doc, "a")
    v = _int_list(doc, "v")
    b1, b2 = _int_field(doc, "beta1"), _int_field(doc, "beta2")
    if "n" in doc and _int_field(doc, "n") != len(a):
        raise InstanceError(f"n = {doc['n']} but a has {len(a)} entries")
    if b1 > b2:
        raise InstanceError(f"beta1 = {b1} exceeds beta2 = {b2}")
    if normalize:
        inst = normalize_gcd(a, v, b1, b2)
    else:
        inst = KnapsackInstance(tuple(a), tuple(v), b1, b2)
    prov = doc.get("provenance")
    return inst, prov


def loads_instances(text: str, normalize: bool = False) -> list[tuple[KnapsackInstance, dict | None]]:
    """Parse one JSON document, a JSON list, or JSON Lines."""
    text = text.strip()
    if not text:
        return []
    try:
        obj = json.loads(text)
        docs = obj if isinstance(obj, list) else [obj]
    except json.JSONDecodeError:
        try:
            docs = [json.loads(line) for line in text.splitlines() if line.strip()]
        except json.JSONDecodeError as e:
            raise InstanceError(f"invalid JSON: {e}") from None
    return [parse_instance_doc(d, normalize) for d in docs]


def verdict(x: bool | None) -> bool | str:
    """Tri-state rendering: true / false / "n/a"."""
    return "n/a" if x is None else bool(x)
