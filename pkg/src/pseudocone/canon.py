"""Canonical, order-independent JSON encodings used as literal identifiers."""
import json
from fractions import Fraction

from .matrix import Matrix


def plain(x):
    if isinstance(x, Matrix):
        return {"matrix": x.to_json(), "shape": [x.rows, x.cols]}
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, (list, tuple)):
        return [plain(v) for v in x]
    if isinstance(x, dict):
        return {key(k) if not isinstance(k, str) else k: plain(v) for k, v in x.items()}
    if isinstance(x, frozenset):
        return sorted(plain(v) for v in x)
    return x


def key(x):
    return json.dumps(plain(x), sort_keys=True, separators=(",", ":"))
