"""CSV and JSON writers: comma-separated, header row, LF endings, rationals as "p/q"."""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Iterable, Sequence


def rational(x) -> int | str:
    """Integers stay integers; other rationals become "p/q"."""
    x = Fraction(x)
    if x.denominator == 1:
        return x.numerator
    return f"{x.numerator}/{x.denominator}"


def _cell(x):
    if isinstance(x, Fraction):
        return rational(x)
    if isinstance(x, (list, tuple)):
        return " ".join(str(_cell(v)) for v in x)
    if x is None:
        return ""
    return x


def to_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(x) for x in row])
    return buf.getvalue()


def _default(obj):
    if isinstance(obj, Fraction):
        return rational(obj)
    if hasattr(obj, "tolist"):
        return obj.tolist()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def to_json(obj) -> str:
    return json.dumps(obj, default=_default, separators=(",", ":"), allow_nan=False) + "\n"


def growth_json(label: str, params: dict, values: Iterable[tuple[int, int]]) -> dict:
    return {"label": label, "params": params, "values": [[n, v] for n, v in values]}
