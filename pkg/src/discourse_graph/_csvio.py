"""Deterministic CSV/JSON writers (UTF-8, RFC 4180 quoting)."""

from __future__ import annotations

import csv
import json
import math
import os
from typing import Iterable, Sequence


def fmt(value) -> str:
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)
    return str(value)


def write_csv(path: os.PathLike | str, header: Sequence[str], rows: Iterable[Sequence]) -> int:
    """Write rows and return how many were written (header excluded)."""
    n = 0
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])
            n += 1
    return n


def read_csv(path: os.PathLike | str) -> tuple[list[str], list[list[str]]]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, [])
        return header, [row for row in reader]


def write_json(path: os.PathLike | str, obj) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, ensure_ascii=False, indent=2, sort_keys=True)
        fh.write("\n")
