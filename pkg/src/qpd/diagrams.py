"""Persistence diagram container and its JSON wire format."""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable

INF = math.inf


def fmt_float(x: float) -> float | str:
    """Round to 9 significant digits; infinities become the ``"inf"`` sentinel."""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return float(f"{x:.9g}")


def parse_float(v) -> float:
    if isinstance(v, str):
        if v in ("inf", "+inf", "Infinity"):
            return INF
        raise ValueError(f"unexpected string value {v!r} in diagram")
    return float(v)


@dataclass(frozen=True)
class PersistenceDiagram:
    """Multiset of ``(birth, death)`` pairs in one homology dimension.

    Points are stored merged and sorted as ``(birth, death, mult)``; ``death``
    may be ``inf``.
    """

    dim: int
    points: tuple[tuple[float, float, int], ...] = ()

    @classmethod
    def from_pairs(cls, dim: int, pairs: Iterable, min_persistence: float = 0.0) -> "PersistenceDiagram":
        """Build from ``(birth, death)`` or ``(birth, death, mult)`` tuples.

        Pairs whose persistence does not exceed ``min_persistence`` are dropped.
        """
        counts: Counter = Counter()
        for item in pairs:
            if len(item) == 3:
                b, d, m = item
            else:
                (b, d), m = item, 1
            b, d, m = float(b), float(d), int(m)
            if m <= 0:
                continue
            if not d - b > min_persistence:
                continue
            counts[(b, d)] += m
        pts = tuple(sorted((b, d, m) for (b, d), m in counts.items()))
        return cls(dim, pts)

    def __len__(self) -> int:
        return sum(m for _, _, m in self.points)

    def expanded(self) -> list[tuple[float, float]]:
        return [(b, d) for b, d, m in self.points for _ in range(m)]

    def finite(self) -> list[tuple[float, float, int]]:
        return [p for p in self.points if math.isfinite(p[1])]

    def essential(self) -> list[tuple[float, float, int]]:
        return [p for p in self.points if not math.isfinite(p[1])]

    def most_persistent(self, n: int = 1) -> list[tuple[float, float]]:
        """The ``n`` finite points of largest persistence (ties by birth)."""
        pts = sorted(self.expanded(), key=lambda p: (-(p[1] - p[0]), p[0], p[1]))
        return [p for p in pts if math.isfinite(p[1])][:n]

    def scaled(self, factor: float) -> "PersistenceDiagram":
        return PersistenceDiagram.from_pairs(
            self.dim, [(b * factor, d * factor, m) for b, d, m in self.points]
        )

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "points": [
                {"birth": fmt_float(b), "death": fmt_float(d), "mult": m} for b, d, m in self.points
            ],
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "PersistenceDiagram":
        try:
            dim = int(obj["dim"])
            pts = [
                (parse_float(p["birth"]), parse_float(p["death"]), int(p.get("mult", 1)))
                for p in obj["points"]
            ]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed diagram object: {exc}") from exc
        return cls.from_pairs(dim, pts)


def dumps(obj) -> str:
    """Canonical JSON text: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=1, allow_nan=False) + "\n"


def load_diagram(path) -> PersistenceDiagram:
    with open(path) as fh:
        obj = json.load(fh)
    if isinstance(obj, dict) and "points" not in obj and "diagram" in obj:
        obj = obj["diagram"]
    if not isinstance(obj, dict):
        raise ValueError(f"{path}: expected a diagram object")
    return PersistenceDiagram.from_dict(obj)
