"""Result records shared by the search engines."""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Exhausted:
    """A search that finished (or hit its node limit) without a witness."""

    reason: str
    nodes: int = 0
    prunes: int = 0
    depth_histogram: dict = field(default_factory=dict)
    bounds: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "status": "exhausted",
            "reason": self.reason,
            "nodes": self.nodes,
            "prunes": self.prunes,
            "depth_histogram": {str(k): v for k, v in sorted(self.depth_histogram.items())},
            "bounds": dict(self.bounds),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Exhausted":
        return cls(
            d["reason"],
            d.get("nodes", 0),
            d.get("prunes", 0),
            {int(k): v for k, v in d.get("depth_histogram", {}).items()},
            dict(d.get("bounds", {})),
        )

    def __bool__(self):
        return False
