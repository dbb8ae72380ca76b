"""
Protocol messages and communication accounting.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from algebra.field import FieldElement
from algebra.poly import HasseVector


@dataclass(frozen=True)
class Query:
    """Point C(b_i) in H_m^k sent to server `server` (0-based)."""
    server: int
    point: tuple[FieldElement, ...]

    @property
    def k(self) -> int:
        return len(self.point)


@dataclass(frozen=True)
class Answer:
    """F^(<e) at the queried point, in multi-index order."""
    server: int
    values: tuple[FieldElement, ...]

    def at(self, point: tuple[FieldElement, ...], e: int) -> HasseVector:
        return HasseVector(point, e, self.values)


@dataclass
class LinkStats:
    """Traffic with one server. Element bytes are the encoded payload past the frame header and prefix; frame bytes are what crossed the wire."""
    server: int
    up_elements: int = 0
    down_elements: int = 0
    up_bytes: int = 0
    down_bytes: int = 0
    up_frame_bytes: int = 0
    down_frame_bytes: int = 0

    def to_dict(self) -> dict:
        return {
            "server": self.server,
            "up_elements": self.up_elements,
            "down_elements": self.down_elements,
            "up_bytes": self.up_bytes,
            "down_bytes": self.down_bytes,
            "up_frame_bytes": self.up_frame_bytes,
            "down_frame_bytes": self.down_frame_bytes,
        }


@dataclass
class Transcript:
    links: list[LinkStats] = field(default_factory=list)

    @property
    def up_elements(self) -> int:
        return sum(link.up_elements for link in self.links)

    @property
    def down_elements(self) -> int:
        return sum(link.down_elements for link in self.links)

    @property
    def up_bytes(self) -> int:
        return sum(link.up_bytes for link in self.links)

    @property
    def down_bytes(self) -> int:
        return sum(link.down_bytes for link in self.links)

    @property
    def total_bytes(self) -> int:
        return self.up_bytes + self.down_bytes

    @property
    def frame_bytes(self) -> int:
        return sum(link.up_frame_bytes + link.down_frame_bytes for link in self.links)

    def to_dict(self) -> dict:
        return {
            "links": [link.to_dict() for link in self.links],
            "up_elements": self.up_elements,
            "down_elements": self.down_elements,
            "total_bytes": self.total_bytes,
            "frame_bytes": self.frame_bytes,
        }


@dataclass(frozen=True)
class CostModel:
    """Closed-form communication: t*k elements up, t*C(k+e-1, e-1) down."""
    t: int
    k: int
    e: int
    width: int
    answer_length: int

    @property
    def up_elements(self) -> int:
        return self.t * self.k

    @property
    def down_elements(self) -> int:
        return self.t * self.answer_length

    @property
    def up_bytes(self) -> int:
        return self.up_elements * self.width

    @property
    def down_bytes(self) -> int:
        return self.down_elements * self.width

    @property
    def total_bytes(self) -> int:
        return self.up_bytes + self.down_bytes

    def matches(self, transcript: Transcript) -> bool:
        return (
            transcript.up_elements == self.up_elements
            and transcript.down_elements == self.down_elements
            and transcript.up_bytes == self.up_bytes
            and transcript.down_bytes == self.down_bytes
        )

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "k": self.k,
            "e": self.e,
            "up_elements": self.up_elements,
            "down_elements": self.down_elements,
            "up_bytes": self.up_bytes,
            "down_bytes": self.down_bytes,
        }
