"""Space-description documents: the JSON wire format shared by all tools.

A document looks like
    { "n": 4, "blocks": [[0,1],[2,3]], "rho": ["1/6","1/3","1/4","1/4"] }
with rationals carried as "p/q" strings so exactness survives transport.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import ParseError
from .measures import RationalMeasure
from .rationals import format_fraction, parse_fraction
from .spaces import FinitePartition, FiniteSpace, make_partition


@dataclass(frozen=True)
class SpaceDescription:
    """One finite instance: space, conditioning partition, and measure."""

    space: FiniteSpace
    partition: FinitePartition
    rho: RationalMeasure

    def to_json_dict(self) -> dict:
        return {
            "n": self.space.n,
            "blocks": [sorted(b) for b in self.partition.blocks],
            "rho": [format_fraction(w) for w in self.rho.weights],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2) + "\n"


def parse_space_description(doc: dict) -> SpaceDescription:
    """Validate a parsed JSON document into a SpaceDescription.

    Shape problems raise ParseError; value problems (bad partitions, weights
    not summing to one) surface as InvariantViolation from the constructors.
    """
    if not isinstance(doc, dict):
        raise ParseError("space description must be a JSON object")
    for key in ("n", "blocks", "rho"):
        if key not in doc:
            raise ParseError(f"space description is missing {key!r}")
    n = doc["n"]
    if not isinstance(n, int):
        raise ParseError("n must be an integer")
    blocks = doc["blocks"]
    if not isinstance(blocks, list) or not all(isinstance(b, list) for b in blocks):
        raise ParseError("blocks must be a list of lists of point indices")
    weights = doc["rho"]
    if not isinstance(weights, list):
        raise ParseError("rho must be a list of rationals")

    space = FiniteSpace(n)
    partition = make_partition(space, blocks)
    rho = RationalMeasure(space, tuple(parse_fraction(w) for w in weights))
    return SpaceDescription(space, partition, rho)


def load_space_description(path) -> SpaceDescription:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc}") from exc
    return parse_space_description(doc)


def dump_json(obj: dict) -> str:
    """Canonical JSON emission: stable key order, two-space indent, newline."""
    return json.dumps(obj, indent=2) + "\n"
