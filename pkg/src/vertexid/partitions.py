"""Integer partitions and their box statistics (arm, leg, hook, kappa).

A partition is stored as a weakly decreasing tuple of positive integers.
Boxes use matrix-style 1-based coordinates: (i, j) belongs to the diagram
when 1 <= i <= len(parts) and 1 <= j <= parts[i-1].
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Iterator, Sequence


class PartitionError(ValueError):
    pass


class Partition:
    """Immutable weakly decreasing sequence of positive integers."""

    __slots__ = ("parts",)

    def __init__(self, parts: Iterable[int] = ()):
        parts = tuple(int(p) for p in parts)
        for a, b in zip(parts, parts[1:]):
            if a < b:
                raise PartitionError(f"parts not weakly decreasing: {parts}")
        if parts and parts[-1] < 1:
            raise PartitionError(f"parts must be positive: {parts}")
        object.__setattr__(self, "parts", parts)

    def __setattr__(self, name, value):
        raise AttributeError("Partition is immutable")

    # -- basic protocol ----------------------------------------------------
    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __getitem__(self, i: int) -> int:
        return self.parts[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, Partition) and self.parts == other.parts

    def __lt__(self, other: "Partition") -> bool:
        return self.parts < other.parts

    def __hash__(self) -> int:
        return hash(self.parts)

    def __repr__(self) -> str:
        return f"Partition({list(self.parts)!r})"

    def __str__(self) -> str:
        return ",".join(str(p) for p in self.parts) if self.parts else "()"

    # -- statistics ---------------------------------------------------------
    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def part(self, i: int) -> int:
        """Part at 1-based index i, zero beyond the last row."""
        return self.parts[i - 1] if 1 <= i <= len(self.parts) else 0

    def transpose(self) -> "Partition":
        if not self.parts:
            return _EMPTY
        cols = self.parts[0]
        return Partition(sum(1 for p in self.parts if p >= j) for j in range(1, cols + 1))

    def contains(self, other: "Partition") -> bool:
        """Diagram containment: other fits inside self row by row."""
        return all(other.part(i) <= self.part(i) for i in range(1, len(other) + 1))

    def boxes(self) -> Iterator[tuple[int, int]]:
        for i, p in enumerate(self.parts, start=1):
            for j in range(1, p + 1):
                yield (i, j)

    def norm_sq(self) -> int:
        return sum(p * p for p in self.parts)

    def kappa(self) -> int:
        """Sum of p_i*(p_i + 1 - 2i); antisymmetric under transpose."""
        return sum(p * (p + 1 - 2 * i) for i, p in enumerate(self.parts, start=1))

    # -- box statistics -------------------------------------------------------
    def _check_box(self, i: int, j: int) -> None:
        if not (1 <= i <= len(self.parts) and 1 <= j <= self.parts[i - 1]):
            raise PartitionError(f"box ({i},{j}) outside partition {self.parts}")

    def arm(self, i: int, j: int) -> int:
        self._check_box(i, j)
        return self.transpose().part(j) - i

    def leg(self, i: int, j: int) -> int:
        self._check_box(i, j)
        return self.parts[i - 1] - j

    def hook(self, i: int, j: int) -> int:
        self._check_box(i, j)
        return self.parts[i - 1] + self.transpose().part(j) - i - j + 1

    def hooks(self) -> list[int]:
        """Multiset of hook lengths, one per box, row-major order."""
        t = self.transpose()
        return [self.parts[i - 1] + t.part(j) - i - j + 1 for (i, j) in self.boxes()]

    # -- serialization --------------------------------------------------------
    def to_json(self) -> list[int]:
        return list(self.parts)

    @classmethod
    def from_json(cls, data: Sequence[int]) -> "Partition":
        return cls(data)

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Parse a comma-separated literal like "5,3,2,2,1"; "" is empty."""
        text = text.strip()
        if not text:
            return _EMPTY
        try:
            parts = [int(tok) for tok in text.split(",")]
        except ValueError as exc:
            raise PartitionError(f"bad partition literal {text!r}") from exc
        return cls(parts)


_EMPTY = Partition(())


def empty() -> Partition:
    return _EMPTY


@lru_cache(maxsize=None)
def partitions_of(n: int) -> tuple[Partition, ...]:
    """All partitions of n, lexicographically decreasing: (n) first."""
    if n < 0:
        raise PartitionError("n must be >= 0")

    def gen(remaining: int, cap: int, prefix: tuple[int, ...]):
        if remaining == 0:
            yield Partition(prefix)
            return
        for first in range(min(cap, remaining), 0, -1):
            yield from gen(remaining - first, first, prefix + (first,))

    return tuple(gen(n, n, ()))


def partitions_up_to(n: int) -> tuple[Partition, ...]:
    """All partitions of size 0..n, ordered by size then lexicographically."""
    out: list[Partition] = []
    for k in range(n + 1):
        out.extend(partitions_of(k))
    return tuple(out)


def subpartitions(envelope: Partition) -> tuple[Partition, ...]:
    """All partitions contained in the given envelope diagram."""

    def gen(i: int, cap: int, prefix: tuple[int, ...]):
        yield Partition(prefix)
        if i > len(envelope):
            return
        top = min(cap, envelope.part(i))
        for p in range(top, 0, -1):
            yield from gen(i + 1, p, prefix + (p,))

    seen = set()
    out = []
    for p in gen(1, envelope.part(1) if len(envelope) else 0, ()):
        if p not in seen:
            seen.add(p)
            out.append(p)
    return tuple(out)


def common_subpartitions(a: Partition, b: Partition) -> tuple[Partition, ...]:
    """Partitions contained in both a and b (envelope = rowwise minimum)."""
    rows = min(len(a), len(b))
    envelope = Partition(
        [min(a.part(i), b.part(i)) for i in range(1, rows + 1) if min(a.part(i), b.part(i)) > 0]
    )
    return subpartitions(envelope)
