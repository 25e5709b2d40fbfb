"""Static hash partitioning of state descriptors across workers."""
from __future__ import annotations

from dataclasses import dataclass

FNV_OFFSET_BASIS = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
_MASK64 = (1 << 64) - 1


def fnv1a64(data: bytes, basis: int = FNV_OFFSET_BASIS) -> int:
    h = basis
    for byte in data:
        h = ((h ^ byte) * FNV_PRIME) & _MASK64
    return h


class SliceError(ValueError):
    pass


@dataclass(frozen=True)
class SliceSpec:
    """Byte ranges of the descriptor fed to the hash; empty means all of it."""

    ranges: tuple = ()

    @classmethod
    def parse(cls, text: str | None) -> "SliceSpec":
        """Parse ``off:len[,off:len...]``; empty or ``None`` is the full descriptor."""
        if not text:
            return cls()
        ranges = []
        for part in text.split(","):
            try:
                off, length = part.split(":")
                ranges.append((int(off, 0), int(length, 0)))
            except ValueError:
                raise SliceError(f"bad slice component {part!r}; expected off:len") from None
        return cls(tuple(ranges))

    def validate(self, descriptor_len: int) -> None:
        end = 0
        for off, length in self.ranges:
            if off < 0 or length < 1:
                raise SliceError(f"slice {off}:{length} is empty or negative")
            if off < end:
                raise SliceError("slice ranges must be ordered and non-overlapping")
            end = off + length
            if end > descriptor_len:
                raise SliceError(f"slice {off}:{length} exceeds descriptor length {descriptor_len}")

    def __str__(self):
        return ",".join(f"{o}:{n}" for o, n in self.ranges)


@dataclass(frozen=True)
class PartitionFn:
    k: int
    slice: SliceSpec
    seed: int = FNV_OFFSET_BASIS

    def __call__(self, state: bytes) -> int:
        if self.k == 1:
            return 0
        if self.slice.ranges:
            state = b"".join(state[o:o + n] for o, n in self.slice.ranges)
        h = self.seed
        for byte in state:
            h = ((h ^ byte) * FNV_PRIME) & _MASK64
        return h % self.k


def make_partition(k: int, slice: SliceSpec | None = None, seed: int = FNV_OFFSET_BASIS,
                   descriptor_len: int | None = None) -> PartitionFn:
    if k < 1:
        raise ValueError("worker count must be at least 1")
    slice = slice or SliceSpec()
    if descriptor_len is not None:
        slice.validate(descriptor_len)
    return PartitionFn(k, slice, seed & _MASK64)


def owner(p: PartitionFn, state: bytes) -> int:
    return p(state)
