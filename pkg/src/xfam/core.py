"""Subsets as bit masks, uniform families, and the intersection predicates.

Element ``i`` of the ground set ``[n] = {1, ..., n}`` is stored as bit ``i - 1``.
Everything here is exact integer arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator

MAX_GROUND = 64


class ParameterError(ValueError):
    """Arguments outside an operation's admissible range."""


class DomainError(ValueError):
    """Input that violates an operation's mathematical precondition."""


class CapacityError(RuntimeError):
    """Instance too large for the requested exhaustive method."""


def to_mask(elements: Iterable[int]) -> int:
    mask = 0
    for x in elements:
        if x < 1 or x > MAX_GROUND:
            raise ParameterError(f"element {x} outside [1, {MAX_GROUND}]")
        mask |= 1 << (x - 1)
    return mask


def elements(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length())
        mask ^= low
    return out


def popcount(mask: int) -> int:
    return mask.bit_count()


def ground_mask(n: int) -> int:
    return (1 << n) - 1


def s_plus(mask: int) -> int:
    """Largest element of the set (0 for the empty set)."""
    return mask.bit_length()


def binomial(n: int, k: int) -> int:
    """C(n, k) with the zero convention for k < 0 or k > n."""
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


def iter_k_subsets(n: int, k: int) -> Iterator[int]:
    """Yield the k-subsets of [n] in increasing integer order (Gosper's hack)."""
    if k == 0:
        yield 0
        return
    x = (1 << k) - 1
    limit = 1 << n
    while x < limit:
        yield x
        c = x & -x
        r = x + c
        x = (((r ^ x) >> 2) // c) | r


def enumerate_k_subsets(n: int, k: int) -> list[int]:
    if n > MAX_GROUND or n < 0:
        raise ParameterError(f"ground size {n} outside [0, {MAX_GROUND}]")
    if k < 0 or k > n:
        raise ParameterError(f"k={k} outside [0, n={n}]")
    return list(iter_k_subsets(n, k))


def intersection_size(a: int, b: int) -> int:
    return (a & b).bit_count()


@dataclass(frozen=True)
class UniformFamily:
    """A k-uniform family on ``[ground_size]``; ``members`` is kept sorted and unique."""

    ground_size: int
    k: int
    members: tuple[int, ...] = ()

    def __post_init__(self):
        n, k = self.ground_size, self.k
        if not 0 < n <= MAX_GROUND:
            raise ParameterError(f"ground size {n} outside [1, {MAX_GROUND}]")
        if not 0 <= k <= n:
            raise ParameterError(f"k={k} outside [0, {n}]")
        members = tuple(sorted(set(self.members)))
        outside = ~ground_mask(n)
        for a in members:
            if a < 0 or a & outside:
                raise ParameterError(f"member {a:#x} not a subset of [{n}]")
            if a.bit_count() != k:
                raise ParameterError(f"member {a:#x} does not have size {k}")
        object.__setattr__(self, "members", members)

    @classmethod
    def from_sets(cls, n: int, k: int, sets: Iterable[Iterable[int]]) -> UniformFamily:
        return cls(n, k, tuple(to_mask(s) for s in sets))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __contains__(self, mask: object) -> bool:
        return mask in self._lookup

    @property
    def _lookup(self) -> frozenset[int]:
        # cached lazily; frozen dataclass so go through object.__setattr__
        try:
            return self.__dict__["_lookup_cache"]
        except KeyError:
            s = frozenset(self.members)
            object.__setattr__(self, "_lookup_cache", s)
            return s

    def as_sets(self) -> list[list[int]]:
        return [elements(a) for a in self.members]

    def with_members(self, members: Iterable[int]) -> UniformFamily:
        return UniformFamily(self.ground_size, self.k, tuple(members))


@dataclass(frozen=True)
class FamilyPair:
    A: UniformFamily
    B: UniformFamily
    t: int

    def __post_init__(self):
        if self.t < 1:
            raise ParameterError("t must be at least 1")
        if self.t > min(self.A.k, self.B.k):
            raise ParameterError(f"t={self.t} exceeds min(k, l)={min(self.A.k, self.B.k)}")

    @property
    def product(self) -> int:
        return len(self.A) * len(self.B)

    def swapped(self) -> FamilyPair:
        return FamilyPair(self.B, self.A, self.t)


def is_t_intersecting(F: UniformFamily, t: int) -> bool:
    if not F.members:
        raise DomainError("t-intersection is defined for nonempty families")
    ms = F.members
    for idx, a in enumerate(ms):
        if a.bit_count() < t:
            return False
        for b in ms[idx + 1:]:
            if (a & b).bit_count() < t:
                return False
    return True


def is_cross_t_intersecting(P: FamilyPair) -> bool:
    if not P.A.members or not P.B.members:
        raise DomainError("cross-t-intersection is defined for nonempty families")
    t = P.t
    return all((a & b).bit_count() >= t for a in P.A.members for b in P.B.members)


# Family text format: header "n k", one lowercase hex mask per line, trailing newline.

def format_family(F: UniformFamily) -> str:
    lines = [f"{F.ground_size} {F.k}"]
    lines.extend(format(a, "x") for a in F.members)
    return "\n".join(lines) + "\n"


def _parse_body(text: str) -> tuple[int, int, list[int]]:
    if not text.endswith("\n"):
        raise ParameterError("family file must end with a newline")
    lines = text[:-1].split("\n")
    header = lines[0].split()
    if len(header) != 2:
        raise ParameterError(f"bad header line {lines[0]!r}; expected 'n k'")
    try:
        n, k = int(header[0]), int(header[1])
    except ValueError as exc:
        raise ParameterError(f"bad header line {lines[0]!r}") from exc
    masks = []
    for lineno, line in enumerate(lines[1:], start=2):
        line = line.strip()
        if not line or line != line.lower():
            raise ParameterError(f"line {lineno}: expected a lowercase hex mask, got {line!r}")
        try:
            masks.append(int(line, 16))
        except ValueError as exc:
            raise ParameterError(f"line {lineno}: not hex: {line!r}") from exc
    if not 0 < n <= MAX_GROUND:
        raise ParameterError(f"ground size {n} outside [1, {MAX_GROUND}]")
    outside = ~ground_mask(n)
    for a in masks:
        if a & outside:
            raise ParameterError(f"mask {a:x} has bits outside [{n}]")
    return n, k, masks


def parse_family(text: str) -> UniformFamily:
    n, k, masks = _parse_body(text)
    for a in masks:
        if a.bit_count() != k:
            raise ParameterError(f"mask {a:x} has popcount {a.bit_count()}, expected {k}")
    return UniformFamily(n, k, tuple(masks))


def read_family(path) -> UniformFamily:
    with open(path) as fh:
        return parse_family(fh.read())


def write_family(F: UniformFamily, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_family(F))
