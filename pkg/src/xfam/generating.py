"""Generating sets of uniform families.

A generating set of a k-uniform family F on [n] is a collection g of sets of
size at most k whose k-uniform up-closure is exactly F.  The canonical choice
used throughout is the set of inclusion-minimal E with every k-superset of E
inside F.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from .core import (
    DomainError,
    FamilyPair,
    ParameterError,
    UniformFamily,
    binomial,
    ground_mask,
    is_cross_t_intersecting,
    iter_k_subsets,
)
from .core import _parse_body


@dataclass(frozen=True)
class GeneratorFamily:
    ground_size: int
    k: int
    members: tuple[int, ...] = ()

    def __post_init__(self):
        members = tuple(sorted(set(self.members)))
        outside = ~ground_mask(self.ground_size)
        for e in members:
            if e & outside:
                raise ParameterError(f"generator {e:#x} not inside [{self.ground_size}]")
            if e.bit_count() > self.k:
                raise ParameterError(f"generator {e:#x} larger than k={self.k}")
        for x in members:
            for y in members:
                if x != y and x & y == x:
                    raise ParameterError(f"not an antichain: {x:#x} is inside {y:#x}")
        object.__setattr__(self, "members", members)

    @property
    def s_plus(self) -> int:
        return max((e.bit_length() for e in self.members), default=0)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


def format_generators(g: GeneratorFamily) -> str:
    """Same layout as a family file; line popcounts may differ."""
    lines = [f"{g.ground_size} {g.k}"]
    lines.extend(format(e, "x") for e in g.members)
    return "\n".join(lines) + "\n"


def parse_generators(text: str) -> GeneratorFamily:
    n, k, masks = _parse_body(text)
    return GeneratorFamily(n, k, tuple(masks))


@dataclass(frozen=True)
class Stratum:
    i: int
    with_s: tuple[int, ...]
    dropped: tuple[int, ...]


def _submasks(a: int):
    sub = a
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & a


def up_cell(E: int, n: int, k: int) -> UniformFamily:
    """All k-subsets of [n] containing E."""
    size = E.bit_count()
    if size > k:
        return UniformFamily(n, k, ())
    free = [x for x in range(n) if not E >> x & 1]
    out = []
    for pick in iter_k_subsets(len(free), k - size):
        m = E
        for pos in range(len(free)):
            if pick >> pos & 1:
                m |= 1 << free[pos]
        out.append(m)
    return UniformFamily(n, k, tuple(out))


def down_cell(E: int, n: int, k: int) -> UniformFamily:
    """k-subsets X of [n] with X cut down to [max E] equal to E."""
    prefix = ground_mask(E.bit_length())
    return UniformFamily(n, k, tuple(X for X in up_cell(E, n, k) if X & prefix == E))


def expand(g: GeneratorFamily | Iterable[int], n: int | None = None, k: int | None = None) -> UniformFamily:
    if isinstance(g, GeneratorFamily):
        n = g.ground_size if n is None else n
        k = g.k if k is None else k
    if n is None or k is None:
        raise ParameterError("expand needs n and k for a bare generator list")
    out = set()
    for E in g:
        out.update(up_cell(E, n, k).members)
    return UniformFamily(n, k, tuple(out))


def _good_sets(F: UniformFamily, within: int | None = None) -> set[int]:
    """Sets E (inside [within] if given) whose whole k-up-set lies in F."""
    n, k = F.ground_size, F.k
    limit = ground_mask(n if within is None else min(within, n))
    counts: Counter[int] = Counter()
    for a in F.members:
        for sub in _submasks(a & limit):
            counts[sub] += 1
    return {E for E, c in counts.items() if c == binomial(n - E.bit_count(), k - E.bit_count())}


def _minimal(good: set[int]) -> list[int]:
    # good is up-closed (within sizes <= k), so checking one-element deletions suffices
    out = []
    for E in good:
        rest = E
        minimal = True
        while rest:
            low = rest & -rest
            rest ^= low
            if E ^ low in good:
                minimal = False
                break
        if minimal:
            out.append(E)
    return out


def minimal_generating_set(F: UniformFamily) -> GeneratorFamily:
    if not F.members:
        raise DomainError("generating sets are defined for nonempty families")
    return GeneratorFamily(F.ground_size, F.k, tuple(_minimal(_good_sets(F))))


def generator_within(F: UniformFamily, s: int) -> GeneratorFamily | None:
    """The canonical generator supported on [s], or None when F has none there."""
    if not F.members:
        raise DomainError("generating sets are defined for nonempty families")
    g = GeneratorFamily(F.ground_size, F.k, tuple(_minimal(_good_sets(F, within=s))))
    return g if expand(g) == F else None


@dataclass(frozen=True)
class MinSPair:
    gA: GeneratorFamily
    gB: GeneratorFamily
    s: int


def min_s_generating_pair(P: FamilyPair) -> MinSPair:
    """Generating pair minimising s = max(s+(gA), s+(gB)) for a maximal compressed pair.

    Sweeps s = t, t+1, ..., k+l-t and at each s looks only at generators inside
    [s].  For each side the generator returned is the canonical one inside [s].
    """
    from .search import best_response
    from .shifting import is_left_compressed

    A, B, t = P.A, P.B, P.t
    if not is_cross_t_intersecting(P):
        raise DomainError("pair is not cross-t-intersecting")
    if not (is_left_compressed(A) and is_left_compressed(B)):
        raise DomainError("pair is not left-compressed")
    if best_response(A, B.ground_size, B.k, t) != B or best_response(B, A.ground_size, A.k, t) != A:
        raise DomainError("pair is not maximal (not a mutual best response)")
    top = max(A.k + B.k - t, A.ground_size, B.ground_size)
    for s in range(0, top + 1):
        gA = generator_within(A, s)
        if gA is None:
            continue
        gB = generator_within(B, s)
        if gB is None:
            continue
        return MinSPair(gA, gB, max(gA.s_plus, gB.s_plus))
    raise DomainError("no generating pair found")  # unreachable: F generates itself


def disjoint_decomposition_check(F: UniformFamily, g: GeneratorFamily) -> bool:
    if expand(g, F.ground_size, F.k) != F:
        raise DomainError("generator does not expand to the family")
    seen: set[int] = set()
    for E in g:
        cell = down_cell(E, F.ground_size, F.k).members
        for X in cell:
            if X in seen:
                return False
            seen.add(X)
    return seen == set(F.members)


def stratum(g: GeneratorFamily, i: int, s: int | None = None) -> Stratum:
    s = g.s_plus if s is None else s
    if s == 0:
        return Stratum(i, (), ())
    bit = 1 << (s - 1)
    with_s = tuple(E for E in g if E & bit and E.bit_count() == i)
    return Stratum(i, with_s, tuple(E ^ bit for E in with_s))


def strata(g: GeneratorFamily) -> list[Stratum]:
    s = g.s_plus
    sizes = sorted({E.bit_count() for E in g if s and E >> (s - 1) & 1})
    return [stratum(g, i, s) for i in sizes]


@dataclass(frozen=True)
class ExchangeResult:
    pair: FamilyPair
    predicted_gain_A: int
    predicted_loss_B: int
    realized_gain_A: int
    realized_loss_B: int
    cross_t: bool

    @property
    def ok(self) -> bool:
        return (self.cross_t and self.predicted_gain_A == self.realized_gain_A
                and self.predicted_loss_B == self.realized_loss_B)


def exchange_move(P: FamilyPair, gA: GeneratorFamily, gB: GeneratorFamily, i: int,
                  check: bool = True) -> ExchangeResult:
    """Grow A by the cells of the s-dropped size-i stratum, shrink B by the matching stratum.

    Predicted changes: |A| grows by |g*_i(A)| C(n-s, k-i+1) and |B| drops by
    |g*_{s+t-i}(B)| C(m-s, l+i-s-t).  With ``check`` a mismatch raises.
    """
    A, B, t = P.A, P.B, P.t
    n, k, m, l = A.ground_size, A.k, B.ground_size, B.k
    s = max(gA.s_plus, gB.s_plus)
    sa = stratum(gA, i, s)
    if not sa.with_s:
        raise DomainError(f"stratum of size {i} in g(A) is empty")
    sb = stratum(gB, s + t - i, s)

    grown = set(A.members)
    for E in sa.dropped:
        grown.update(down_cell(E, n, k).members)
    shrunk = set(B.members)
    for E in sb.with_s:
        shrunk.difference_update(down_cell(E, m, l).members)
    A1, B1 = A.with_members(grown), B.with_members(shrunk)
    new = FamilyPair(A1, B1, t)
    cross = not B1.members or is_cross_t_intersecting(new)
    res = ExchangeResult(
        pair=new,
        predicted_gain_A=len(sa.with_s) * binomial(n - s, k - i + 1),
        predicted_loss_B=len(sb.with_s) * binomial(m - s, l + i - s - t),
        realized_gain_A=len(A1) - len(A),
        realized_loss_B=len(B) - len(B1),
        cross_t=cross,
    )
    if check and not res.ok:
        raise DomainError(f"exchange move at i={i} broke its size formula or cross-t: {res}")
    return res


def upper_shadow(F: UniformFamily) -> UniformFamily:
    n = F.ground_size
    out = set()
    for a in F:
        for x in range(n):
            if not a >> x & 1:
                out.add(a | 1 << x)
    return UniformFamily(n, F.k + 1, tuple(out))


def shadow_ratio_check(F: UniformFamily) -> bool:
    """|upper shadow| / |F| >= C(n, j+1) / C(n, j), compared by cross-multiplication."""
    n, j = F.ground_size, F.k
    if not 1 <= j <= n - 1:
        raise ParameterError(f"need 1 <= j <= n-1, got j={j}, n={n}")
    if not F.members:
        raise DomainError("shadow bound needs a nonempty family")
    return len(upper_shadow(F)) * binomial(n, j) >= len(F) * binomial(n, j + 1)
