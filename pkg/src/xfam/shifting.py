"""The (i, j)-shift on uniform families and left-compression."""

from __future__ import annotations

from .core import DomainError, FamilyPair, ParameterError, UniformFamily, is_cross_t_intersecting


def _shift_members(members, i: int, j: int) -> tuple[list[int], bool]:
    bi, bj = 1 << (i - 1), 1 << (j - 1)
    present = set(members)
    out = []
    changed = False
    for a in members:
        if a & bj and not a & bi:
            moved = (a ^ bj) | bi
            if moved not in present:
                out.append(moved)
                changed = True
                continue
        out.append(a)
    return out, changed


def shift_family(F: UniformFamily, i: int, j: int) -> UniformFamily:
    """Replace j by i in every member where that gives a set not already in F."""
    if not 1 <= i < j:
        raise ParameterError(f"shift needs 1 <= i < j, got ({i}, {j})")
    if j > F.ground_size:
        raise ParameterError(f"j={j} outside ground [{F.ground_size}]")
    out, changed = _shift_members(F.members, i, j)
    return F.with_members(out) if changed else F


def is_left_compressed(F: UniformFamily) -> bool:
    n = F.ground_size
    for j in range(2, n + 1):
        for i in range(1, j):
            if _shift_members(F.members, i, j)[1]:
                return False
    return True


def _pairs(n: int):
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            yield i, j


def compress_to_fixpoint(F: UniformFamily) -> UniformFamily:
    # Lexicographic sweep over (i, j), restarting after any effective shift.
    # Each effective shift lowers the total element sum, so this terminates.
    members = list(F.members)
    n = F.ground_size
    restart = True
    while restart:
        restart = False
        for i, j in _pairs(n):
            members, changed = _shift_members(members, i, j)
            if changed:
                restart = True
                break
    return F.with_members(members)


def shift_pair(P: FamilyPair, i: int, j: int) -> FamilyPair:
    """Apply S_ij to both families; a family whose ground lacks j is left alone."""
    A, B = P.A, P.B
    if j <= A.ground_size:
        A = shift_family(A, i, j)
    if j <= B.ground_size:
        B = shift_family(B, i, j)
    return FamilyPair(A, B, P.t)


def compress_pair(P: FamilyPair) -> FamilyPair:
    if not is_cross_t_intersecting(P):
        raise DomainError("compress_pair needs a cross-t-intersecting pair")
    a, b = list(P.A.members), list(P.B.members)
    na, nb = P.A.ground_size, P.B.ground_size
    restart = True
    while restart:
        restart = False
        for i, j in _pairs(max(na, nb)):
            ca = cb = False
            if j <= na:
                a, ca = _shift_members(a, i, j)
            if j <= nb:
                b, cb = _shift_members(b, i, j)
            if ca or cb:
                restart = True
                break
    return FamilyPair(P.A.with_members(a), P.B.with_members(b), P.t)
