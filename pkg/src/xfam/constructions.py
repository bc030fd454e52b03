"""Named families, the extremal pairs, and two explicit path constructions."""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import (
    FamilyPair,
    ParameterError,
    UniformFamily,
    binomial,
    elements,
    ground_mask,
    iter_k_subsets,
    to_mask,
)


def frankl_size(n: int, k: int, t: int, r: int) -> int:
    w0 = t + 2 * r
    return sum(binomial(w0, w) * binomial(n - w0, k - w) for w in range(t + r, w0 + 1))


def frankl_family(n: int, k: int, t: int, r: int) -> UniformFamily:
    """All k-subsets of [n] meeting [t + 2r] in at least t + r elements."""
    if not 1 <= t <= k <= n:
        raise ParameterError(f"need 1 <= t <= k <= n, got t={t}, k={k}, n={n}")
    if r < 0 or 2 * r > n - t:
        raise ParameterError(f"r={r} outside [0, (n-t)/2]")
    core = ground_mask(t + 2 * r)
    return UniformFamily(n, k, tuple(a for a in iter_k_subsets(n, k) if (a & core).bit_count() >= t + r))


def star(n: int, k: int, T: int) -> UniformFamily:
    if not T.bit_count() <= k <= n:
        raise ParameterError(f"need |T| <= k <= n, got |T|={T.bit_count()}, k={k}, n={n}")
    if T >> n:
        raise ParameterError("T not inside [n]")
    return UniformFamily(n, k, tuple(a for a in iter_k_subsets(n, k) if a & T == T))


def ak_optimum(n: int, k: int, t: int) -> tuple[int, list[int]]:
    """Largest Frankl family size over admissible r, with every r attaining it."""
    if not 1 <= t <= k <= n:
        raise ParameterError(f"need 1 <= t <= k <= n, got t={t}, k={k}, n={n}")
    sizes = {r: frankl_size(n, k, t, r) for r in range((n - t) // 2 + 1)}
    best = max(sizes.values())
    return best, [r for r, v in sizes.items() if v == best]


def theorem_bound(n: int, m: int, k: int, l: int, t: int) -> int:
    return binomial(n - t, k - t) * binomial(m - t, l - t)


def in_main_domain(n: int, m: int, k: int, l: int, t: int) -> bool:
    return 3 <= t <= l <= k and min(m, n) >= (t + 1) * (k - t + 1)


@dataclass(frozen=True)
class ExtremalPair:
    name: str
    params: dict
    pair: FamilyPair = field(compare=False)

    def descriptor(self) -> dict:
        return {"construction": self.name, **self.params}


def extremal_pairs(n: int, m: int, k: int, l: int, t: int) -> list[ExtremalPair]:
    if not in_main_domain(n, m, k, l, t):
        raise ParameterError(
            f"(n,m,k,l,t)=({n},{m},{k},{l},{t}) outside 3 <= t <= l <= k, min(m,n) >= (t+1)(k-t+1)")
    T = ground_mask(t)
    out = [ExtremalPair("star", {"T": elements(T)}, FamilyPair(star(n, k, T), star(m, l, T), t))]
    if n == m == (t + 1) * (k - t + 1) and k == l:
        F = frankl_family(n, k, t, 1)
        out.append(ExtremalPair("frankl", {"r": 1, "T": list(range(1, t + 3))}, FamilyPair(F, F, t)))
    return out


def lemma41_path(n: int, m: int, k: int, l: int, t: int, r: int, T, j: int, A, B):
    """Alternating sequences A_1..A_{w+1}, B_1..B_{w+1} with A_i, B_i disjoint and
    A_{i+1}, B_i disjoint, starting at A and ending at B, where w = |A & B|.

    T, A, B may be masks or element iterables.  Returns two lists of masks.
    """
    T, A, B = (x if isinstance(x, int) else to_mask(x) for x in (T, A, B))
    lo = min(m, n)
    if not (k >= l >= t + r and lo >= k + l - t + 2):
        raise ParameterError("need k >= l >= t + r and min(m, n) >= k + l - t + 2")
    if T.bit_count() != t + 2 * r or T >> lo:
        raise ParameterError(f"T must be a {t + 2 * r}-subset of [{lo}]")
    jb = 1 << (j - 1)
    if not 1 <= j <= lo or T & jb:
        raise ParameterError(f"j must lie in [{lo}] outside T")
    blocked = T | jb
    if A & blocked or A >> n or A.bit_count() != k - r - t:
        raise ParameterError(f"A must be a {k - r - t}-subset of [{n}] avoiding T and j")
    if B & blocked or B >> m or B.bit_count() != l - r - t:
        raise ParameterError(f"B must be a {l - r - t}-subset of [{m}] avoiding T and j")

    common = elements(A & B)
    w = len(common)
    # fresh elements avoid B as well as A, or B_1 would lose size
    avoid = blocked | A | B
    fresh = [x for x in range(1, lo + 1) if not avoid >> (x - 1) & 1][: w + 1]
    bits = [1 << (x - 1) for x in fresh]
    abits = [1 << (x - 1) for x in common]

    As, Bs = [A], [(B & ~A) | sum(bits[1:])]
    for s in range(2, w + 2):
        As.append((As[-1] & ~abits[s - 2]) | bits[s - 2])
        Bs.append((Bs[-1] & ~bits[s - 1]) | abits[s - 2])
    return As, Bs


def lemma42_path(T, t_prime: int, A, B):
    """Path B = A_1, ..., A_{2w} = A of (r + t')-subsets of T, consecutive ones meeting in t'.

    Here |T| = t' + 2r and w = floor(|A & B| / t') + 1.  Returns ``(path, labels)``
    where ``labels[p]`` is the element playing position p+1 in the relabelled T
    (A & B first, then A - B, then B - A, then the rest, each ascending).
    """
    T, A, B = (x if isinstance(x, int) else to_mask(x) for x in (T, A, B))
    tp = t_prime
    if tp < 1:
        raise ParameterError("t' must be positive")
    extra = T.bit_count() - tp
    if extra < 2 or extra % 2:
        raise ParameterError("|T| must be t' + 2r with r >= 1")
    r = extra // 2
    for X in (A, B):
        if X & ~T or X.bit_count() != r + tp:
            raise ParameterError(f"A and B must be {r + tp}-subsets of T")
    if A == B:
        raise ParameterError("A and B must be distinct")

    labels = elements(A & B) + elements(A & ~B) + elements(B & ~A) + elements(T & ~(A | B))
    b = (A & B).bit_count() - tp
    mq = b // tp

    def seg(lo_pos: int, hi_pos: int) -> int:
        # positions lo_pos..hi_pos, 1-based and inclusive
        out = 0
        for p in range(lo_pos, hi_pos + 1):
            out |= 1 << (labels[p - 1] - 1)
        return out

    path = []
    for s in range(mq + 1):
        path.append(seg(1, b + tp * (1 - s)) | seg(r + tp + 1, (s + 1) * tp + 2 * r - b))
        path.append(seg(b - s * tp + 1, tp + r) | seg((s + 1) * tp + 2 * r - b + 1, tp + 2 * r))
    path.append(seg(1, b - tp * mq) | seg(b + r - tp * mq + 1, tp + 2 * r))
    path.append(seg(1, tp + r))
    return path, labels
