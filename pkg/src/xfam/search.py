"""Exact maximum of |A||B| over cross-t-intersecting A in C([n],k), B in C([m],l).

Two independent engines:

``max_product_antichain``
    Shifting preserves both sizes and the cross-t property, so it is enough to
    look at maximal left-compressed pairs.  Such a pair is generated by sets
    inside [k + l - t], so every antichain over that ground is expanded into A
    and closed under mutual best response.  When a ground is no larger than
    k + l - t, antichains over the whole ground are used instead, which reach
    every family on it outright.

``max_product_raw``
    Branch and bound over the closed A-families of the best-response Galois
    connection (each closed family is visited once via prefix-preserving
    closure extension).  Uses no shifting and no generating sets.

Families inside the engines are int bitsets over the index of C([n],k) or
C([m],l) in increasing mask order.
"""

from __future__ import annotations

import functools
import itertools
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .constructions import extremal_pairs, frankl_family, in_main_domain, star, theorem_bound
from .core import (
    CapacityError,
    DomainError,
    FamilyPair,
    ParameterError,
    UniformFamily,
    format_family,
    ground_mask,
    is_cross_t_intersecting,
    iter_k_subsets,
)

ANTICHAIN_MAX_SUPPORT = 6
RAW_MAX_SETS = 128


def best_response(A: UniformFamily, m: int, l: int, t: int) -> UniformFamily:
    """Every l-subset of [m] meeting each member of A in at least t elements."""
    members = A.members
    return UniformFamily(m, l, tuple(
        b for b in iter_k_subsets(m, l) if all((a & b).bit_count() >= t for a in members)))


def closure(A: UniformFamily, m: int, l: int, t: int) -> FamilyPair:
    if not A.members:
        raise DomainError("closure needs a nonempty seed")
    B = best_response(A, m, l, t)
    if not B.members:
        raise DomainError("infeasible seed: empty best response")
    A2 = best_response(B, A.ground_size, A.k, t)
    return FamilyPair(A2, best_response(A2, m, l, t), t)


class Instance:
    """Indexed level sets and compatibility masks for one (n, m, k, l, t)."""

    def __init__(self, n: int, m: int, k: int, l: int, t: int):
        if not (1 <= t <= min(k, l) and k <= n and l <= m):
            raise ParameterError(f"need 1 <= t <= min(k,l), k <= n, l <= m; got {(n, m, k, l, t)}")
        self.n, self.m, self.k, self.l, self.t = n, m, k, l, t
        self.A_sets = list(iter_k_subsets(n, k))
        self.B_sets = list(iter_k_subsets(m, l))
        self.full_A = (1 << len(self.A_sets)) - 1
        self.full_B = (1 << len(self.B_sets)) - 1
        # compat_A[x]: B-indices compatible with A-set x; compat_B likewise
        self.compat_A = [0] * len(self.A_sets)
        self.compat_B = [0] * len(self.B_sets)
        for x, a in enumerate(self.A_sets):
            bit_x = 1 << x
            row = 0
            for y, b in enumerate(self.B_sets):
                if (a & b).bit_count() >= t:
                    row |= 1 << y
                    self.compat_B[y] |= bit_x
            self.compat_A[x] = row

    def br_of_A(self, amask: int) -> int:
        r = self.full_B
        compat = self.compat_A
        while amask:
            low = amask & -amask
            r &= compat[low.bit_length() - 1]
            amask ^= low
        return r

    def br_of_B(self, bmask: int) -> int:
        r = self.full_A
        compat = self.compat_B
        while bmask:
            low = bmask & -bmask
            r &= compat[low.bit_length() - 1]
            bmask ^= low
        return r

    def up_masks(self, sets: list[int], support: int) -> list[int]:
        """up[E] for every E inside [support]: index mask of level sets containing E."""
        out = []
        for E in range(1 << support):
            mask = 0
            for x, a in enumerate(sets):
                if a & E == E:
                    mask |= 1 << x
            out.append(mask)
        return out

    def to_pair(self, amask: int, bmask: int) -> FamilyPair:
        A = UniformFamily(self.n, self.k, tuple(a for x, a in enumerate(self.A_sets) if amask >> x & 1))
        B = UniformFamily(self.m, self.l, tuple(b for y, b in enumerate(self.B_sets) if bmask >> y & 1))
        return FamilyPair(A, B, self.t)


def comparability_masks(support: int) -> list[int]:
    size = 1 << support
    out = []
    for E in range(size):
        mask = 0
        for F in range(size):
            if E & F == E or E & F == F:
                mask |= 1 << F
        out.append(mask)
    return out


def count_antichains(support: int) -> int:
    """Number of antichains in the subset lattice of [support] (Dedekind numbers)."""
    comp = comparability_masks(support)
    total = 0

    def walk(cand):
        nonlocal total
        total += 1
        while cand:
            low = cand & -cand
            cand ^= low
            walk(cand & ~comp[low.bit_length() - 1])

    walk((1 << (1 << support)) - 1)
    return total


@dataclass
class _Tally:
    best: int = 0
    optima: set = field(default_factory=set)
    candidates: int = 0
    empty_seeds: int = 0
    infeasible_seeds: int = 0

    def offer(self, amask: int, bmask: int) -> None:
        p = amask.bit_count() * bmask.bit_count()
        if p > self.best:
            self.best = p
            self.optima = {(amask, bmask)}
        elif p == self.best and p > 0:
            self.optima.add((amask, bmask))

    def merge(self, other: _Tally) -> None:
        self.candidates += other.candidates
        self.empty_seeds += other.empty_seeds
        self.infeasible_seeds += other.infeasible_seeds
        if other.best > self.best:
            self.best, self.optima = other.best, set(other.optima)
        elif other.best == self.best:
            self.optima |= other.optima


def _supports(n, m, k, l, t) -> tuple[int, int]:
    s_max = k + l - t
    return min(n, s_max), min(m, s_max)


def _antichain_task(args) -> _Tally:
    params, side, roots = args
    inst = Instance(*params)
    n, m, k, l, t = params
    sA, sB = _supports(n, m, k, l, t)
    support = sA if side == "A" else sB
    up = inst.up_masks(inst.A_sets if side == "A" else inst.B_sets, support)
    comp = comparability_masks(support)
    tally = _Tally()
    feasible: dict[int, bool] = {}  # distinct antichains often expand to the same seed

    def close(seed: int):
        tally.candidates += 1
        if seed == 0:
            tally.empty_seeds += 1
            return
        if seed in feasible:
            tally.infeasible_seeds += not feasible[seed]
            return
        if side == "A":
            b = inst.br_of_A(seed)
            a = inst.br_of_B(b) if b else 0
        else:
            a = inst.br_of_B(seed)
            b = inst.br_of_A(a) if a else 0
        feasible[seed] = bool(a and b)
        if a and b:
            tally.offer(a, b)
        else:
            tally.infeasible_seeds += 1

    sys.setrecursionlimit(max(sys.getrecursionlimit(), 10000))

    def walk(cand: int, acc: int):
        close(acc)
        while cand:
            low = cand & -cand
            cand ^= low
            E = low.bit_length() - 1
            walk(cand & ~comp[E], acc | up[E])

    size = 1 << support
    for E in roots:
        if E < 0:
            close(0)  # the empty antichain
            continue
        later = ((1 << size) - 1) & ~((1 << (E + 1)) - 1)
        walk(later & ~comp[E], up[E])
    return tally


def _singleton_task(args) -> _Tally:
    params, xs = args
    inst = Instance(*params)
    tally = _Tally()
    for x in xs:
        tally.candidates += 1
        b = inst.br_of_A(1 << x)
        if b == 0:
            tally.infeasible_seeds += 1
            continue
        a = inst.br_of_B(b)
        tally.offer(a, inst.br_of_A(a))
    return tally


def default_jobs() -> int:
    env = os.environ.get("XFAM_JOBS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _run_tasks(fn, tasks, jobs: int) -> _Tally:
    total = _Tally()
    if jobs <= 1 or len(tasks) <= 1:
        for task in tasks:
            total.merge(fn(task))
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for part in pool.map(fn, tasks):
                total.merge(part)
    return total


# --------------------------------------------------------------------------
# canonical forms

@functools.lru_cache(maxsize=4)
def _perm_array(n: int, m: int) -> np.ndarray:
    big, lo = max(n, m), min(n, m)
    if n == m:
        it = itertools.permutations(range(big))
    else:
        it = (p + q for p in itertools.permutations(range(lo))
              for q in itertools.permutations(range(lo, big)))
    return np.fromiter(itertools.chain.from_iterable(it), dtype=np.int64).reshape(-1, big)


def _perm_blocks(n: int, m: int, block: int = 40320):
    perms = _perm_array(n, m)
    for start in range(0, len(perms), block):
        yield perms[start:start + block]


def _bits(masks, width: int) -> np.ndarray:
    arr = np.asarray(masks, dtype=np.int64).reshape(-1, 1)
    return ((arr >> np.arange(width, dtype=np.int64)) & 1).astype(np.int64)


ORBIT_CACHE_LIMIT = 40320


def _canonical(a_members, b_members, n: int, m: int, orbit: bool = False):
    width = max(n, m)
    if width > 62:
        raise CapacityError("canonical form limited to grounds of at most 62 elements")
    bitsA, bitsB = _bits(a_members, width), _bits(b_members, width)
    na = len(a_members)
    best = None
    images = set() if orbit else None
    for perms in _perm_blocks(n, m):
        weights = np.left_shift(np.int64(1), perms)           # (P, width)
        imgA = np.sort(bitsA @ weights.T, axis=0)              # (|A|, P)
        imgB = np.sort(bitsB @ weights.T, axis=0)
        keys = np.vstack([imgA, imgB])
        if orbit:
            images.update((na, *col) for col in keys.T.tolist())
        cols = np.arange(keys.shape[1])
        for row in keys:
            vals = row[cols]
            cols = cols[vals == vals.min()]
            if len(cols) == 1:
                break
        cand = tuple(int(v) for v in keys[:, cols[0]])
        if best is None or cand < best:
            best = cand
    if best is None:
        best = ()
    return (tuple(best[:na]), tuple(best[na:])), images


def canonical_form(P: FamilyPair) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Lexicographically least relabelling of the pair.

    Group: all permutations of [n] when n = m; otherwise permutations of
    [max(n, m)] that fix [min(n, m)] setwise.  Each family is relabelled on
    its own ground.
    """
    return _canonical(P.A.members, P.B.members, P.A.ground_size, P.B.ground_size)[0]


def canonical_pair(P: FamilyPair) -> FamilyPair:
    a, b = canonical_form(P)
    return FamilyPair(P.A.with_members(a), P.B.with_members(b), P.t)


def _reference_forms(n, m, k, l, t) -> dict:
    out = {}
    T = ground_mask(t)
    out["star"] = canonical_form(FamilyPair(star(n, k, T), star(m, l, T), t))
    if t + 2 <= min(n, m):
        core = ground_mask(t + 2)
        FA = UniformFamily(n, k, tuple(a for a in iter_k_subsets(n, k) if (a & core).bit_count() >= t + 1))
        FB = UniformFamily(m, l, tuple(b for b in iter_k_subsets(m, l) if (b & core).bit_count() >= t + 1))
        if FA.members and FB.members:
            out["frankl"] = canonical_form(FamilyPair(FA, FB, t))
    return out


def describe(P: FamilyPair, form=None, refs=None) -> dict:
    n, m, k, l, t = P.A.ground_size, P.B.ground_size, P.A.k, P.B.k, P.t
    form = canonical_form(P) if form is None else form
    refs = _reference_forms(n, m, k, l, t) if refs is None else refs
    sizes = {"size_A": len(P.A), "size_B": len(P.B)}
    if form == refs.get("star"):
        return {"construction": "star", "T": list(range(1, t + 1)), **sizes}
    if form == refs.get("frankl"):
        return {"construction": "frankl", "r": 1, "T": list(range(1, t + 3)), **sizes}
    return {"construction": "other", **sizes}


# --------------------------------------------------------------------------
# certificates

@dataclass
class Optimum:
    descriptor: dict
    pair: FamilyPair

    def to_json(self) -> dict:
        return {"descriptor": self.descriptor, "A_file": format_family(self.pair.A),
                "B_file": format_family(self.pair.B)}


@dataclass
class SearchCertificate:
    params: dict
    max_product: int
    optima: list
    method: str
    candidates_enumerated: int
    runtime_ms: int
    stats: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "params": self.params,
            "max_product": str(self.max_product),
            "optima": [o.to_json() for o in self.optima],
            "method": self.method,
            "candidates_enumerated": str(self.candidates_enumerated),
            "runtime_ms": self.runtime_ms,
            "stats": self.stats,
        }

    def recheck(self) -> bool:
        """Every listed optimum is cross-t-intersecting with the stated product."""
        for o in self.optima:
            P = o.pair
            if P.product != self.max_product or not is_cross_t_intersecting(P):
                return False
        return True


def _canonical_optima(inst: Instance, raw_optima) -> list[Optimum]:
    n, m = inst.n, inst.m
    refs = _reference_forms(n, m, inst.k, inst.l, inst.t)
    # Record whole orbits when the group is small, so that the many
    # isomorphic copies a raw search can return become set lookups.
    orbit = len(_perm_array(n, m)) <= ORBIT_CACHE_LIMIT
    seen: set = set()
    forms = set()
    for amask, bmask in sorted(raw_optima):
        a = tuple(x for i, x in enumerate(inst.A_sets) if amask >> i & 1)
        b = tuple(y for i, y in enumerate(inst.B_sets) if bmask >> i & 1)
        if (len(a), *a, *b) in seen:
            continue
        f, images = _canonical(a, b, n, m, orbit)
        forms.add(f)
        if orbit:
            seen |= images
    out = []
    for a, b in sorted(forms):
        canon = FamilyPair(UniformFamily(n, inst.k, a), UniformFamily(m, inst.l, b), inst.t)
        out.append(Optimum(describe(canon, (a, b), refs), canon))
    return out


def _params(n, m, k, l, t) -> dict:
    return {"n": n, "m": m, "k": k, "l": l, "t": t}


def max_product_antichain(n: int, m: int, k: int, l: int, t: int, jobs: int = 1) -> SearchCertificate:
    start = time.perf_counter()
    inst = Instance(n, m, k, l, t)
    sA, sB = _supports(n, m, k, l, t)
    if max(sA, sB) > ANTICHAIN_MAX_SUPPORT:
        raise CapacityError(
            f"antichain support {max(sA, sB)} > {ANTICHAIN_MAX_SUPPORT}; use the raw method or bigger hardware")
    params = (n, m, k, l, t)
    tasks = [(params, "A", [-1])]
    tasks += [(params, "A", [E]) for E in range(1 << sA)]
    tasks += [(params, "B", [E]) for E in range(1 << sB)]
    # group into at most `jobs` batches with a stable round-robin assignment
    nb = max(1, jobs)
    batches = [(params, side, []) for side in ("A", "B") for _ in range(nb)]
    for idx, (_, side, roots) in enumerate(tasks):
        target = batches[(0 if side == "A" else nb) + idx % nb]
        target[2].extend(roots)
    batches = [b for b in batches if b[2]]
    tally = _run_tasks(_antichain_task, batches, jobs)
    singles = [(params, list(range(x, len(inst.A_sets), nb))) for x in range(min(nb, len(inst.A_sets)))]
    tally.merge(_run_tasks(_singleton_task, singles, jobs))

    optima = _canonical_optima(inst, tally.optima)
    return SearchCertificate(
        params=_params(n, m, k, l, t),
        max_product=tally.best,
        optima=optima,
        method="antichain-exhaustive",
        candidates_enumerated=tally.candidates,
        runtime_ms=int((time.perf_counter() - start) * 1000),
        stats={"support_A": sA, "support_B": sB, "empty_seeds": tally.empty_seeds,
               "infeasible_seeds": tally.infeasible_seeds, "closed_optima": len(tally.optima)},
    )


def max_product_raw(n: int, m: int, k: int, l: int, t: int, max_sets: int = RAW_MAX_SETS) -> SearchCertificate:
    start = time.perf_counter()
    inst = Instance(n, m, k, l, t)
    NA = len(inst.A_sets)
    if NA > max_sets:
        raise CapacityError(f"C({n},{k}) = {NA} > {max_sets}; raw search infeasible")
    compat_A = inst.compat_A
    tally = _Tally()
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 10000))

    def visit(c: int, bmask: int, core: int):
        tally.candidates += 1
        if c and bmask:
            tally.offer(c, bmask)
        base = c.bit_count()
        vals = sorted(((bmask & compat_A[y]).bit_count() for y in range(core + 1, NA) if not c >> y & 1),
                      reverse=True)
        bound = max(((base + j) * v for j, v in enumerate(vals, 1)), default=0)
        if bound < tally.best:
            return
        for y in range(core + 1, NA):
            if c >> y & 1:
                continue
            b2 = bmask & compat_A[y]
            d = inst.br_of_B(b2)
            low = (1 << y) - 1
            if d & low != c & low:
                continue
            visit(d, b2, y)

    c0 = inst.br_of_B(inst.full_B)
    visit(c0, inst.br_of_A(c0), -1)
    optima = _canonical_optima(inst, tally.optima)
    return SearchCertificate(
        params=_params(n, m, k, l, t),
        max_product=tally.best,
        optima=optima,
        method="raw-closure",
        candidates_enumerated=tally.candidates,
        runtime_ms=int((time.perf_counter() - start) * 1000),
        stats={"closed_optima": len(tally.optima)},
    )


def max_product_both(n, m, k, l, t, jobs: int = 1, max_sets: int = RAW_MAX_SETS) -> SearchCertificate:
    start = time.perf_counter()
    ca = max_product_antichain(n, m, k, l, t, jobs=jobs)
    cr = max_product_raw(n, m, k, l, t, max_sets=max_sets)
    forms_a = [canonical_form(o.pair) for o in ca.optima]
    forms_r = [canonical_form(o.pair) for o in cr.optima]
    return SearchCertificate(
        params=ca.params,
        max_product=ca.max_product,
        optima=ca.optima,
        method="both",
        candidates_enumerated=ca.candidates_enumerated + cr.candidates_enumerated,
        runtime_ms=int((time.perf_counter() - start) * 1000),
        stats={
            "agree": ca.max_product == cr.max_product,
            "optima_agree": forms_a == forms_r,
            "antichain": {"max_product": str(ca.max_product), "candidates": str(ca.candidates_enumerated),
                          "optima": len(ca.optima)},
            "raw": {"max_product": str(cr.max_product), "candidates": str(cr.candidates_enumerated),
                    "optima": len(cr.optima)},
        },
    )


def verify_theorem_1_8(n: int, m: int, k: int, l: int, t: int, jobs: int = 1) -> dict:
    """Check the product bound and the list of extremal pairs against exhaustive search."""
    if not in_main_domain(n, m, k, l, t):
        raise ParameterError(f"{(n, m, k, l, t)} outside 3 <= t <= l <= k, min(m,n) >= (t+1)(k-t+1)")
    cert = max_product_antichain(n, m, k, l, t, jobs=jobs)
    bound = theorem_bound(n, m, k, l, t)
    expected = sorted(canonical_form(e.pair) for e in extremal_pairs(n, m, k, l, t))
    found = sorted(canonical_form(o.pair) for o in cert.optima)
    bound_ok = cert.max_product == bound
    optima_ok = expected == found
    return {
        "params": _params(n, m, k, l, t),
        "status": "CONFIRMED" if bound_ok and optima_ok and cert.recheck() else "REFUTED",
        "bound": str(bound),
        "max_product": str(cert.max_product),
        "bound_matches": bound_ok,
        "optima_match": optima_ok,
        "expected_optima": [e.descriptor() for e in extremal_pairs(n, m, k, l, t)],
        "certificate": cert.to_json(),
    }
