"""Exact evaluators for the polynomial inequalities behind the product bound,
and grid auditors that check their signs pointwise.

All values are Python integers; nothing is approximated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .constructions import in_main_domain, theorem_bound
from .core import FamilyPair, ParameterError, UniformFamily, binomial, ground_mask, is_cross_t_intersecting, iter_k_subsets
from .generating import expand


def S_val(n: int, s: int, i: int, j: int) -> int:
    return s * (n - s + 1) - i * (j - i)


def T_val(n: int, s: int, i: int, j: int) -> int:
    return i * (n - j - s + i + 1) + (s - i) * (j - i + 1)


def h_val(m, n, s, k, l, i, t) -> int:
    return (n - s - k + i) * S_val(m, s, s + t - i, l) - (m - s + 1) * T_val(n, s, i, k)


def H_val(m, n, s, k, l, i, t) -> int:
    return (m + t - l - i) * S_val(n, s, i, k) - (n - s + 1) * T_val(m, s, s + t - i, l)


def lemma31_ratio(m, n, s, k, l, i, t) -> tuple[int, int]:
    """Numerator and denominator of the ratio that must exceed 1."""
    num = (m - l + t - i) * (n - s - k + i) * S_val(n, s, i, k) * S_val(m, s, s + t - i, l)
    den = (m - s + 1) * (n - s + 1) * T_val(n, s, i, k) * T_val(m, s, s + t - i, l)
    return num, den


def lemma32_val(m, n, k, l, s, t) -> int:
    return ((t + 1) * (k - s + 2) * (m - l + t - s + 2)
            - (s - 1 - t) * ((m - l + t - s + 1) * (n - k - 1) - (k - s + 2) * (l - t)))


def lemma33_val(m, n, k, l, s, t) -> int:
    return ((t + 1) * (n - s - k + t + 2) * (l - s + 2)
            - (s - 1 - t) * ((m - l - 1) * (n - s - k + t + 1) - (k - t) * (l - s + 2)))


def threshold(k: int, t: int) -> int:
    return (t + 1) * (k - t + 1)


def in_lemma31_domain(m, n, s, k, l, i, t) -> bool:
    return (t >= 3 and k >= l > t and t + 2 <= i <= k and i + 2 <= s <= i + k - t
            and min(m, n) >= threshold(k, t))


def in_lemma32_domain(m, n, k, l, s, t) -> bool:
    return t >= 3 and k >= l >= t + 1 and t + 3 <= s <= k + 1 and min(m, n) >= threshold(k, t)


def in_lemma33_domain(m, n, k, l, s, t) -> bool:
    return t >= 3 and k >= l >= s - 1 >= t + 2 and min(m, n) >= threshold(k, t)


@dataclass(frozen=True)
class Grid:
    """Bounds for an audit sweep.  ``fixed`` pins any of n, m, k, l, t."""

    tmax: int = 6
    kmax: int = 8
    nmax: int = 60
    fixed: dict = field(default_factory=dict)

    def _range(self, name: str, lo: int, hi: int):
        if name in self.fixed:
            v = self.fixed[name]
            return range(v, v + 1) if lo <= v <= hi else range(0)
        return range(lo, hi + 1)

    def as_dict(self) -> dict:
        d = {"tmax": self.tmax, "kmax": self.kmax, "nmax": self.nmax}
        d.update({k: self.fixed[k] for k in sorted(self.fixed)})
        return d

    def tkl(self, l_lo_offset: int) -> Iterator[tuple[int, int, int]]:
        for t in self._range("t", 3, self.tmax):
            for k in self._range("k", t + l_lo_offset, self.kmax):
                for l in self._range("l", t + l_lo_offset, k):
                    yield t, k, l

    def nm(self, k: int, t: int) -> Iterator[tuple[int, int]]:
        lo = threshold(k, t)
        for n in self._range("n", lo, self.nmax):
            for m in self._range("m", lo, self.nmax):
                yield n, m


@dataclass
class AuditReport:
    lemma: str
    grid: dict
    tuples_checked: int = 0
    violations: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def clean(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        out = {"lemma": self.lemma, "grid": self.grid, "tuples_checked": self.tuples_checked,
               "violations": self.violations}
        if self.notes:
            out["notes"] = self.notes
        return out


def check_lemma31(m, n, s, k, l, i, t) -> str:
    """'ok', 'violation', or 'out-of-domain' for one tuple."""
    if not in_lemma31_domain(m, n, s, k, l, i, t):
        return "out-of-domain"
    h, H = h_val(m, n, s, k, l, i, t), H_val(m, n, s, k, l, i, t)
    num, den = lemma31_ratio(m, n, s, k, l, i, t)
    return "ok" if h > 0 and H > 0 and den > 0 and num > den else "violation"


def audit_lemma31(grid: Grid = Grid()) -> AuditReport:
    rep = AuditReport("3.1", grid.as_dict())
    proof_form_nonpositive = 0
    proof_form_checked = 0
    for t, k, l in grid.tkl(1):
        for n, m in grid.nm(k, t):
            for i in range(t + 2, k + 1):
                for s in range(i + 2, i + k - t + 1):
                    rep.tuples_checked += 1
                    h, H = h_val(m, n, s, k, l, i, t), H_val(m, n, s, k, l, i, t)
                    num, den = lemma31_ratio(m, n, s, k, l, i, t)
                    if not (h > 0 and H > 0 and den > 0 and num > den):
                        rep.violations.append({"m": m, "n": n, "s": s, "k": k, "l": l, "i": i, "t": t,
                                               "h": h, "H": H, "num": str(num), "den": str(den)})
            # Informational: the l = k reduction stated in the proof uses
            # max{t+2, s+t-k} <= i <= max{s-2, k}; count non-positive h or H there.
            if l == k:
                for s in range(t + 2, 2 * k - t + 1):
                    for i in range(max(t + 2, s + t - k), max(s - 2, k) + 1):
                        proof_form_checked += 1
                        if h_val(m, n, s, k, k, i, t) <= 0 or H_val(m, n, s, k, k, i, t) <= 0:
                            proof_form_nonpositive += 1
    rep.notes = {"proof_form_checked": proof_form_checked,
                 "proof_form_nonpositive": proof_form_nonpositive}
    return rep


def audit_lemma32(grid: Grid = Grid()) -> AuditReport:
    rep = AuditReport("3.2", grid.as_dict())
    for t, k, l in grid.tkl(1):
        for n, m in grid.nm(k, t):
            for s in range(t + 3, k + 2):
                rep.tuples_checked += 1
                v = lemma32_val(m, n, k, l, s, t)
                if v >= 0:
                    rep.violations.append({"m": m, "n": n, "k": k, "l": l, "s": s, "t": t, "value": v})
    return rep


def audit_lemma33(grid: Grid = Grid()) -> AuditReport:
    rep = AuditReport("3.3", grid.as_dict())
    for t, k, l in grid.tkl(2):
        for n, m in grid.nm(k, t):
            for s in range(t + 3, l + 2):
                rep.tuples_checked += 1
                v = lemma33_val(m, n, k, l, s, t)
                if v >= 0:
                    rep.violations.append({"m": m, "n": n, "k": k, "l": l, "s": s, "t": t, "value": v})
    return rep


# Closed-form products from the s = t + 2 case of the main proof.

def subcase1_factors(n, m, k, l, t) -> tuple[int, int]:
    return (binomial(n - t, k - t) - binomial(n - t - 2, k - t),
            binomial(m - t, l - t) + t * binomial(m - t - 2, l - t - 1))


def subcase2_factors(n, m, k, l, t) -> tuple[int, int]:
    return (binomial(n - t, k - t) + t * binomial(n - t - 2, k - t - 1),
            binomial(m - t, l - t) - binomial(m - t - 2, l - t))


def subcase_generators(t: int) -> tuple[list[int], list[int]]:
    """(narrow, wide): narrow = {[t+1], [t+2]-{t+1}}, wide = {[t]} + {[t+2]-{x} : x <= t}."""
    full = ground_mask(t + 2)
    narrow = [ground_mask(t + 1), full ^ (1 << t)]
    wide = [ground_mask(t)] + [full ^ (1 << (x - 1)) for x in range(1, t + 1)]
    return narrow, wide


def case3_product_audit(n: int, m: int, k: int, l: int, t: int) -> dict:
    """Subcase products for s = t + 2.  That case needs generators of size t + 1
    on both sides, so l >= t + 1 is required on top of the main domain."""
    if not (in_main_domain(n, m, k, l, t) and l >= t + 1):
        raise ParameterError(f"{(n, m, k, l, t)} outside 3 <= t < l <= k, min(m,n) >= (t+1)(k-t+1)")
    bound = theorem_bound(n, m, k, l, t)
    narrow, wide = subcase_generators(t)
    A1, B1 = expand(narrow, n, k), expand(wide, m, l)
    A2, B2 = expand(wide, n, k), expand(narrow, m, l)
    f1, f2 = subcase1_factors(n, m, k, l, t), subcase2_factors(n, m, k, l, t)
    core = ground_mask(t + 2)
    FA = UniformFamily(n, k, tuple(a for a in iter_k_subsets(n, k) if (a & core).bit_count() >= t + 1))
    FB = UniformFamily(m, l, tuple(b for b in iter_k_subsets(m, l) if (b & core).bit_count() >= t + 1))

    def cross(X, Y):
        return bool(X.members and Y.members) and is_cross_t_intersecting(FamilyPair(X, Y, t))

    sub1 = {"factors": [f1[0], f1[1]], "enumerated": [len(A1), len(B1)],
            "product": f1[0] * f1[1], "below_bound": f1[0] * f1[1] < bound,
            "factors_match": list(f1) == [len(A1), len(B1)], "cross_t": cross(A1, B1)}
    sub2 = {"factors": [f2[0], f2[1]], "enumerated": [len(A2), len(B2)],
            "product": f2[0] * f2[1], "below_bound": f2[0] * f2[1] < bound,
            "factors_match": list(f2) == [len(A2), len(B2)], "cross_t": cross(A2, B2)}
    sub3 = {"enumerated": [len(FA), len(FB)], "product": len(FA) * len(FB),
            "at_most_bound": len(FA) * len(FB) <= bound, "cross_t": cross(FA, FB)}
    ok = all([sub1["below_bound"], sub1["factors_match"], sub1["cross_t"],
              sub2["below_bound"], sub2["factors_match"], sub2["cross_t"],
              sub3["at_most_bound"], sub3["cross_t"]])
    return {"params": {"n": n, "m": m, "k": k, "l": l, "t": t}, "bound": bound,
            "subcase1": sub1, "subcase2": sub2, "subcase3": sub3, "ok": ok}


def audit_case3(grid: Grid = Grid(nmax=18)) -> AuditReport:
    """Case-3 audit over every (n, m, k, l, t) in the grid with l > t; enumeration limits nmax."""
    rep = AuditReport("case3", grid.as_dict())
    for t, k, l in grid.tkl(1):
        for n, m in grid.nm(k, t):
            rep.tuples_checked += 1
            res = case3_product_audit(n, m, k, l, t)
            if not res["ok"]:
                rep.violations.append(res)
    return rep
