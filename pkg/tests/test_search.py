import random

import pytest

from suites import random_family
from xfam.constructions import frankl_family, star, theorem_bound
from xfam.core import CapacityError, DomainError, FamilyPair, ParameterError, UniformFamily, ground_mask, iter_k_subsets
from xfam.search import (
    best_response,
    canonical_form,
    canonical_pair,
    closure,
    count_antichains,
    describe,
    max_product_antichain,
    max_product_both,
    max_product_raw,
    verify_theorem_1_8,
)


def test_antichain_counts():
    assert [count_antichains(s) for s in range(6)] == [2, 3, 6, 20, 168, 7581]


def test_best_response_examples():
    S = star(8, 4, ground_mask(3))
    assert best_response(S, 8, 4, 3) == S
    full = UniformFamily(4, 2, tuple(iter_k_subsets(4, 2)))
    assert len(best_response(full, 4, 2, 1)) == 0
    k, l = 5, 3
    assert best_response(UniformFamily(9, k, (ground_mask(k),)), 9, l, l).members == tuple(iter_k_subsets(k, l))


def test_best_response_antitone():
    rng = random.Random(1)
    for _ in range(200):
        A = random_family(rng, 7, 3, rng.randint(1, 6))
        A2 = A.with_members(set(A.members) | set(rng.sample(A.members + tuple(iter_k_subsets(7, 3)), 3)))
        assert set(best_response(A2, 7, 3, 1).members) <= set(best_response(A, 7, 3, 1).members)


def test_closure_examples():
    c = closure(UniformFamily(8, 4, (ground_mask(4),)), 8, 4, 3)
    # seed [4]: the partner is every 4-set meeting [4] in three points, which
    # forces A back down to {[4]}
    assert (len(c.A), len(c.B), c.product) == (1, 17, 17)
    assert set(star(8, 4, ground_mask(3)).members) <= set(c.B.members)
    S = star(8, 4, ground_mask(3))
    assert closure(S, 8, 4, 3) == FamilyPair(S, S, 3)
    with pytest.raises(DomainError):
        closure(UniformFamily(4, 2, tuple(iter_k_subsets(4, 2))), 4, 2, 1)


def test_closure_idempotent_extensive():
    rng = random.Random(2)
    done = 0
    while done < 200:
        A = random_family(rng, 7, 3, rng.randint(1, 3))
        try:
            P = closure(A, 7, 3, 2)
        except DomainError:
            continue
        done += 1
        assert set(A.members) <= set(P.A.members)
        assert closure(P.A, 7, 3, 2) == P
        assert best_response(P.B, 7, 3, 2) == P.A


def test_canonical_form_idempotent_and_invariant():
    F = frankl_family(8, 4, 3, 1)
    P = FamilyPair(F, F, 3)
    Q = canonical_pair(P)
    assert canonical_pair(Q) == Q
    perm = [3, 7, 1, 5, 8, 2, 4, 6]

    def relabel(G):
        return G.with_members(sum(1 << (perm[x] - 1) for x in range(8) if a >> x & 1) for a in G.members)

    assert canonical_form(FamilyPair(relabel(F), relabel(F), 3)) == canonical_form(P)


def test_canonical_unequal_grounds():
    B = star(8, 4, 0b111)
    a, b = canonical_form(FamilyPair(star(9, 4, 0b111), B, 3))
    assert all(x < 1 << 8 for x in b)
    # swapping 9 with 1 leaves [8] setwise unfixed, so these two pairs differ
    moved = FamilyPair(star(9, 4, 0b100000110), B.with_members(b), 3)
    assert canonical_form(moved) != (a, b)
    # permuting inside [8] and fixing 9 is allowed
    inside = FamilyPair(star(9, 4, 0b11100000), star(8, 4, 0b11100000), 3)
    assert canonical_form(inside) == (a, b)


def test_describe():
    S = star(8, 4, ground_mask(3))
    assert describe(FamilyPair(S, S, 3))["construction"] == "star"
    F = frankl_family(8, 4, 3, 1)
    assert describe(FamilyPair(F, F, 3))["construction"] == "frankl"


@pytest.mark.parametrize("params,value,names", [
    ((8, 8, 4, 4, 3), 25, ["frankl", "star"]),
    ((8, 8, 4, 3, 3), 5, ["star"]),
])
def test_antichain_examples(params, value, names):
    cert = max_product_antichain(*params)
    assert cert.max_product == value
    assert sorted(o.descriptor["construction"] for o in cert.optima) == names
    assert cert.recheck()
    assert cert.max_product >= theorem_bound(*params)


def test_antichain_degenerate_optimum():
    cert = max_product_antichain(8, 8, 4, 3, 3)
    (opt,) = cert.optima
    assert opt.pair.B.members == (0b111,)
    assert opt.pair.A == star(8, 4, 0b111)


def test_antichain_capacity():
    with pytest.raises(CapacityError):
        max_product_antichain(12, 12, 5, 5, 3)
    with pytest.raises(ParameterError):
        max_product_antichain(3, 8, 4, 4, 3)


def test_raw_capacity():
    with pytest.raises(CapacityError):
        max_product_raw(10, 10, 5, 5, 3)
    with pytest.raises(CapacityError):
        max_product_raw(8, 8, 4, 4, 3, max_sets=20)


@pytest.mark.parametrize("params,value", [
    ((6, 6, 3, 3, 2), 16),
    ((6, 6, 3, 3, 1), 100),
    ((7, 7, 3, 3, 2), 25),
    ((7, 7, 3, 2, 1), 90),
])
def test_engines_agree(params, value):
    a, r = max_product_antichain(*params), max_product_raw(*params)
    assert a.max_product == r.max_product == value
    assert a.recheck() and r.recheck()


def test_jobs_do_not_change_result():
    one = max_product_antichain(8, 8, 4, 4, 3, jobs=1).to_json()
    two = max_product_antichain(8, 8, 4, 4, 3, jobs=2).to_json()
    one.pop("runtime_ms")
    two.pop("runtime_ms")
    assert one == two


def test_both_and_json():
    cert = max_product_both(8, 8, 4, 4, 3)
    doc = cert.to_json()
    assert list(doc)[:6] == ["params", "max_product", "optima", "method", "candidates_enumerated", "runtime_ms"]
    assert doc["max_product"] == "25" and doc["method"] == "both"
    assert doc["stats"]["agree"] and doc["stats"]["optima_agree"]
    assert doc["optima"][0]["A_file"].startswith("8 4\n")


def test_verify_theorem():
    rep = verify_theorem_1_8(8, 8, 4, 4, 3)
    assert rep["status"] == "CONFIRMED" and len(rep["certificate"]["optima"]) == 2
    with pytest.raises(ParameterError):
        verify_theorem_1_8(8, 8, 4, 4, 2)
