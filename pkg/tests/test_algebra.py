"""Exact-arithmetic checks for vectors and canonical subgroup bases."""

import itertools

import pytest

from gsp import (
    DimensionMismatchError,
    ParameterError,
    ResourceCapError,
    Subgroup,
    VectorP,
    all_vectors,
    canonicalize,
    complement,
    enumerate_subgroups,
    full_subgroup,
    intersect,
    orthogonal,
    random_subgroup,
    subgroup_sum,
    trivial_subgroup,
)
from conftest import vec


def brute_span(p, n, gens):
    """Independent oracle: all coefficient combinations of the generators."""
    out = set()
    for coeffs in itertools.product(range(p), repeat=len(gens)):
        v = VectorP.zero(p, n)
        for c, g in zip(coeffs, gens):
            if c:
                v = v + g.scale(c)
        out.add(v)
    return frozenset(out)


SMALL_GRID = [(2, 3), (2, 4), (3, 2), (3, 3), (5, 2)]


class TestVectorOps:
    def test_add(self):
        assert vec(2, "0011") + vec(2, "0110") == vec(2, "0101")
        assert vec(3, "12") + vec(3, "21") == vec(3, "00")
        assert vec(5, "43") + vec(5, "34") == vec(5, "22")

    def test_add_full_table_p5(self):
        # scripted cross-check of every residue pair
        for a in range(5):
            for b in range(5):
                s = VectorP(5, (a,)) + VectorP(5, (b,))
                assert s.coords[0] == (a + b) % 5

    def test_sub(self):
        for a in all_vectors(2, 4):
            for b in all_vectors(2, 4):
                assert a - b == a + b  # -1 = 1 mod 2
        r = vec(3, "10") - vec(3, "22")
        assert r == vec(3, "21")
        assert vec(3, "22") + r == vec(3, "10")
        v = vec(5, "43")
        assert (v - v).is_zero()

    def test_dot(self):
        assert vec(2, "0011").dot(vec(2, "0111")) == 0
        assert vec(2, "0011").dot(vec(2, "0001")) == 1
        assert vec(3, "12").dot(vec(3, "21")) == 1

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            vec(2, "01") + vec(2, "011")
        with pytest.raises(DimensionMismatchError):
            vec(2, "01") + vec(3, "01")
        with pytest.raises(DimensionMismatchError):
            vec(2, "01").dot(vec(3, "01"))

    def test_construction_errors(self):
        with pytest.raises(ParameterError):
            VectorP(4, (0, 1))  # not prime
        with pytest.raises(ParameterError):
            VectorP(3, (0, 3))  # residue out of range

    def test_index_roundtrip(self):
        for v in all_vectors(3, 3):
            assert VectorP.from_index(3, 3, v.to_index()) == v

    def test_digits_roundtrip(self):
        v = vec(5, "4302")
        assert VectorP.from_digits(5, v.digits()) == v


class TestCanonicalize:
    def test_worked_example(self):
        h = canonicalize(2, 4, [vec(2, "0011"), vec(2, "0110")])
        assert [r.digits() for r in h.basis] == ["0101", "0011"]
        assert h.pivots() == (1, 2)
        assert brute_span(2, 4, [vec(2, "0011"), vec(2, "0110")]) == frozenset(h.elements())

    def test_zero_rows_dropped(self):
        h = canonicalize(2, 4, [vec(2, "0000")])
        assert h.rank == 0 and h.is_trivial()

    def test_dependent_row(self):
        h = canonicalize(2, 4, [vec(2, "0011"), vec(2, "0110"), vec(2, "0101")])
        assert [r.digits() for r in h.basis] == ["0101", "0011"]

    def test_fixed_point(self):
        for p, n in SMALL_GRID:
            for k in range(n + 1):
                for h in enumerate_subgroups(p, n, k):
                    assert canonicalize(p, n, h.basis) == h

    def test_span_equality_gives_identical_basis(self):
        # any two generating sets with the same brute-force span canonicalize equally
        p, n = 2, 3
        vectors = list(all_vectors(p, n))
        seen: dict[frozenset, Subgroup] = {}
        for r in range(len(vectors) + 1):
            for gens in itertools.combinations(vectors, r):
                span = brute_span(p, n, list(gens))
                canon = canonicalize(p, n, list(gens))
                assert frozenset(canon.elements()) == span
                if span in seen:
                    assert seen[span] == canon
                seen[span] = canon

    def test_rref_validation(self):
        with pytest.raises(ParameterError):
            Subgroup(2, 4, (vec(2, "0011"), vec(2, "0110")))  # not reduced


class TestMembership:
    def test_contains_worked_example(self, ref_secret):
        assert ref_secret.contains(vec(2, "0101"))
        assert ref_secret.contains(vec(2, "0000"))
        assert not ref_secret.contains(vec(2, "1000"))

    def test_coset_reduce(self, ref_secret):
        assert ref_secret.coset_reduce(vec(2, "0010")) == vec(2, "0001")
        for s in ref_secret.elements():
            assert ref_secret.coset_reduce(s).is_zero()

    def test_coset_reduce_pivot_free_input(self, ref_secret):
        # brute-force oracle: the unique coset member that is zero on all pivots
        x = vec(2, "1001")
        candidates = [
            x + s
            for s in ref_secret.elements()
            if all((x + s).coords[c] == 0 for c in ref_secret.pivots())
        ]
        assert candidates == [vec(2, "1001")]
        assert ref_secret.coset_reduce(x) == candidates[0]

    def test_coset_reduce_law(self):
        # equal representatives exactly when the difference is in the subgroup
        for p, n in [(2, 4), (3, 3)]:
            for h in enumerate_subgroups(p, n, 2):
                for x in all_vectors(p, n):
                    for y in all_vectors(p, n):
                        same = h.coset_reduce(x) == h.coset_reduce(y)
                        assert same == h.contains(x - y)


class TestSetAlgebra:
    def test_sum(self):
        a = canonicalize(2, 4, [vec(2, "0011")])
        b = canonicalize(2, 4, [vec(2, "0110")])
        assert [r.digits() for r in subgroup_sum(a, b).basis] == ["0101", "0011"]
        assert subgroup_sum(a, trivial_subgroup(2, 4)) == a
        assert subgroup_sum(a, a) == a

    def test_intersect(self, ref_secret):
        other = canonicalize(2, 4, [vec(2, "1000"), vec(2, "0001")])
        inter = intersect(ref_secret, other)
        assert inter.is_trivial()
        assert frozenset(inter.elements()) == frozenset(ref_secret.elements()) & frozenset(
            other.elements()
        )
        assert intersect(ref_secret, ref_secret) == ref_secret
        line = canonicalize(2, 4, [vec(2, "0101")])
        assert intersect(ref_secret, line) == line

    def test_intersect_matches_brute(self):
        for p, n in [(2, 4), (3, 3)]:
            subs = [h for k in range(n + 1) for h in enumerate_subgroups(p, n, k)]
            for h in subs[::3]:
                for g in subs[::5]:
                    expect = frozenset(h.elements()) & frozenset(g.elements())
                    assert frozenset(intersect(h, g).elements()) == expect

    def test_complement(self, ref_secret):
        c = complement(ref_secret)
        assert [r.digits() for r in c.basis] == ["1000", "0001"]
        assert complement(trivial_subgroup(3, 3)) == full_subgroup(3, 3)
        assert complement(full_subgroup(3, 3)).is_trivial()

    def test_complement_law(self):
        for p, n in SMALL_GRID:
            for k in range(n + 1):
                for h in enumerate_subgroups(p, n, k):
                    c = complement(h)
                    assert subgroup_sum(h, c) == full_subgroup(p, n)
                    assert intersect(h, c).is_trivial()

    def test_rank_additivity_for_disjoint_pairs(self):
        # rank(V+W) = rank V + rank W and the joined bases stay independent
        p, n = 2, 4
        subs = [h for k in range(n + 1) for h in enumerate_subgroups(p, n, k)]
        for v in subs[::4]:
            for w in subs[::7]:
                if not intersect(v, w).is_trivial():
                    continue
                joined = subgroup_sum(v, w)
                assert joined.rank == v.rank + w.rank
                assert canonicalize(p, n, v.basis + w.basis).rank == len(v.basis + w.basis)

    def test_coset_extension_law(self):
        # <V u w> meets H trivially iff the coset V+w misses H entirely
        p, n = 2, 3
        subs = [h for k in range(n + 1) for h in enumerate_subgroups(p, n, k)]
        for v in subs:
            for h in subs:
                if not intersect(v, h).is_trivial():
                    continue
                for w in all_vectors(p, n):
                    if v.contains(w):
                        continue
                    lhs = intersect(canonicalize(p, n, v.basis + (w,)), h).is_trivial()
                    coset_hits = any(h.contains(x + w) for x in v.elements())
                    assert lhs == (not coset_hits)


class TestOrthogonal:
    def test_worked_example(self, ref_secret):
        perp = orthogonal(ref_secret)
        assert [r.digits() for r in perp.basis] == ["1000", "0111"]
        brute = [
            g
            for g in all_vectors(2, 4)
            if all(g.dot(row) == 0 for row in ref_secret.basis)
        ]
        assert frozenset(perp.elements()) == frozenset(brute)

    def test_trivial_and_double_dual(self):
        assert orthogonal(trivial_subgroup(3, 3)) == full_subgroup(3, 3)
        for p, n in SMALL_GRID:
            for k in range(n + 1):
                for h in enumerate_subgroups(p, n, k):
                    perp = orthogonal(h)
                    assert h.order * perp.order == p**n
                    assert orthogonal(perp) == h


class TestEnumeration:
    def test_rank1_of_z2_squared(self):
        subs = list(enumerate_subgroups(2, 2, 1))
        assert len(subs) == 3
        assert {s.basis[0].digits() for s in subs} == {"01", "10", "11"}

    def test_rank0(self):
        assert list(enumerate_subgroups(3, 3, 0)) == [trivial_subgroup(3, 3)]

    def test_count_2_4_2(self):
        subs = list(enumerate_subgroups(2, 4, 2))
        assert len(subs) == 35
        assert len(set(subs)) == 35

    def test_cap(self):
        with pytest.raises(ResourceCapError):
            list(enumerate_subgroups(2, 21, 1))
        with pytest.raises(ResourceCapError):
            list(enumerate_subgroups(2, 12, 1, cap=2**10))


class TestRandomSubgroup:
    def test_deterministic(self):
        assert random_subgroup(2, 4, 2, seed=5) == random_subgroup(2, 4, 2, seed=5)

    def test_rank0(self):
        assert random_subgroup(3, 4, 0, seed=1).is_trivial()

    def test_coverage_and_uniformity(self):
        import scipy.stats

        counts: dict[Subgroup, int] = {}
        for seed in range(3500):
            h = random_subgroup(2, 4, 2, seed)
            counts[h] = counts.get(h, 0) + 1
        assert len(counts) == 35
        expected = 3500 / 35
        chi2 = sum((c - expected) ** 2 / expected for c in counts.values())
        assert scipy.stats.chi2.sf(chi2, df=34) > 1e-3


class TestSerialization:
    def test_worked_example(self, ref_secret):
        assert ref_secret.to_text() == "p=2 n=4 rows=0101;0011"
        assert Subgroup.from_text(ref_secret.to_text()) == ref_secret

    def test_trivial(self):
        t = trivial_subgroup(3, 5)
        assert t.to_text() == "p=3 n=5 rows="
        assert Subgroup.from_text(t.to_text()) == t

    def test_roundtrip_enumerated(self):
        for h in enumerate_subgroups(3, 3, 2):
            assert Subgroup.from_text(h.to_text()) == h

    def test_bad_text(self):
        with pytest.raises(ParameterError):
            Subgroup.from_text("p=2 rows=01")
        with pytest.raises(ParameterError):
            Subgroup.from_text("p=2 n=3 rows=01")
