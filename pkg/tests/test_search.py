import itertools
import random
from fractions import Fraction
from math import comb, isqrt

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from ffclass import Design, DesignClass, classify, exact_det, full_factorial, gram_matrix, to_design_matrix
from ffclass.bounds import saturated_class_from_det
from ffclass.search import (
    BudgetExceeded,
    Criterion,
    SingularInformationError,
    a_value,
    argmax_agreement,
    charpoly,
    compare_roots,
    conjecture_audit,
    d_value,
    e_value,
    exhaustive_search,
    iter_normalized,
    matrix_to_design,
    optimal_sets,
    saturated_exhaustive,
    saturated_local_search,
    smallest_real_root,
)
from ffclass.search.criteria import batch_gram, batch_gram_det, outer_table
from ffclass.search.polyroots import batch_charpoly


def sym_gram(d: Design) -> sympy.Matrix:
    return sympy.Matrix(gram_matrix(to_design_matrix(d)).tolist())


class TestCharpoly:
    @settings(max_examples=80, deadline=None)
    @given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=n, max_size=n)))
    def test_against_sympy(self, a):
        assert charpoly(a) == [int(c) for c in sympy.Matrix(a).charpoly().all_coeffs()]

    def test_batch_matches_scalar(self):
        rng = np.random.default_rng(0)
        a = rng.integers(-3, 4, size=(50, 5, 5))
        g = np.einsum("kji,kjl->kil", a, a)
        batch = batch_charpoly(g)
        for m, row in zip(g, batch):
            assert charpoly(m) == row.tolist()


class TestRoots:
    def test_exact_rational_roots(self):
        # (t - 4)^2 (t - 10)
        root = smallest_real_root([1, -18, 96, -160])
        assert root.lo <= 4 <= root.hi and root.width <= Fraction(1, 10**9)

    def test_zero_root(self):
        root = smallest_real_root([1, -3, 0])
        assert root.exact and root.lo == 0

    def test_irrational(self):
        root = smallest_real_root([1, 0, -2])  # -sqrt(2)
        assert root.lo <= -2**0.5 <= root.hi
        root = smallest_real_root([1, -4, 2])  # 2 - sqrt(2)
        assert root.lo <= 2 - 2**0.5 <= root.hi

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.lists(st.integers(-2, 2), min_size=4, max_size=4), min_size=2, max_size=6))
    def test_gram_smallest_eigenvalue(self, rows):
        x = np.array(rows)
        g = x.T @ x
        root = smallest_real_root(charpoly(g))
        lam = np.linalg.eigvalsh(g.astype(float)).min()
        assert float(root.lo) - 1e-7 <= lam <= float(root.hi) + 1e-7
        assert root.width <= Fraction(1, 10**9)

    def test_compare(self):
        a = smallest_real_root([1, -18, 96, -160])  # 4
        b = smallest_real_root([1, -20, 64])  # 4 and 16
        c = smallest_real_root([1, -4, 2])  # 0.585...
        assert compare_roots(a, b) == 0
        assert compare_roots(c, a) == -1
        assert compare_roots(a, c) == 1
        # 1 and 1 + 1e-12 need refinement beyond the default width
        p = [10**12, -(2 * 10**12 + 1), 10**12 + 1]  # roots 1 and 1 + 1e-12
        q = [1, -1]
        near = smallest_real_root([10**12, -(10**12 + 1)])
        assert compare_roots(smallest_real_root(q), near) == -1
        assert compare_roots(near, smallest_real_root(q)) == 1
        assert compare_roots(smallest_real_root(p), smallest_real_root(q)) == 0


class TestValues:
    def test_d_values(self, reference_design):
        assert d_value(reference_design(4, 5)) == 2304
        assert d_value(reference_design(5, 10)) == 802816
        assert d_value(Design(4, ((1, 1, 1, 1), (-1, 1, 1, 1)))) == 0

    def test_a_full_factorial(self):
        assert a_value(full_factorial(2)) == Fraction(3, 4)

    def test_a_hadamard(self):
        d = Design(3, ((1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)))
        assert a_value(d) == 1

    def test_a_reference_r5_against_rational_inverse(self, reference_design):
        d = reference_design(4, 5)
        oracle = sym_gram(d).inv().trace()
        assert a_value(d) == Fraction(int(oracle.p), int(oracle.q)) == Fraction(10, 9)

    def test_a_singular(self):
        with pytest.raises(SingularInformationError):
            a_value(Design(3, ((1, 1, 1), (-1, 1, 1))))

    def test_e_values(self):
        root = e_value(full_factorial(2))
        assert root.lo <= 4 <= root.hi
        root = e_value(Design(3, ((1, 1, 1), (-1, 1, 1))))
        assert root.exact and root.lo == 0

    def test_e_reference_r6_is_best(self, reference_design):
        best = exhaustive_search(5, 6, "e")
        assert compare_roots(e_value(reference_design(5, 6)), best.best_value) == 0


class TestBatchKernels:
    def test_gram_det_matches_exact(self):
        outer = outer_table(4)
        rng = random.Random(0)
        codes = np.array([[0] + sorted(rng.sample(range(1, 16), 5)) for _ in range(300)])
        dets = batch_gram_det(batch_gram(outer, codes))
        for c, v in zip(codes, dets):
            assert v == d_value(Design.from_codes(4, c.tolist()))

    def test_singular_psd(self):
        g = np.array([[[0, 0], [0, 1]], [[1, 1], [1, 1]], [[2, 1], [1, 2]]])
        assert batch_gram_det(g).tolist() == [0, 0, 3]

    def test_enumeration_count_and_order(self):
        rows = np.vstack(list(iter_normalized(4, 4)))
        assert len(rows) == comb(15, 3)
        assert (rows[:, 0] == 0).all()
        keys = [tuple(r) for r in rows.tolist()]
        assert keys == sorted(keys) and len(set(keys)) == len(keys)


def brute_force(s, r, key):
    """Best value over every r-subset of the full factorial, no normalization."""
    pts = list(itertools.product([1, -1], repeat=s))
    best = None
    for sub in itertools.combinations(pts, r):
        v = key(Design(s, sub))
        if v is not None and (best is None or v > best):
            best = v
    return best


class TestExhaustive:
    def test_s3_r4(self):
        res = exhaustive_search(3, 4, "d")
        assert res.best_value == 256
        assert brute_force(3, 4, d_value) == 256
        assert res.exhaustive_flag

    @pytest.mark.parametrize("r", range(1, 9))
    def test_normalization_sound_d(self, r):
        assert exhaustive_search(3, r, "d").best_value == brute_force(3, r, d_value)

    @pytest.mark.parametrize("r", range(4, 9))
    def test_normalization_sound_a(self, r):
        def neg_a(d):
            try:
                return -a_value(d)
            except SingularInformationError:
                return None
        assert exhaustive_search(3, r, "a").best_value == -brute_force(3, r, neg_a)

    @pytest.mark.parametrize("r", range(1, 9))
    def test_normalization_sound_e(self, r):
        oracle = brute_force(3, r, lambda d: float(np.linalg.eigvalsh(gram_matrix(to_design_matrix(d)).astype(float)).min()))
        res = exhaustive_search(3, r, "e").best_value
        assert float(res.lo) - 1e-7 <= oracle <= float(res.hi) + 1e-7

    def test_s4_r8(self):
        res = exhaustive_search(4, 8, "d")
        assert res.best_value == 2**15
        assert res.classification.design_class is DesignClass.REGULAR
        assert [(x.word, x.sign) for x in res.classification.relations] == [((1, 2, 3), 1)]

    def test_s5_r9(self):
        res = exhaustive_search(5, 9, "d")
        assert res.best_value == 458752 == 2**16 * 7
        assert res.classification.design_class is DesignClass.SUBSET

    def test_value_matches_reevaluation(self):
        for crit, fn in (("d", d_value), ("a", a_value)):
            res = exhaustive_search(4, 6, crit)
            assert fn(res.best_design) == res.best_value
        res = exhaustive_search(4, 6, "e")
        assert compare_roots(e_value(res.best_design), res.best_value) == 0

    def test_tie_break_is_smallest_encoding(self):
        res = exhaustive_search(3, 4, "d")
        # scan in canonical order with the scalar criterion
        best, key = None, None
        for sub in itertools.combinations(range(1, 8), 3):
            d = Design.from_codes(3, (0,) + sub)
            v = d_value(d)
            if best is None or v > best:
                best, key = v, d.canonical_key()
        assert res.best_design.canonical_key() == key

    def test_maximizer_count(self):
        res = exhaustive_search(3, 4, "d")
        count = sum(
            1 for sub in itertools.combinations(range(1, 8), 3) if d_value(Design.from_codes(3, (0,) + sub)) == 256
        )
        assert res.num_maximizers == count

    def test_threads_deterministic(self):
        for crit in "dae":
            a = exhaustive_search(4, 7, crit, threads=1)
            b = exhaustive_search(4, 7, crit, threads=4)
            assert a.to_json() == b.to_json()

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            exhaustive_search(5, 10, "d", budget=1000)

    def test_rejects_large_s(self):
        with pytest.raises(ValueError):
            exhaustive_search(7, 3, "d")

    def test_a_all_singular(self):
        with pytest.raises(SingularInformationError):
            exhaustive_search(4, 3, "a")


class TestSaturated:
    def test_values(self):
        assert saturated_exhaustive(4).best_value == 16
        assert saturated_exhaustive(5).best_value == 48
        assert saturated_exhaustive(6).best_value == 160

    def test_r4_against_all_normalized_matrices(self):
        # every +-1 4x4 matrix with first row and column +1: 2^9 of them
        best = 0
        for bits in itertools.product([1, -1], repeat=9):
            m = np.ones((4, 4), dtype=int)
            m[1:, 1:] = np.array(bits).reshape(3, 3)
            best = max(best, abs(exact_det(m)))
        assert best == saturated_exhaustive(4).best_value

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            saturated_exhaustive(7)

    @pytest.mark.parametrize("r", [5, 6])
    def test_valuation_class_cross_check(self, r):
        """Divisibility of det M by 2^r decides AFD exactly as the GF(2) rank does."""
        s = r - 1
        outer = outer_table(s)
        checked = 0
        for codes in iter_normalized(s, r):
            dets = batch_gram_det(batch_gram(outer, codes))
            for c, g in zip(codes.tolist(), dets.tolist()):
                if g == 0:
                    continue
                det = isqrt(g)
                assert det * det == g
                d = Design.from_codes(s, c)
                thm = saturated_class_from_det(det, r)
                geo = classify(d).design_class
                assert (thm is DesignClass.AFD) == (geo is DesignClass.AFD)
                checked += 1
        assert checked > 0


class TestLocal:
    def test_r5_matches_exhaustive(self):
        for seed in range(3):
            assert saturated_local_search(5, seed=seed, restarts=200, target=48).best_value == 48

    def test_r7(self):
        res = saturated_local_search(7, seed=0, target=576)
        assert res.best_value == 576 and not res.exhaustive_flag
        assert abs(exact_det(to_design_matrix(res.best_design))) == 576

    def test_deterministic(self):
        a = saturated_local_search(9, seed=3, restarts=20)
        b = saturated_local_search(9, seed=3, restarts=20)
        assert a.to_json() == b.to_json()

    def test_matrix_to_design(self):
        with pytest.raises(ValueError):
            matrix_to_design([[1, 1], [-1, 1]])


def test_audit_small():
    rows = conjecture_audit([4, 5, 6, 7])
    assert [r.det for r in rows] == [16, 48, 160, 576]
    assert all(r.agree for r in rows)
    assert rows[1].valuation == 4 and rows[1].valuation_class == "afd" and rows[1].prediction == "afd"
    assert rows[0].verdict == "exhaustive" and rows[3].verdict == "certificate-level"


def test_audit_unverified():
    rows = conjecture_audit([11], restarts=1, seed=0)
    if rows[0].det is None:
        assert rows[0].verdict == "unverified"
    else:
        assert rows[0].det == 327680


def test_audit_rejects_unknown_order():
    with pytest.raises(ValueError):
        conjecture_audit([20])


def test_e_tie_outside_d_argmax(reference_design):
    """A design with smallest eigenvalue 4 but a lower determinant than the D-optimum."""
    other = Design.from_codes(5, (0, 5, 6, 12, 20, 27))
    best = reference_design(5, 6)
    assert sympy.Matrix(gram_matrix(to_design_matrix(other)).tolist()).eigenvals() == {16: 1, 4: 5}
    assert sympy.Matrix(gram_matrix(to_design_matrix(best)).tolist()).eigenvals() == {10: 2, 4: 4}
    assert compare_roots(e_value(other), e_value(best)) == 0
    assert d_value(other) == 16384 < d_value(best) == 25600


class TestCensus:
    @pytest.mark.parametrize("crit", ["d", "a", "e"])
    @pytest.mark.parametrize("r", [4, 5, 6])
    def test_matches_scalar_scan(self, crit, r):
        from collections import Counter

        res = exhaustive_search(3, r, crit)
        scored = []
        for sub in itertools.combinations(range(1, 8), r - 1):
            d = Design.from_codes(3, (0,) + sub)
            if crit == "d":
                scored.append((d_value(d), d))
            elif crit == "a":
                if d_value(d):
                    scored.append((-a_value(d), d))
            else:
                scored.append((e_value(d), d))
        if crit == "e":
            top = [d for v, d in scored if compare_roots(v, res.best_value) == 0]
        else:
            best = max(v for v, _ in scored)
            top = [d for v, d in scored if v == best]
        expected = Counter(classify(d).design_class.value for d in top)
        assert res.extra["maximizer_classes"] == dict(sorted(expected.items()))
        assert sum(expected.values()) == res.num_maximizers

    def test_disabled(self):
        assert "maximizer_classes" not in exhaustive_search(3, 4, "a", census=False).extra

    def test_argmax_agreement(self):
        doc = argmax_agreement(5, 6)
        assert doc["d_maximizers"] == 60
        assert doc["a"] == {"maximizers": 60, "equal": True, "contains_d": True, "classes_outside_d": {}}
        assert doc["e"]["maximizers"] == 66 and doc["e"]["contains_d"] and not doc["e"]["equal"]
        assert doc["e"]["classes_outside_d"] == {"subset": 6}

    def test_optimal_sets_match_search(self):
        sets = optimal_sets(4, 6)
        for crit in "dae":
            res = exhaustive_search(4, 6, crit, census=False)
            assert len(sets[crit][1]) == res.num_maximizers
            assert min(sets[crit][1]) == tuple(res.best_design.codes())


def test_d_optimal_classes_can_differ(reference_design):
    """Two D-optimal designs at s=5, r=10 that fall in different classes."""
    from conftest import FIXTURES
    from ffclass import parse_design

    other = parse_design((FIXTURES / "s5_r10_subset.txt").read_text())
    assert d_value(other) == d_value(reference_design(5, 10)) == 802816
    assert all(x1 * x2 * x3 == 1 for x1, x2, x3, _, _ in other.runs)
    assert classify(other).design_class is DesignClass.SUBSET
    assert classify(reference_design(5, 10)).design_class is DesignClass.AFD
