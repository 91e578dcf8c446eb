import json
import random

import pytest

from ffweyl.algebra import Poly, enumerate_GN, parse_poly, poly_from_index
from ffweyl.errors import BudgetError, DomainError, PrecisionError
from ffweyl.expsum import (CharSum, ExpPoly, e_of, fractional_digit_rows,
                           orthogonality, twisted_sum, weyl_residues, weyl_sum)
from ffweyl.kinfty import RationalK, TruncSeries, kernel_element

from helpers import field, rand_exppoly, rand_poly


def lin(F, alpha):
    return ExpPoly(F, {1: alpha})


def test_charsum_basics():
    s = CharSum(3, (4, 4, 4))
    assert s.is_zero() and not s.is_full()
    assert s.magnitude() < 1e-12
    f = CharSum(3, (0, 9, 0))
    assert f.is_full() and f.full_residue() == 1
    assert (s + f).counts == (4, 13, 4)
    assert s.scale(2).counts == (8, 8, 8)
    with pytest.raises(DomainError):
        CharSum(3, (1, 2))


def test_e_of_examples():
    F2, F3 = field(2), field(3)
    assert e_of(RationalK(F2.poly_zero)) == 0
    assert e_of(RationalK(F2.poly_one, F2.poly_t)) == 1
    al = TruncSeries.from_digits(F3, -4, {-1: 2, -2: 1})
    assert e_of(al) == 2
    with pytest.raises(PrecisionError):
        e_of(TruncSeries(F3, 0, (1,)))


def test_weyl_sum_paper_values():
    F3 = field(3)
    s = weyl_sum(lin(F3, RationalK(F3.poly_one, parse_poly(F3, "t^3"))), 2)
    assert s.counts == (9, 0, 0)
    s = weyl_sum(lin(F3, RationalK(F3.poly_one, F3.poly_t)), 1)
    assert s.counts == (1, 1, 1) and s.is_zero()
    s = weyl_sum(ExpPoly(F3, {}), 2)
    assert s.counts == (9, 0, 0)


def test_twisted_sum_examples():
    F2 = field(2)
    f = lin(F2, RationalK(F2.poly_one, parse_poly(F2, "t^2")))
    assert twisted_sum(f, F2.poly_one, 2).counts == weyl_sum(f, 2).counts
    assert twisted_sum(f, F2.poly_zero, 2).counts == (4, 0)
    assert twisted_sum(f, F2.poly_t, 1).counts == (1, 1)


def test_orthogonality_exhaustive_small():
    for q in (2, 3):
        F = field(q)
        for dg in range(0, 4):
            for gi in range(F.q ** dg):
                low = poly_from_index(F, gi, dg).coeffs
                g = Poly(F, list(low) + [0] * (dg - len(low)) + [1])
                n_as = F.q ** dg if dg else 1
                for ai in range(n_as):
                    a = poly_from_index(F, ai, dg) if dg else F.poly_zero
                    al = RationalK(a, g)
                    for N in (1, 2, 3):
                        verdict = orthogonality(al, N)
                        s = weyl_sum(lin(F, al), N)
                        if verdict == "full":
                            assert s.counts[0] == F.q ** N
                        else:
                            assert s.is_zero()


def test_orthogonality_series_certification():
    F2 = field(2)
    s = TruncSeries.from_digits(F2, -4, {-3: 1})
    assert orthogonality(s, 3) == "zero"   # the digit at -3 is inside the window
    assert orthogonality(s, 2) == "full"   # digits -1, -2 vanish
    assert orthogonality(TruncSeries.from_digits(F2, -4, {}), 4) == "full"
    with pytest.raises(PrecisionError):
        orthogonality(TruncSeries.from_digits(F2, -4, {}), 6)


def test_histogram_conservation_fuzz():
    rng = random.Random(30)
    for _ in range(40):
        F = field(rng.choice((2, 3, 5)))
        N = rng.randrange(0, 4)
        f = rand_exppoly(rng, F)
        assert weyl_sum(f, N).total == F.q ** N


def test_table_vs_direct_vs_evaluate():
    rng = random.Random(31)
    for q in (2, 3, 5, 4, 9):
        F = field(q)
        for _ in range(8):
            N = rng.randrange(0, 3)
            f = rand_exppoly(rng, F)
            rt = weyl_residues(f, N, method="table")
            rd = weyl_residues(f, N, method="direct")
            assert (rt == rd).all()
            for i, x in enumerate(enumerate_GN(F, N)):
                assert e_of(f.evaluate(x)) == int(rt[i])


def test_twist_linearity_pointwise():
    rng = random.Random(32)
    F2 = field(2)
    for _ in range(20):
        N = rng.randrange(1, 4)
        f = rand_exppoly(rng, F2, floor=-50)
        m1 = rand_poly(rng, F2, 2)
        m2 = rand_poly(rng, F2, 2)
        r1 = weyl_residues(f.scale_poly(m1), N)
        r2 = weyl_residues(f.scale_poly(m2), N)
        r12 = weyl_residues(f.scale_poly(m1 + m2), N)
        assert ((r1 + r2) % F2.p == r12).all()


def test_partition_merge_determinism():
    rng = random.Random(33)
    F3 = field(3)
    f = rand_exppoly(rng, F3, floor=-60)
    N = 3
    whole = weyl_sum(f, N)
    for _ in range(10):
        cuts = sorted(rng.sample(range(1, 27), 3))
        parts = []
        lo = 0
        for hi in cuts + [27]:
            parts.append(weyl_sum(f, N, lo=lo, hi=hi))
            lo = hi
        merged = parts[0]
        for part in parts[1:]:
            merged = merged + part
        assert merged == whole


def test_precision_and_budget_errors():
    F2 = field(2)
    shallow = TruncSeries.from_digits(F2, -2, {-1: 1})
    with pytest.raises(PrecisionError):
        weyl_sum(ExpPoly(F2, {3: shallow}), 3)
    with pytest.raises(BudgetError):
        weyl_sum(ExpPoly(F2, {}), 24, budget=1 << 10)


def test_kernel_certificate():
    # sampled-digit zeros force the full sum at the characteristic exponent
    for q in (2, 3):
        F = field(q)
        al = kernel_element(F, -40, 3)
        f = ExpPoly(F, {q: al})
        for N in range(1, 7):
            assert weyl_sum(f, N).counts[0] == q ** N


def test_fractional_digit_rows_paths_agree():
    rng = random.Random(34)
    for q in (2, 3, 4):
        F = field(q)
        for _ in range(6):
            N = rng.randrange(1, 3)
            f = rand_exppoly(rng, F, max_exp=4, floor=-50)
            a = fractional_digit_rows(f, N, 3, method="table")
            b = fractional_digit_rows(f, N, 3, method="direct")
            assert a == b
            # digit 1 of the rows matches the residue source of e_of
            for row, x in zip(a, enumerate_GN(F, N)):
                assert row[0] == f.evaluate(x).digit(-1)


def test_exppoly_json_roundtrip():
    F3 = field(3)
    f = ExpPoly(F3, {
        3: RationalK(F3.poly_one, parse_poly(F3, "t^2+1")),
        1: TruncSeries.from_digits(F3, -20, {-1: 2, -7: 1}),
        0: RationalK(parse_poly(F3, "t"), parse_poly(F3, "t^2+t+1")),
    })
    back = ExpPoly.from_json(json.loads(json.dumps(f.to_json())))
    assert back == f
    kern = ExpPoly.from_json({"field": "q=2", "terms": [
        {"exp": 2, "coeff": {"kernel": {"floor": -20, "seed": 5}}}]})
    assert kern.coeff(2) == kernel_element(field(2), -20, 5)
    with pytest.raises(DomainError):
        ExpPoly.from_json({"field": "q=2", "terms": [
            {"exp": 1, "coeff": {"bogus": 1}}]})


def test_exppoly_drops_exact_zero_and_rejects_negative():
    F2 = field(2)
    f = ExpPoly(F2, {2: RationalK(F2.poly_zero), 1: RationalK(F2.poly_one)})
    assert f.support() == {1}
    with pytest.raises(DomainError):
        ExpPoly(F2, {-1: RationalK(F2.poly_one)})
