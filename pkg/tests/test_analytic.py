"""Dirichlet-series tools: truncated sums, the log-derivative identity, and
certified inclusion-exclusion values."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zhat.analytic import (
    DirichletTruncation,
    _iroot,
    de_delta_bracket,
    de_delta_exact,
    de_delta_table,
    delta_ratio,
    dlog_zeta_check,
    vm_identity_check,
    vm_identity_scan,
    von_mangoldt,
    zeta_set,
)
from zhat.setdsl import compile_set


# ---------------------------------------------------------------------------
# von Mangoldt weights


def test_von_mangoldt_values():
    assert von_mangoldt(1) == 0.0
    assert von_mangoldt(2) == pytest.approx(math.log(2))
    assert von_mangoldt(8) == pytest.approx(math.log(2))
    assert von_mangoldt(9) == pytest.approx(math.log(3))
    assert von_mangoldt(97) == pytest.approx(math.log(97))
    assert von_mangoldt(12) == 0.0
    assert von_mangoldt(30030) == 0.0


def test_von_mangoldt_rejects_nonpositive():
    with pytest.raises(ValueError):
        von_mangoldt(0)


def test_vm_identity_single_points():
    assert vm_identity_check(360, 1e-9)
    assert vm_identity_check(97, 1e-9)
    assert not vm_identity_check(360, -1.0)


def test_vm_identity_scan_holds_to_1e5():
    assert vm_identity_scan(10**5, 1e-8)


def test_vm_identity_scan_oracle_small():
    # independent check: accumulate weights over multiples
    n_max = 2000
    acc = [0.0] * (n_max + 1)
    for d in range(1, n_max + 1):
        w = von_mangoldt(d)
        if w:
            for m in range(d, n_max + 1, d):
                acc[m] += w
    worst = max(abs(acc[n] - math.log(n)) for n in range(1, n_max + 1))
    assert worst < 1e-10


# ---------------------------------------------------------------------------
# truncated restricted zeta values


def test_zeta_set_partial_matches_fsum():
    cset = compile_set("cong(1,4)")
    zx = zeta_set(cset, 2.0, 100)
    direct = math.fsum(n ** -2.0 for n in range(1, 101) if n % 4 == 1)
    assert zx.partial == pytest.approx(direct, rel=1e-12)
    br = zx.bracket()
    assert br.lo <= zx.partial + zx.tail_hi
    assert br.certified


def test_zeta_set_no_members_below_cutoff():
    zx = zeta_set(compile_set("finite(200)"), 2.0, 100)
    assert zx.partial == 0.0


def test_delta_ratio_bracket_shrinks_with_cutoff():
    cset = compile_set("kfree(2)")
    b1 = delta_ratio(cset, 1.5, 10**3)
    b2 = delta_ratio(cset, 1.5, 2 * 10**3)
    assert b1.lo <= b2.lo and b2.hi <= b1.hi
    assert (b2.hi - b2.lo) < (b1.hi - b1.lo)
    # squarefree restricted series is zeta(s)/zeta(2s), so the quotient
    # tends to 1/zeta(3) at s = 1.5
    target = 1.0 / 1.2020569031595943
    assert b2.lo <= target <= b2.hi


def test_dirichlet_truncation_validation():
    with pytest.raises(ValueError):
        zeta_set(compile_set("cong(1,4)"), 0.5, 100)
    with pytest.raises(ValueError):
        zeta_set(compile_set("cong(1,4)"), 2.0, 0)


# ---------------------------------------------------------------------------
# log-derivative identity harness


def test_dlog_zeta_passes_at_s2():
    rep = dlog_zeta_check(2.0, 10**5, 1e-3)
    assert rep.verdict == "PASS"
    assert rep.ratio_side == pytest.approx(0.5698883884679873, rel=1e-9)
    assert rep.series_side == pytest.approx(0.5699509987625495, rel=1e-9)
    assert rep.difference < rep.tol


def test_dlog_zeta_inconclusive_near_pole():
    rep = dlog_zeta_check(1.21, 10**5, 1e-3)
    assert rep.verdict == "INCONCLUSIVE"
    assert rep.tail_budget > rep.tol


def test_dlog_zeta_rejects_bad_domain():
    with pytest.raises(ValueError):
        dlog_zeta_check(1.0, 100, 1e-3)


# ---------------------------------------------------------------------------
# inclusion-exclusion Dirichlet values


def test_de_delta_exact_rationals():
    assert de_delta_exact([4], 2) == Fraction(15, 16)
    assert de_delta_exact([4, 6], 1) == Fraction(2, 3)
    assert de_delta_exact([2], 1) == Fraction(1, 2)
    # pairwise coprime moduli factor
    v = de_delta_exact([4, 9], 1)
    assert v == Fraction(3, 4) * Fraction(8, 9)


def test_de_delta_float_matches_direct_subset_sum():
    moduli = [4, 9, 25, 49]
    s = 1.375
    # direct signed subset sum over lcms
    total = 0.0
    for mask in range(1 << len(moduli)):
        l = 1
        bits = 0
        for i, m in enumerate(moduli):
            if mask >> i & 1:
                l = l * m // math.gcd(l, m)
                bits += 1
        total += (-1.0) ** bits * l ** (-s)
    assert de_delta_exact(moduli, s) == pytest.approx(total, rel=1e-12)


def test_de_delta_bracket_encloses_float_value():
    moduli = [4, 9, 25]
    for k in range(1, 9):
        s = Fraction(1) + Fraction(k, 16)
        lo, hi = de_delta_bracket(moduli, s, digits=12)
        assert lo <= hi
        assert float(hi - lo) < 1e-11
        fval = de_delta_exact(moduli, float(s))
        assert float(lo) - 1e-9 <= fval <= float(hi) + 1e-9


def test_de_delta_bracket_integer_s_is_sharp():
    lo, hi = de_delta_bracket([4, 6], Fraction(1), digits=15)
    assert lo <= Fraction(2, 3) <= hi
    assert float(hi - lo) < 1e-14


def test_de_delta_table_layout():
    text = de_delta_table([4, 6], [Fraction(1), Fraction(2)])
    lines = text.strip().splitlines()
    assert len(lines) >= 3
    assert "s" in lines[0]


def test_iroot_brute_oracle():
    import random

    rng = random.Random(5)
    for _ in range(400):
        k = rng.randint(1, 12)
        x = rng.randint(0, 10**12)
        r = _iroot(x, k)
        assert r**k <= x < (r + 1) ** k


def test_iroot_exact_powers():
    for base in (2, 3, 10, 97):
        for k in (2, 3, 5, 8):
            assert _iroot(base**k, k) == base
            assert _iroot(base**k - 1, k) == base - 1


# ---------------------------------------------------------------------------
# properties


@settings(max_examples=150, deadline=None)
@given(
    moduli=st.lists(st.integers(min_value=2, max_value=60), min_size=1, max_size=5),
    ds=st.integers(min_value=0, max_value=40),
)
def test_de_delta_monotone_in_s(moduli, ds):
    s1 = 1.0 + ds / 20.0
    s2 = s1 + 0.25
    assert de_delta_exact(moduli, s1) <= de_delta_exact(moduli, s2) + 1e-12


@settings(max_examples=60, deadline=None)
@given(
    moduli=st.lists(st.integers(min_value=2, max_value=30), min_size=1, max_size=4),
    k=st.integers(min_value=1, max_value=12),
)
def test_de_delta_bracket_contains_exact(moduli, k):
    s = Fraction(1) + Fraction(k, 16)
    lo, hi = de_delta_bracket(moduli, s, digits=10)
    fval = de_delta_exact(moduli, float(s))
    assert float(lo) - 1e-8 <= fval <= float(hi) + 1e-8
