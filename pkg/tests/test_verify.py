"""End-to-end checks for the theorem-verification harnesses."""

import json
import math
from fractions import Fraction

import pytest

from zhat.measure import ModulusChain
from zhat.setdsl import DslValueError, compile_set
from zhat.verify import (
    VerificationReport,
    asdmltp_verify,
    counterexample_cover,
    davenport_erdos,
    dirichlet_coverage,
    eulerian_check,
    mt_criterion,
    omega_bound_measure,
    poonen_stoll_tail,
    prime_power_family,
    union_dense_check,
)


# ---------------------------------------------------------------------------
# families and report plumbing


def test_prime_power_family():
    assert prime_power_family(2, 31) == [
        4, 9, 25, 49, 121, 169, 289, 361, 529, 841, 961,
    ]
    assert prime_power_family(1, 10) == [2, 3, 5, 7]
    with pytest.raises(ValueError):
        prime_power_family(0, 10)


def test_report_json_schema():
    rep = dirichlet_coverage(30, 1000)
    payload = json.loads(json.dumps(rep.to_json()))
    assert set(payload) >= {"theorem", "inputs", "quantities", "verdict", "narrative"}
    assert payload["verdict"] in ("PASS", "FAIL", "INCONCLUSIVE")


# ---------------------------------------------------------------------------
# divisibility-chain limit harness


def test_de_explicit_pair_reaches_exact_limit():
    rep = davenport_erdos([4, 6])
    assert rep.verdict == "PASS"
    assert rep.quantities["delta_at_1"] == pytest.approx(2.0 / 3.0, abs=1e-12)
    lo, hi = rep.quantities["limit_bracket"]
    assert lo == pytest.approx(2.0 / 3.0, abs=1e-12)
    assert hi == pytest.approx(2.0 / 3.0, abs=1e-12)


def test_de_prime_squares_certified_grid():
    moduli = prime_power_family(2, 31)
    rep = davenport_erdos(
        moduli, r_max=10**6, tail_exponent=2, certified_grid_points=50
    )
    assert rep.verdict == "PASS"
    prefix = rep.quantities["measure_prefix"]
    assert all(a >= b for a, b in zip(prefix, prefix[1:]))
    deltas = [rep.quantities["delta_values"][s] for s in sorted(rep.quantities["delta_values"])]
    assert all(a < b for a, b in zip(deltas, deltas[1:]))
    lo, hi = rep.quantities["limit_bracket"]
    assert lo <= 6.0 / math.pi**2 <= hi


def test_de_primes_have_divergent_tail():
    rep = davenport_erdos(prime_power_family(1, 20), r_max=10**6, tail_exponent=1)
    lo, hi = rep.quantities["limit_bracket"]
    assert lo == 0.0
    assert any("DIVERGENT-TAIL" in line for line in rep.narrative)


def test_de_rejects_empty_family():
    with pytest.raises(ValueError):
        davenport_erdos([])


# ---------------------------------------------------------------------------
# residue coverage of primes


def test_dirichlet_coverage_passes_with_room():
    rep = dirichlet_coverage(30, 1000)
    assert rep.verdict == "PASS"


def test_dirichlet_coverage_reports_first_witness():
    rep = dirichlet_coverage(100, 100)
    assert rep.verdict == "INCONCLUSIVE"
    assert rep.quantities["missing"][0] == (13, 12)
    assert any("raise prime_bound" in line for line in rep.narrative)


def test_dirichlet_coverage_recovers_with_larger_bound():
    rep = dirichlet_coverage(100, 10**5)
    assert rep.verdict == "PASS"


# ---------------------------------------------------------------------------
# prime-factor-count decay


def test_omega_closed_form_matches_direct_count():
    for k in (0, 1, 2):
        rep = omega_bound_measure(k, 13)
        assert rep.verdict == "PASS"
        final = rep.quantities["closed_form"][-1]
        assert final == Fraction(rep.quantities["direct_count"], 30030)


def test_omega_trace_heads_at_one_then_decreases():
    rep = omega_bound_measure(2, 13)
    trace = rep.quantities["trace"]
    assert trace[0] == 1 and trace[1] == 1
    tail = trace[1:]
    assert all(a > b for a, b in zip(tail, tail[1:]))


def test_omega_zero_is_units_only():
    rep = omega_bound_measure(0, 13)
    # measure of integers with no prime factor below the cutoff
    expected = Fraction(1)
    for p in (2, 3, 5, 7, 11, 13):
        expected *= Fraction(p - 1, p)
    assert rep.quantities["trace"][-1] == expected


# ---------------------------------------------------------------------------
# multiplicative image structure


def test_eulerian_square_image_is_product():
    rep = eulerian_check(compile_set("image(x^2)"), [12, 100, 9999])
    assert rep.verdict == "PASS"
    assert all(rep.quantities["is_product"].values())


def test_eulerian_primes_break_product_at_12():
    rep = eulerian_check(compile_set("primes"), [12], expect="not-product")
    assert rep.verdict == "PASS"
    assert rep.quantities["is_product"][12] is False


def test_eulerian_expect_mismatch_is_failure():
    rep = eulerian_check(compile_set("primes"), [12])
    assert rep.verdict == "FAIL"


def test_eulerian_coprime_pairs_factor():
    rep = eulerian_check(compile_set("coprime(2)"), [12, 90])
    assert rep.verdict == "PASS"


# ---------------------------------------------------------------------------
# pairwise-coprime composite families


def test_asdmltp_squares_triple():
    rep = asdmltp_verify([4, 9, 25], r_max=10**6, m_check=900)
    assert rep.verdict == "PASS"
    assert rep.quantities["target"] == Fraction(16, 25)
    assert rep.quantities["ie_value"] == Fraction(16, 25)
    assert rep.quantities["asymptotic_estimate"][-1] == pytest.approx(0.64, abs=1e-2)


def test_asdmltp_rejects_common_factor():
    with pytest.raises(DslValueError):
        asdmltp_verify([4, 6])


def test_asdmltp_rejects_prime_modulus():
    with pytest.raises(DslValueError):
        asdmltp_verify([3, 25])


# ---------------------------------------------------------------------------
# product-measure tails


def test_poonen_stoll_squarefree_product():
    rep = poonen_stoll_tail("kfree", k=2, prime_cutoffs=(10, 100, 1000), emp_r=10**6)
    assert rep.verdict == "PASS"
    br = rep.quantities["product_measure"]
    assert br.lo <= 6.0 / math.pi**2 <= br.hi
    assert rep.quantities["empirical_density"] == pytest.approx(
        6.0 / math.pi**2, abs=1e-2
    )


def test_poonen_stoll_units_tail_diverges():
    rep = poonen_stoll_tail("units", prime_cutoffs=(10, 100), emp_r=10**5)
    assert rep.verdict == "INCONCLUSIVE"


def test_poonen_stoll_trivial_spec():
    rep = poonen_stoll_tail("trivial", prime_cutoffs=(10,), emp_r=10**4)
    assert rep.verdict == "PASS"


# ---------------------------------------------------------------------------
# closure-gap traces


def test_mt_gap_vanishes_for_squarefree():
    rep = mt_criterion(
        compile_set("kfree(2)"),
        ModulusChain.primorial_power(2),
        cutoff=10**6,
        r_max=10**6,
        tol=0.02,
    )
    assert rep.quantities["levels"] == [4, 36, 900, 44100]
    gaps = rep.quantities["gap_trace"]
    assert all(a > b for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] == pytest.approx(768 / 1225 - 6.0 / math.pi**2, abs=2e-3)
    assert rep.quantities["vanishing"] is True


def test_mt_gap_exactly_zero_for_periodic():
    rep = mt_criterion(
        compile_set("cong(0,5)"),
        ModulusChain.explicit([5, 10, 20]),
        cutoff=20,
        r_max=10**4,
    )
    assert all(g == pytest.approx(0.0, abs=1e-3) for g in rep.quantities["gap_trace"])
    assert rep.quantities["vanishing"] is True


def test_mt_gap_stays_large_for_primes():
    rep = mt_criterion(
        compile_set("primes"),
        ModulusChain.primorial(),
        cutoff=2310,
        r_max=10**5,
    )
    assert rep.quantities["vanishing"] is False
    assert min(rep.quantities["gap_trace"]) > 0.1


# ---------------------------------------------------------------------------
# covering family without density


def test_counterexample_cover_four_adic():
    rep = counterexample_cover(4, 10)
    assert rep.verdict == "PASS"
    bound = rep.quantities["lower_bound"]
    assert bound == 1 - Fraction(1, 3) * (1 - Fraction(4) ** -10)
    assert float(bound) > 0.666
    assert rep.quantities["complement_measure"] >= bound


def test_counterexample_cover_rejects_small_base():
    with pytest.raises(ValueError):
        counterexample_cover(2, 5)


# ---------------------------------------------------------------------------
# union density and hitting sets


def test_union_dense_family_flag():
    rep = union_dense_check([], family_flag=True)
    assert rep.quantities["dense"] is True


def test_union_not_dense_with_hitting_pair():
    rep = union_dense_check([[2, 3], [3, 5], [2, 5]])
    assert rep.quantities["dense"] is False
    assert sorted(rep.quantities["hitting_set"]) == [2, 3]


def test_union_single_common_prime():
    rep = union_dense_check([[7], [7, 11], [7, 13]])
    assert rep.quantities["dense"] is False
    assert rep.quantities["hitting_set"] == [7]
