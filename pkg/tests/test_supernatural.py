import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zhat.supernatural import (
    DIVERGING,
    STABILIZED,
    ExtNat,
    Omega,
    SupernaturalNumber,
    divides,
    gcd_lcm,
    limit_profile,
    mul,
    omega,
    parse_supernatural,
    rho,
    to_text,
)


def test_extnat_arithmetic_and_order():
    inf = ExtNat.inf()
    assert inf + 3 == inf
    assert ExtNat(2) + ExtNat(5) == ExtNat(7)
    assert ExtNat(2) < inf and not inf < inf
    assert inf <= inf
    assert ExtNat(0).is_zero and not inf.is_zero
    with pytest.raises(ValueError):
        inf.to_int()


def test_factorization_map_examples():
    assert to_text(rho(-12)) == "2^2*3"
    assert to_text(rho(1)) == "1"
    assert to_text(rho(360)) == "2^3*3^2*5"
    with pytest.raises(ValueError):
        rho(0)


def test_canonical_text_round_trip_examples():
    for text in ("1", "2", "2^inf", "2^inf*3^2*5", "7^3*11"):
        assert to_text(parse_supernatural(text)) == text
    # non-canonical spellings normalize
    assert to_text(parse_supernatural("3^2*2^inf*5^1")) == "2^inf*3^2*5"


def test_parse_rejects_garbage():
    for bad in ("", "4^2", "2^-1", "2**3", "2^inf*2"):
        with pytest.raises(ValueError):
            parse_supernatural(bad)


def test_mul_example():
    a = parse_supernatural("2^inf*3")
    b = parse_supernatural("3^2*5")
    assert to_text(mul(a, b)) == "2^inf*3^3*5"


def test_divisibility_and_lattice():
    a = parse_supernatural("2^2*3")
    b = parse_supernatural("2*3^2*5")
    g, l = gcd_lcm(a, b)
    assert to_text(g) == "2*3"
    assert to_text(l) == "2^2*3^2*5"
    assert divides(g, a) and divides(g, b)
    assert divides(a, l) and divides(b, l)
    assert not divides(a, b)
    full = parse_supernatural("2^inf")
    assert divides(parse_supernatural("2^5"), full)


def test_omega_counts():
    s = parse_supernatural("2^inf*3^2*5")
    assert omega(s) == ExtNat(3)
    assert Omega(s) == ExtNat.inf()
    assert Omega(parse_supernatural("2^3*3")) == ExtNat(4)


@given(st.integers(min_value=2, max_value=10**6), st.integers(min_value=2, max_value=10**6))
def test_factorization_is_multiplicative(a, b):
    assert rho(a * b) == mul(rho(a), rho(b))


@given(st.integers(min_value=2, max_value=10**9))
def test_round_trip_integer_factorizations(n):
    s = rho(n)
    assert parse_supernatural(to_text(s)) == s
    # recover n from a finite factorization
    back = math.prod(p ** e.to_int() for p, e in s.exponents.items())
    assert back == n


@settings(max_examples=60)
@given(
    st.dictionaries(st.sampled_from([2, 3, 5, 7, 11]),
                    st.one_of(st.integers(min_value=1, max_value=9), st.none()),
                    max_size=4)
)
def test_gcd_lcm_lattice_laws(spec):
    a = SupernaturalNumber({p: (ExtNat.inf() if e is None else e) for p, e in spec.items()})
    b = parse_supernatural("2^inf*3^2")
    g, l = gcd_lcm(a, b)
    assert divides(g, a) and divides(g, b) and divides(a, l) and divides(b, l)
    g2, l2 = gcd_lcm(b, a)
    assert g == g2 and l == l2
    assert mul(a, b) == mul(g, l) or any(e is None for e in spec.values()) or 2 in spec or 3 in spec
    # the product identity holds whenever no exponent saturates at inf
    if not any(e is None for e in spec.values()):
        finite_b = parse_supernatural("3^2*7")
        g3, l3 = gcd_lcm(a, finite_b)
        assert mul(g3, l3) == mul(a, finite_b)


def test_limit_profile_factorial_divergence():
    seq = [math.factorial(k) for k in range(1, 31)]
    prof = limit_profile(seq, 7, 5)
    assert set(prof.valuations) == {2, 3, 5, 7}
    for p in (2, 3, 5, 7):
        assert prof.status[p] == DIVERGING
    # Legendre oracle at the last term
    for p in (2, 3, 5, 7):
        n, total = 30, 0
        q = p
        while q <= n:
            total += n // q
            q *= p
        assert prof.valuations[p][-1] == total


def test_limit_profile_stabilization():
    seq = [6 * 2**k for k in range(12)]
    prof = limit_profile(seq, 5, 4)
    assert prof.status[3] == STABILIZED
    assert prof.status[5] == STABILIZED
    assert prof.status[2] == DIVERGING
    assert prof.last_values()[3] == 1


def test_limit_profile_validation():
    with pytest.raises(ValueError):
        limit_profile([], 5, 3)
    with pytest.raises(ValueError):
        limit_profile([1, 0, 2], 5, 3)
