import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zhat.setdsl import (
    EXACT,
    TRUNCATED,
    BudgetExceeded,
    Complement,
    Cong,
    DimensionMismatch,
    DslSyntaxError,
    DslValueError,
    KFree,
    ModeError,
    Multiples,
    Polynomial,
    Union,
    compile_set,
    crt_split,
    parse,
    to_text,
)


# ---------------------------------------------------------------- oracles


def brute_members(pred, n):
    return [x for x in range(1, n + 1) if pred(x)]


def is_squarefree(x):
    return all(x % (p * p) for p in range(2, int(x**0.5) + 1))


def is_prime(x):
    return x >= 2 and all(x % d for d in range(2, int(x**0.5) + 1))


def brute_residues(pred, m, n):
    return frozenset(x % m for x in range(1, n + 1) if pred(x))


# ---------------------------------------------------------------- parsing


def test_parse_round_trip_atoms():
    for text in (
        "cong(2,6)", "kfree(2)", "primes", "coprime(2)", "image(x^2 - 1)",
        "multiples(4,6)", "leadingdigit(1,10)", "seq(factorials)",
        "finite(3,5)",
    ):
        assert to_text(parse(text)) == text


def test_parse_combinators_and_precedence():
    e = parse("kfree(2) & !multiples(4,6) | cong(1,3)")
    assert to_text(parse(to_text(e))) == to_text(e)
    # left associative binary chain
    f = parse("primes \\ cong(1,4) & kfree(3)")
    assert to_text(f) == to_text(parse(to_text(f)))


def test_parse_errors_carry_position():
    with pytest.raises(DslSyntaxError) as ei:
        parse("cong(2,")
    assert ei.value.pos >= 5
    for bad in ("", "kfree(1)", "cong(1,0)", "leadingdigit(0,10)", "unknownatom", "cong(1,3))"):
        with pytest.raises((DslSyntaxError, DslValueError)):
            parse(bad)


def test_dimension_unification():
    with pytest.raises(DimensionMismatch):
        parse("coprime(2) & kfree(2)")
    e = parse("coprime(2) & multiples(3)")  # multiples is dimension-flexible
    assert compile_set(e).dim == 2


def test_polynomial_canonical_form():
    p = Polynomial.from_dict({(2, 0, 0): 1, (0, 0, 0): -1})
    assert str(p) == "x^2 - 1"
    assert p.evaluate((6,)) == 35
    assert p.evaluate((6,), mod=12) == 35 % 12


# ---------------------------------------------------------------- membership


def test_membership_matches_oracles():
    checks = [
        ("kfree(2)", is_squarefree),
        ("primes", is_prime),
        ("cong(2,6)", lambda x: x % 6 == 2),
        ("multiples(4,6)", lambda x: x % 4 == 0 or x % 6 == 0),
        ("!multiples(4,6)", lambda x: x % 4 and x % 6),
        ("kfree(2) & cong(1,4)", lambda x: is_squarefree(x) and x % 4 == 1),
        ("primes \\ cong(1,4)", lambda x: is_prime(x) and x % 4 != 1),
        ("leadingdigit(1,10)", lambda x: str(x)[0] == "1"),
    ]
    for text, pred in checks:
        cs = compile_set(text)
        got = cs.members_in_box(200)
        assert got == brute_members(pred, 200), text
        mask = cs.mask_upto(200)
        assert not mask[0]
        assert list(np.nonzero(mask)[0]) == got, text


def test_polynomial_image_membership():
    cs = compile_set("image(x^2 - 1)")
    assert 35 in cs and 34 not in cs
    assert 0 in compile_set("image(x^2)", positive_only=False)
    got = set(cs.members_in_box(100))
    oracle = {k * k - 1 for k in range(2, 12) if 1 <= k * k - 1 <= 100}
    assert got == oracle


def test_sequence_atom_members():
    assert compile_set("seq(factorial_shift)").members_in_box(30) == [2, 4, 9, 28]
    facts = compile_set("seq(factorials)").members_in_box(1000)
    assert facts == [1, 2, 6, 24, 120, 720]
    with pytest.raises(DslValueError):
        compile_set("seq(no_such_seq)")


def test_symmetric_boxes():
    cs = compile_set("cong(2,6)", positive_only=False)
    got = cs.members_in_box(20)
    oracle = [x for x in range(-20, 21) if x % 6 == 2]
    assert got == oracle


def test_dim2_box_example():
    cs = compile_set("coprime(2)", positive_only=True)
    assert cs.members_in_box(2) == [(1, 1), (1, 2), (2, 1)]
    # brute force positive box at n=6, then the symmetric default
    got = set(cs.members_in_box(6))
    oracle = {(a, b) for a in range(1, 7) for b in range(1, 7) if math.gcd(a, b) == 1}
    assert got == oracle
    sym = set(compile_set("coprime(2)").members_in_box(3))
    oracle_sym = {(a, b) for a in range(-3, 4) for b in range(-3, 4) if math.gcd(a, b) == 1}
    assert sym == oracle_sym


# ---------------------------------------------------------------- images


def test_residue_image_pinned_examples():
    img = compile_set("cong(2,6)").residue_image(4)
    assert img.sorted_residues() == [0, 2] and img.mode == EXACT

    img = compile_set("kfree(2)").residue_image(44100)
    assert img.count == 27648
    assert img.level_measure() == Fraction(768, 1225)

    img = compile_set("primes").residue_image(12)
    assert img.sorted_residues() == [1, 2, 3, 5, 7, 11]
    assert "assumes-dirichlet" in img.assumptions


def test_residue_image_matches_enumeration():
    for text, pred in [
        ("kfree(2)", is_squarefree),
        ("kfree(3)", lambda x: all(x % (p**3) for p in range(2, 10))),
        ("multiples(4,6)", lambda x: x % 4 == 0 or x % 6 == 0),
        ("cong(2,6)", lambda x: x % 6 == 2),
        ("finite(3,5)", lambda x: x in (3, 5)),
    ]:
        cs = compile_set(text)
        for m in (8, 12, 30):
            img = cs.residue_image(m)
            assert img.residues == brute_residues(pred, m, 40000), (text, m)


def test_residue_count_matches_image():
    for text in ("kfree(2)", "multiples(4,6)", "cong(2,6)", "primes", "finite(3,5)"):
        cs = compile_set(text)
        for m in (8, 12, 90):
            assert cs.residue_count(m) == cs.residue_image(m).count, (text, m)


def test_truncated_image_modes():
    cs = compile_set("kfree(2) & cong(1,4)")
    img = cs.residue_image(12, truncation=10**5)
    assert img.mode == TRUNCATED and img.truncation == 10**5
    oracle = brute_residues(lambda x: is_squarefree(x) and x % 4 == 1, 12, 10**5)
    assert img.residues == oracle
    with pytest.raises(DslValueError):
        cs.residue_image(100, truncation=50)  # N below the level


def test_budget_guard():
    cs = compile_set("image(x^2)")
    with pytest.raises(BudgetExceeded):
        compile_set("image(x*y*z)").residue_image(1000)  # 1e9 tuples
    assert cs.residue_image(1000).mode == EXACT


def test_clopen_engine_exact_and_declines_gracefully():
    cs = compile_set("!multiples(4,6)")
    img = cs.clopen_image_exact(12)
    oracle = frozenset(r for r in range(12) if r % 4 and r % 6)
    assert img.residues == oracle and img.mode == EXACT
    # non-clopen structure: no exact shortcut exists
    assert compile_set("kfree(2)").clopen_image_exact(12) is None


def test_crt_split_examples():
    sq = crt_split(compile_set("image(x^2)").residue_image(12))
    assert sq.is_product
    assert {q: p.sorted_residues() for q, p in sq.parts.items()} == {4: [0, 1], 3: [0, 1]}
    pr = crt_split(compile_set("primes").residue_image(12))
    assert not pr.is_product  # 6 classes, components multiply to 9
    with pytest.raises(ModeError):
        crt_split(compile_set("kfree(2) & cong(1,4)").residue_image(12, truncation=10**4))


def test_views_for_fast_paths():
    assert compile_set("leadingdigit(1,10)").interval_view(25) == [(1, 1), (10, 19)]
    assert compile_set("!multiples(4,6)").ie_view() == ("complement", (4, 6))
    assert compile_set("multiples(4,6)").ie_view() == ("multiples", (4, 6))
    assert compile_set("kfree(2)").ie_view() is None


# ---------------------------------------------------------------- properties


_ATOMS = st.sampled_from(
    ["cong(1,3)", "cong(2,6)", "kfree(2)", "multiples(4,6)", "multiples(3)",
     "finite(3,5)", "primes", "leadingdigit(1,10)"]
)


@st.composite
def _expr_text(draw, depth=2):
    if depth == 0 or draw(st.booleans()):
        return draw(_ATOMS)
    op = draw(st.sampled_from(["|", "&", "\\", "!"]))
    if op == "!":
        inner = draw(_expr_text(depth=depth - 1))
        return f"!({inner})"
    a = draw(_expr_text(depth=depth - 1))
    b = draw(_expr_text(depth=depth - 1))
    return f"({a}) {op} ({b})"


@settings(max_examples=80, deadline=None)
@given(_expr_text())
def test_print_parse_round_trip(text):
    e = parse(text)
    assert parse(to_text(e)) == e


@settings(max_examples=40, deadline=None)
@given(_expr_text(), st.integers(min_value=5, max_value=400))
def test_mask_agrees_with_contains(text, n):
    cs = compile_set(text)
    mask = cs.mask_upto(n)
    for x in range(1, n + 1):
        assert bool(mask[x]) == (x in cs), (text, x)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.sampled_from(["kfree(2)", "cong(1,3)"]),
       st.integers(min_value=2, max_value=24))
def test_residue_count_scaling_law(a, text, m):
    # scaling the set by a turns classes mod m into classes mod a*m bijectively
    cs = compile_set(text)
    base = cs.residue_image(m, truncation=10**5)
    n = 10**5
    mask = cs.mask_upto(n)
    scaled = frozenset((a * x) % (a * m) for x in np.nonzero(mask)[0])
    assert len(scaled) == base.count
    assert scaled == frozenset((a * r) % (a * m) for r in base.residues)


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=2, max_value=60), st.integers(min_value=2, max_value=60))
def test_union_of_exact_atoms_stays_exact(r, m):
    e = Union(Cong(r % m, m), KFree(2))
    img = compile_set(e).residue_image(12)
    assert img.mode == EXACT
    oracle = brute_residues(lambda x: x % m == r % m or is_squarefree(x), 12, 60000)
    assert img.residues == oracle
