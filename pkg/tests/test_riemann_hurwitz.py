from fractions import Fraction
import threading
from itertools import combinations_with_replacement, product as tuples

import pytest
from pydantic import ValidationError

from catalog import abelian, alternating, cyclic, dihedral, sl2, symmetric
from exclusivity import published_witness
from permcore import PermGroup, commutator, parse_permutation, product
from riemann_hurwitz import (
    ActionRecord,
    GeneratingVector,
    GenusRangeError,
    PreconditionError,
    Signature,
    SignatureError,
    accola_maclachlan_action,
    acts_on,
    canonical_actions,
    enumerate_signatures,
    find_generating_vector,
    format_measure,
    free_action_record,
    parse_declared_signature,
    parse_signature,
    rh_genus,
    rh_measure,
    verify_record,
    verify_vector,
)


def test_measures():
    assert rh_measure(parse_signature("(0;2,3,7)")) == Fraction(1, 42)
    assert rh_measure(parse_signature("(0;2,3,8)")) == Fraction(1, 24)
    assert rh_measure(parse_signature("(2;-)")) == 2
    assert format_measure(rh_measure(parse_signature("(1;5,5)"))) == "8/5"
    assert format_measure(rh_measure(parse_signature("(0;2,2,2,2)"))) == "0"


def test_signature_is_sorted_and_printed():
    s = parse_signature("(0; 7, 2, 3)")
    assert s.periods == (2, 3, 7)
    assert str(s) == "(0;2,3,7)"
    assert str(parse_signature("(2;)")) == "(2;-)"


def test_declared_periods_keep_written_order():
    s, declared, notes = parse_declared_signature("(0;5,1,2,4)")
    assert s.periods == (2, 4, 5)
    assert declared == (5, 2, 4)
    assert len(notes) == 1
    assert "period-1" in notes[0]


@pytest.mark.parametrize("text", ["0;2,3,7", "(0;2,x)", "(-1;2)", "(0;0,2)", "(a;2)"])
def test_signature_errors(text):
    with pytest.raises(SignatureError):
        parse_signature(text)


def test_rh_genus():
    assert rh_genus(168, parse_signature("(0;2,3,7)")) == 3
    assert rh_genus(120, parse_signature("(0;2,4,5)")) == 4
    assert rh_genus(60, parse_signature("(0;2,3,7)")) is None
    # genus 1 is outside the range
    assert rh_genus(6, parse_signature("(0;2,3,6)")) is None


def test_genus_below_two_rejected():
    with pytest.raises(GenusRangeError):
        enumerate_signatures(1, 4)
    with pytest.raises(GenusRangeError):
        canonical_actions(0)


def test_enumerate_signatures():
    assert [str(s) for s in enumerate_signatures(2, 24)] == ["(0;2,3,12)", "(0;2,4,6)", "(0;3,3,4)"]
    assert [str(s) for s in enumerate_signatures(3, 168)] == ["(0;2,3,7)"]
    assert [str(s) for s in enumerate_signatures(2, 5)] == ["(0;5,5,5)"]
    assert enumerate_signatures(5, 240) == []
    assert enumerate_signatures(4, 240) == []


def test_enumerate_signatures_sorted_and_consistent():
    found = enumerate_signatures(3, 4)
    keys = [(s.orbit_genus, s.r, s.periods) for s in found]
    assert keys == sorted(keys)
    assert "(2;-)" not in [str(s) for s in found]
    assert "(1;2,2)" in [str(s) for s in found]
    for s in found:
        assert rh_genus(4, s) == 3


def test_sym5_vector_valid():
    entry, declared, vector = published_witness(4)
    signature, _, notes = parse_declared_signature(declared)
    report = verify_vector(entry.group, signature, vector, notes)
    assert report.verdict == "VALID"
    assert report.implied_genus == 4
    assert report.measured_orders == [5, 2, 4]
    assert str(vector.elliptic[2]) == "(1,5,4,3)"
    assert report.summary == "VALID; genus=4"


def test_sl2_7_vector_invalid_as_declared():
    entry, declared, vector = published_witness(5)
    signature, _, notes = parse_declared_signature(declared)
    report = verify_vector(entry.group, signature, vector, notes)
    assert report.verdict == "INVALID-AS-DECLARED"
    assert report.measured_orders == [7, 4, 3]
    assert report.measured_signature == "(0;3,4,7)"
    assert report.implied_genus == 47
    assert report.declared_genus == 5
    assert report.product_is_identity and report.generates


def test_tampered_vector_invalid():
    s5 = symmetric(5).group
    c1, c2 = parse_permutation("(1,2,3,4,5)", 5), parse_permutation("(1,2)", 5)
    c3 = parse_permutation("(1,2,3,4)", 5)
    vector = GeneratingVector(degree=5, elliptic=(c1, c2, c3), periods=(5, 2, 4))
    report = verify_vector(s5, parse_signature("(0;2,4,5)"), vector)
    assert not report.product_is_identity
    assert report.verdict == "INVALID"


def test_vector_not_generating_is_invalid():
    s4 = symmetric(4).group
    a = parse_permutation("(1,2)(3,4)", 4)
    vector = GeneratingVector(degree=4, elliptic=(a, a, a, a), periods=(2, 2, 2, 2))
    report = verify_vector(s4, parse_signature("(0;2,2,2,2)"), vector)
    assert report.product_is_identity
    assert not report.generates
    assert report.verdict == "INVALID"


def test_vector_shape_must_match_signature():
    s5 = symmetric(5).group
    c = parse_permutation("(1,2)", 5)
    vector = GeneratingVector(degree=5, elliptic=(c, c), periods=(2, 2))
    with pytest.raises(PreconditionError):
        verify_vector(s5, parse_signature("(0;2,4,5)"), vector)


def test_vector_from_cycle_strings():
    vector = GeneratingVector.model_validate(
        {"degree": 5, "elliptic": ["(1,2,3,4,5)", "(1,2)", "(5,4,3,1)"], "periods": [5, 2, 4]}
    )
    assert vector.long_relation().is_identity()
    assert vector.model_dump(mode="json")["elliptic"][2] == "(1,5,4,3)"


def test_find_vector_found_and_absent():
    a5 = alternating(5).group
    hit = find_generating_vector(a5, parse_signature("(0;2,5,5)"))
    assert hit.status == "found"
    report = verify_vector(a5, parse_signature("(0;2,5,5)"), hit.vector)
    assert report.verdict == "VALID"
    s4 = symmetric(4).group
    assert find_generating_vector(s4, parse_signature("(0;2,4,6)")).status == "absent"


def test_find_vector_precondition():
    with pytest.raises(PreconditionError):
        find_generating_vector(alternating(5).group, parse_signature("(0;2,3,7)"))


def test_find_vector_budget():
    g = symmetric(5).group
    result = find_generating_vector(g, parse_signature("(0;2,4,5)"), node_budget=1)
    assert result.status == "inconclusive"


def test_acts_on_absent_is_definitive():
    result = acts_on(symmetric(4).group, 2, "S4")
    assert result.status == "absent"
    assert [status for _, status in result.searched] == ["absent", "absent", "absent"]


def test_acts_on_same_result_for_any_worker_count():
    g = alternating(5).group
    one = acts_on(g, 4, "A5", workers=1)
    many = acts_on(g, 4, "A5", workers=4)
    assert one.status == many.status == "found"
    assert one.record == many.record
    assert verify_record(one.record).verdict == "VALID"


def test_acts_on_stops_after_first_found_signature():
    g = alternating(5).group
    one = acts_on(g, 4, "A5", workers=1)
    many = acts_on(g, 4, "A5", workers=4)
    assert many.searched == one.searched
    assert many.searched[-1][1] == "found"
    assert all(status != "stopped" for _, status in many.searched)


def test_vector_search_honours_stop_event():
    stop = threading.Event()
    stop.set()
    result = find_generating_vector(symmetric(5).group, parse_signature("(0;2,4,5)"), stop=stop)
    assert result.status == "stopped"
    assert result.vector is None


@pytest.mark.parametrize("sigma", [2, 3, 7, 12, 30])
def test_canonical_actions_verify(sigma):
    first, second = canonical_actions(sigma)
    assert (first.group_order, str(first.signature)) == (sigma - 1, "(2;-)")
    assert (second.group_order, str(second.signature)) == (sigma, f"(1;{sigma},{sigma})")
    for record in (first, second):
        assert record.genus == sigma
        assert verify_record(record).verdict == "VALID"


def test_canonical_actions_with_free_actions():
    records = canonical_actions(3, [("S3", symmetric(3).group), ("Ab(2,2,2)", abelian([2, 2, 2]).group)])
    # the elementary abelian group of order 8 is not 2-generated
    assert len(records) == 3
    assert records[2].group == "S3"


@pytest.mark.parametrize("sigma", [2, 5, 8])
def test_accola_maclachlan_action(sigma):
    record = accola_maclachlan_action(sigma)
    assert record.group_order == 8 * (sigma + 1)
    assert str(record.signature) == f"(0;2,4,{2 * (sigma + 1)})"
    assert record.genus == sigma
    assert verify_record(record).verdict == "VALID"


def test_free_action_genus():
    g = alternating(4).group
    x, y = parse_permutation("(1,2,3)", 4), parse_permutation("(1,2)(3,4)", 4)
    record = free_action_record("A4", g, (x, y))
    assert record.genus == 13
    assert verify_record(record).verdict == "VALID"


def test_action_record_rejects_wrong_genus():
    record = canonical_actions(4)[0]
    data = record.model_dump(mode="json")
    data["genus"] = 5
    with pytest.raises(ValidationError):
        ActionRecord.model_validate(data)




def test_enumerate_signatures_small_orders():
    assert [str(s) for s in enumerate_signatures(2, 2)] == ["(0;2,2,2,2,2,2)", "(1;2,2)"]
    assert [str(s) for s in enumerate_signatures(2, 1)] == ["(2;-)"]


def _naive_signatures(sigma, order):
    target = Fraction(2 * sigma - 2, order)
    divisors = [d for d in range(2, order + 1) if order % d == 0]
    found = set()
    for rho in range(0, sigma + 1):
        room = target + 2 - 2 * rho
        if room < 0:
            continue
        for r in range(0, int(2 * room) + 1):
            for periods in combinations_with_replacement(divisors, r):
                if 2 * rho - 2 + sum(1 - Fraction(1, m) for m in periods) == target:
                    found.add(str(Signature(orbit_genus=rho, periods=periods)))
    return found


@pytest.mark.parametrize("sigma", [2, 3, 4])
def test_enumerate_signatures_matches_naive_loops(sigma):
    for order in range(1, 49):
        assert {str(s) for s in enumerate_signatures(sigma, order)} == _naive_signatures(sigma, order), order


def _oracle(G: PermGroup, s: Signature) -> bool:
    """Exhaustive check over all tuples; the last entry is forced by the long relation."""
    rho = s.orbit_genus
    slots = [G.elements] * (2 * rho) + [G.elements_of_order(m) for m in s.periods[:-1]]
    for values in tuples(*slots):
        factors = [commutator(values[2 * j], values[2 * j + 1]) for j in range(rho)]
        head = product(factors + list(values[2 * rho:]), G.degree)
        if s.periods:
            last = head.inverse()
            if last.order() != s.periods[-1]:
                continue
            values = values + (last,)
        elif not head.is_identity():
            continue
        if G.generates(list(values)):
            return True
    return False


def _small_signatures(order):
    """Every signature with 2*rho + r <= 4 that gives some genus >= 2 for this order."""
    divisors = [d for d in range(2, order + 1) if order % d == 0]
    found = []
    for rho in range(0, 3):
        for r in range(0, 4 - 2 * rho + 1):
            for periods in combinations_with_replacement(divisors, r):
                s = Signature(orbit_genus=rho, periods=periods)
                if rh_genus(order, s) is not None:
                    found.append(s)
    return found


def _builtins_up_to_16():
    entries = [cyclic(n) for n in range(2, 17)]
    entries += [dihedral(n) for n in range(2, 9)]
    entries += [abelian(f) for f in ([2, 4], [2, 2, 2], [3, 3], [2, 6], [2, 8], [4, 4], [2, 2, 4], [2, 2, 2, 2])]
    entries += [symmetric(3), alternating(4)]
    return [
        pytest.param(e, id=e.id, marks=[pytest.mark.slow] if e.order > 8 else [])
        for e in entries
    ]


@pytest.mark.parametrize("entry", _builtins_up_to_16())
def test_search_agrees_with_exhaustive_oracle(entry):
    signatures = _small_signatures(entry.order)
    assert signatures
    for s in signatures:
        searched = find_generating_vector(entry.group, s).status == "found"
        assert searched == _oracle(entry.group, s), str(s)


@pytest.mark.parametrize(
    "entry",
    [cyclic(6), cyclic(12), dihedral(4), dihedral(6), abelian([2, 2]), alternating(4), symmetric(4), sl2(3)],
    ids=lambda e: e.id,
)
def test_found_vectors_verify(entry):
    for sigma in (2, 3, 4):
        for s in enumerate_signatures(sigma, entry.order):
            result = find_generating_vector(entry.group, s)
            if result.status != "found":
                continue
            report = verify_vector(entry.group, s, result.vector)
            assert report.verdict == "VALID", str(s)
            assert report.implied_genus == sigma
