from itertools import product

import pytest

from polymac.field import PrimeField
from polymac.mac import (
    MacParams,
    Message,
    Tag,
    VerifyResult,
    hash_core,
    iter_messages,
    polynomial_hash,
    sign,
    verify,
)


def monomial_hash_oracle(p: int, msg: tuple[int, ...], k1: int, lead_exp: int) -> int:
    # term-by-term evaluation, independent of the Horner path:
    # k1**lead_exp + a_1*k1**v + a_2*k1**(v-1) + ... + a_v*k1
    v = len(msg)
    total = pow(k1, lead_exp, p)
    for i, a in enumerate(msg, start=1):
        total += a * pow(k1, v - i + 1, p)
    return total % p


def params_for(p: int, l: int, fixed_degree: bool = False) -> MacParams:
    return MacParams(PrimeField(p), l, fixed_degree)


class TestPolynomialHash:
    def test_worked_example(self):
        # 2**3 + 1*2**2 + 4*2 = 20 = 0 mod 5
        params = params_for(5, 2)
        k1 = params.field.element(2)
        assert monomial_hash_oracle(5, (1, 4), 2, 3) == 0
        assert polynomial_hash(params, params.message([1, 4]), k1).value == 0

    def test_zero_key_annihilates(self):
        params = params_for(5, 3)
        zero = params.field.zero
        for m in iter_messages(params):
            assert polynomial_hash(params, m, zero).value == 0

    def test_all_zero_message_leaves_leading_term(self):
        params = params_for(7, 3)
        for x in range(7):
            k1 = params.field.element(x)
            for length in (1, 2, 3):
                m = params.message([0] * length)
                assert polynomial_hash(params, m, k1).value == pow(x, length + 1, 7)

    @pytest.mark.parametrize("p", (2, 3, 5, 7))
    def test_horner_matches_monomial_oracle(self, p):
        params = params_for(p, 3)
        for length in (1, 2, 3):
            for msg in product(range(p), repeat=length):
                for k1 in range(p):
                    expected = monomial_hash_oracle(p, msg, k1, length + 1)
                    assert hash_core(p, msg, k1, length + 1) == expected

    def test_rejects_overlong_message(self):
        params = params_for(5, 2)
        long_message = Message(tuple(params.field.element(v) for v in (1, 2, 3)))
        with pytest.raises(ValueError):
            polynomial_hash(params, long_message, params.field.one)

    def test_rejects_foreign_field(self):
        params = params_for(5, 2)
        other = PrimeField(7)
        with pytest.raises(ValueError):
            polynomial_hash(params, params.message([1]), other.element(1))
        foreign_message = Message((other.element(1),))
        with pytest.raises(ValueError):
            polynomial_hash(params, foreign_message, params.field.one)


class TestMessage:
    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            Message(())

    def test_rejects_mixed_moduli(self):
        with pytest.raises(ValueError):
            Message((PrimeField(5).element(1), PrimeField(7).element(1)))

    def test_iter_messages_counts(self):
        params = params_for(3, 2)
        assert sum(1 for _ in iter_messages(params)) == 3 + 9
        assert sum(1 for _ in iter_messages(params, 1)) == 3

    def test_values_round_trip(self):
        params = params_for(5, 2)
        assert params.message([3, 9]).values() == (3, 4)


class TestSign:
    def test_worked_example(self):
        params = params_for(5, 3)
        tag = sign(params, params.key(2, 3), params.message([1, 4]))
        assert tag.t.value == (monomial_hash_oracle(5, (1, 4), 2, 3) + 3) % 5 == 3

    def test_zero_k1_gives_mask_only(self):
        params = params_for(5, 2)
        for k2 in range(5):
            for m in iter_messages(params):
                assert sign(params, params.key(0, k2), m).t.value == k2

    def test_deterministic(self):
        params = params_for(7, 2)
        key = params.key(3, 5)
        m = params.message([6, 1])
        assert sign(params, key, m) == sign(params, key, m)


class TestVerify:
    def test_round_trip_exhaustive(self):
        params = params_for(5, 2)
        for k1, k2 in product(range(5), repeat=2):
            key = params.key(k1, k2)
            for m in iter_messages(params):
                assert verify(params, key, m, sign(params, key, m)) is VerifyResult.ACCEPT

    def test_perturbed_tag_rejected(self):
        params = params_for(5, 2)
        key = params.key(2, 3)
        m = params.message([1, 4])
        tag = sign(params, key, m)
        wrong = Tag(tag.t + params.field.one)
        assert verify(params, key, m, wrong) is VerifyResult.REJECT

    def test_exactly_p_keys_accept_any_pair(self):
        # one accepting k2 per k1 value
        params = params_for(5, 2)
        for m in (params.message([4]), params.message([1, 2])):
            for t in range(5):
                tag = params.tag(t)
                accepting = [
                    (k1, k2)
                    for k1, k2 in product(range(5), repeat=2)
                    if verify(params, params.key(k1, k2), m, tag) is VerifyResult.ACCEPT
                ]
                assert len(accepting) == 5
                assert len({k1 for k1, _ in accepting}) == 5


class TestLengthSensitivity:
    def test_zero_extension_changes_tag_for_some_key(self):
        # appending a zero element shifts the leading exponent, so some key
        # must distinguish the two messages
        params = params_for(5, 2)
        for head in range(5):
            short = params.message([head])
            long = params.message([head, 0])
            assert any(
                sign(params, params.key(k1, k2), short)
                != sign(params, params.key(k1, k2), long)
                for k1, k2 in product(range(5), repeat=2)
            )


class TestFixedDegreeVariant:
    def test_agrees_at_full_length(self):
        flexible = params_for(5, 2)
        fixed = params_for(5, 2, fixed_degree=True)
        key = flexible.key(2, 3)
        for msg in product(range(5), repeat=2):
            assert (
                sign(flexible, key, flexible.message(msg)).t.value
                == sign(fixed, key, fixed.message(msg)).t.value
            )

    def test_differs_on_short_messages(self):
        flexible = params_for(5, 2)
        fixed = params_for(5, 2, fixed_degree=True)
        key = flexible.key(2, 0)
        # lead term 2**2 = 4 versus 2**3 = 3 mod 5
        assert sign(flexible, key, flexible.message([0])).t.value == 4
        assert sign(fixed, key, fixed.message([0])).t.value == 3

    def test_lead_exponent(self):
        assert params_for(5, 3).lead_exponent(2) == 3
        assert params_for(5, 3, fixed_degree=True).lead_exponent(2) == 4


def test_max_len_validation():
    with pytest.raises(ValueError):
        MacParams(PrimeField(5), 0)
