import pytest
from hypothesis import given, strategies as st

from qsms.zmod import (
    FieldElement,
    add,
    inv,
    is_prime,
    lagrange_coefficient,
    mul,
    smallest_valid_prime,
)

SMALL_PRIMES = [2, 3, 5, 7, 11, 13]


def brute_force_inverse(a: int, d: int) -> int:
    """Independent oracle: exhaustive search for the inverse."""
    for b in range(1, d):
        if (a * b) % d == 1:
            return b
    raise AssertionError(f"{a} has no inverse mod {d}")


def test_add_paper_pattern():
    assert add(FieldElement(9, 11), FieldElement(7, 11)).value == 5


def test_add_identity():
    assert add(FieldElement(0, 11), FieldElement(6, 11)).value == 6


def test_add_derived():
    assert add(FieldElement(10, 11), FieldElement(10, 11)).value == 9


def test_mul_paper_value():
    assert mul(FieldElement(9, 11), FieldElement(3, 11)).value == 5


def test_mul_identity():
    assert mul(FieldElement(1, 11), FieldElement(8, 11)).value == 8


def test_mul_derived():
    assert mul(FieldElement(7, 11), FieldElement(8, 11)).value == 1


def test_modulus_mismatch_rejected():
    with pytest.raises(ValueError, match="modulus mismatch"):
        add(FieldElement(1, 11), FieldElement(1, 13))
    with pytest.raises(ValueError, match="modulus mismatch"):
        mul(FieldElement(1, 11), FieldElement(1, 13))


def test_non_prime_modulus_rejected():
    with pytest.raises(ValueError, match="not prime"):
        FieldElement(1, 10)


def test_inv_examples():
    assert inv(FieldElement(2, 11)).value == 6
    assert inv(FieldElement(1, 11)).value == 1
    assert inv(FieldElement(10, 11)).value == 10


def test_inv_zero_rejected():
    with pytest.raises(ZeroDivisionError, match="no inverse of zero"):
        inv(FieldElement(0, 11))


@pytest.mark.parametrize("d", SMALL_PRIMES)
def test_inv_matches_brute_force(d):
    for a in range(1, d):
        assert inv(FieldElement(a, d)).value == brute_force_inverse(a, d)


def test_lagrange_coefficient_forced_by_worked_example():
    # m_1 = 9 * coeff = 5 and m_2 = 6 * coeff = 4 pin these values.
    assert lagrange_coefficient(1, [1, 2, 3], 11).value == 3
    assert lagrange_coefficient(2, [1, 2, 3], 11).value == 8


def test_lagrange_coefficient_single_point():
    assert lagrange_coefficient(1, [4], 11).value == 1


def test_lagrange_coefficient_rejects_bad_points():
    with pytest.raises(ValueError, match="duplicate"):
        lagrange_coefficient(1, [1, 1, 2], 11)
    with pytest.raises(ValueError, match="nonzero"):
        lagrange_coefficient(1, [1, 11], 11)
    with pytest.raises(ValueError):
        lagrange_coefficient(0, [1, 2], 11)
    with pytest.raises(ValueError, match="at least one"):
        lagrange_coefficient(1, [], 11)


@pytest.mark.parametrize("d", [5, 7, 11, 13])
@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_lagrange_coefficients_sum_to_one(d, k):
    # Interpolating the constant polynomial 1 at x=0.
    points = list(range(1, k + 1))
    total = sum(lagrange_coefficient(u, points, d).value for u in range(1, k + 1))
    assert total % d == 1


def test_smallest_valid_prime_examples():
    assert smallest_valid_prime(7) == 7
    assert smallest_valid_prime(1) == 2
    assert smallest_valid_prime(8) == 11


@pytest.mark.parametrize("n", range(1, 200))
def test_smallest_valid_prime_in_range(n):
    d = smallest_valid_prime(n)
    assert is_prime(d)
    assert n <= d <= 2 * n


@given(
    d=st.sampled_from(SMALL_PRIMES),
    a=st.integers(0, 12),
    b=st.integers(0, 12),
    c=st.integers(0, 12),
)
def test_field_axioms(d, a, b, c):
    fa, fb, fc = (FieldElement(v, d) for v in (a, b, c))
    assert (fa + fb).value == (fb + fa).value
    assert (fa * fb).value == (fb * fa).value
    assert ((fa + fb) + fc).value == (fa + (fb + fc)).value
    assert ((fa * fb) * fc).value == (fa * (fb * fc)).value
    if fa.value != 0:
        assert (fa * fa.inv()).value == 1
