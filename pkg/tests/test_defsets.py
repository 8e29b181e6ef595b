"""Defining-set construction: sizes, invariants, determinism."""

import pytest

from ghwlab.defsets import (
    class1_build,
    class2_build,
    class3_build,
    class3_membership_equivalence,
    class3_variant_build,
    custom_univariate_set,
)
from ghwlab.errors import ParameterError
from ghwlab.field import enumerate_subfield, make_field, trace_to_prime


@pytest.mark.parametrize(
    "q,m,k,h",
    [(2, 4, 2, 1), (3, 3, 1, 2), (3, 4, 2, 2), (2, 6, 3, 0), (2, 6, 2, 1), (5, 2, 1, 3)],
)
def test_class1_size_formula(q, m, k, h):
    dset = class1_build(q, m, k, h)
    assert len(dset) == q**m - (h + 1) * q**k
    # no member lies in any removed coset
    ctx = dset.contexts[0]
    sub = set(enumerate_subfield(ctx, k))
    for x in dset.elements:
        assert x not in sub
        for t in dset.params["thetas"]:
            assert (x - t) not in sub


def test_class1_rejects_bad_parameters():
    with pytest.raises(ParameterError):
        class1_build(2, 4, 3, 0)  # k does not divide m
    with pytest.raises(ParameterError):
        class1_build(2, 4, 4, 0)  # k = m
    with pytest.raises(ParameterError):
        class1_build(2, 4, 2, 2)  # h > q - 1
    with pytest.raises(ParameterError):
        class1_build(2, 2, 1, 1)  # cosets cover the whole field
    with pytest.raises(ParameterError):
        class1_build(4, 4, 2, 0)  # q not prime


def test_class1_explicit_thetas_are_validated():
    dset = class1_build(2, 4, 2, 1, thetas=["0010"])
    assert len(dset) == 8
    with pytest.raises(ParameterError):
        class1_build(2, 4, 2, 1, thetas=["1000"])  # inside the subfield
    with pytest.raises(ParameterError):
        class1_build(2, 4, 2, 1, thetas=["0010", "0001"])  # wrong count


def test_class1_deterministic_reconstruction():
    a = class1_build(3, 4, 2, 2)
    b = class1_build(3, 4, 2, 2)
    assert a.element_strings() == b.element_strings()
    assert [t.coeffs for t in a.params["thetas"]] == [
        t.coeffs for t in b.params["thetas"]
    ]


@pytest.mark.parametrize(
    "q,m,s,k,l", [(2, 3, 1, 2, 1), (3, 2, 1, 2, 1), (2, 4, 2, 2, 1), (2, 4, 1, 4, 2)]
)
def test_class2_size_formula(q, m, s, k, l):
    dset = class2_build(q, m, s, k, l)
    assert len(dset) == (q**m - q**s) * (q**k - q**l)


def test_class2_exceptional_flag():
    exc = class2_build(2, 2, 1, 2, 1)
    assert exc.exceptional and not exc.formula_available
    reg = class2_build(2, 3, 1, 2, 1)
    assert not reg.exceptional and reg.formula_available


def test_class2_rejects_bad_parameters():
    with pytest.raises(ParameterError):
        class2_build(2, 3, 2, 2, 1)  # s does not divide m
    with pytest.raises(ParameterError):
        class2_build(2, 3, 1, 4, 1)  # k - l > m - s
    with pytest.raises(ParameterError):
        class2_build(2, 2, 2, 2, 1)  # s = m


@pytest.mark.parametrize("m", [2, 3, 4])
def test_class3_size_is_quarter_plane(m):
    dset = class3_build(m)
    assert len(dset) == 2 ** (2 * m - 2)


@pytest.mark.parametrize("m", [2, 3])
def test_class3_patterns_partition_the_plane(m):
    total = sum(
        len(class3_variant_build(m, p)) for p in ((0, 1), (1, 0), (0, 0), (1, 1))
    )
    assert total == 2 ** (2 * m)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_class3_predicate_forms_agree(m):
    assert class3_membership_equivalence(m)


def test_class3_membership_spot_check():
    dset = class3_build(3)
    ctx = dset.contexts[0]
    one = ctx.one()
    members = set(dset.elements)
    for x in ctx.elements():
        for y in ctx.elements():
            expected = (
                trace_to_prime(x * (y + one)),
                trace_to_prime(y * (x + one)),
            ) == (0, 1)
            assert ((x, y) in members) == expected


def test_class3_rejects_small_m_and_odd_characteristic():
    with pytest.raises(ParameterError):
        class3_build(1)
    with pytest.raises(ParameterError):
        class3_variant_build(3, (2, 0))


def test_flat_elements_order_first_component_first():
    dset = class2_build(2, 3, 1, 2, 1)
    x, y = dset.elements[0]
    assert dset.flat_elements()[0] == x.coeffs + y.coeffs


def test_json_dict_is_serializable():
    import json

    dset = class1_build(2, 4, 2, 1)
    blob = json.dumps(dset.to_json_dict(), sort_keys=True)
    assert "class1" in blob


def test_custom_set_sorted_and_deduplicated():
    ctx = make_field(2, 3)
    elems = [ctx.from_int(5), ctx.from_int(3), ctx.from_int(5)]
    dset = custom_univariate_set(ctx, elems)
    assert [x.to_int() for x in dset.elements] == [3, 5]
    assert not dset.formula_available
