"""Construction and validation of the three defining-set families.

Every free choice is resolved deterministically: coset representatives are
picked greedily in the global element order, and the element list of each
set follows that same order (lexicographic pair order for the bivariate
families), so identical parameters always produce identical sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import ParameterError
from .field import (
    FieldContext,
    FieldElement,
    enumerate_subfield,
    format_element,
    is_prime,
    make_field,
    parse_element,
    trace_to_prime,
)

CLASS1 = "class1"
CLASS2 = "class2"
CLASS3 = "class3"
CUSTOM = "custom"


@dataclass(frozen=True, eq=False)
class DefiningSet:
    """An explicit, ordered defining set plus its class parameters."""

    kind: str
    q: int
    contexts: tuple[FieldContext, ...]
    elements: tuple  # FieldElement (univariate) or (FieldElement, FieldElement)
    params: dict
    exceptional: bool = False
    formula_available: bool = True
    notes: tuple[str, ...] = ()

    @property
    def arity(self) -> str:
        return "univariate" if len(self.contexts) == 1 else "bivariate"

    @property
    def ambient_dim(self) -> int:
        return sum(ctx.n for ctx in self.contexts)

    def __len__(self) -> int:
        return len(self.elements)

    def flat_elements(self) -> tuple[tuple[int, ...], ...]:
        """Elements as flattened coordinate vectors (first component first)."""
        if self.arity == "univariate":
            return tuple(x.coeffs for x in self.elements)
        return tuple(x.coeffs + y.coeffs for (x, y) in self.elements)

    def element_strings(self) -> tuple[str, ...]:
        if self.arity == "univariate":
            return tuple(format_element(x) for x in self.elements)
        return tuple(
            format_element(x) + "," + format_element(y) for (x, y) in self.elements
        )

    def to_json_dict(self) -> dict:
        params = {}
        for key, value in sorted(self.params.items()):
            if key == "thetas":
                params[key] = [format_element(t) for t in value]
            elif key == "pattern":
                params[key] = list(value)
            else:
                params[key] = value
        return {
            "class": self.kind,
            "q": self.q,
            "params": params,
            "ambient": [ctx.describe() for ctx in self.contexts],
            "exceptional": self.exceptional,
            "formula_available": self.formula_available,
            "elements": list(self.element_strings()),
        }


# ---------------------------------------------------------------------------
# class 1: F_{q^m} minus a union of h+1 pairwise disjoint subfield cosets


def _default_thetas(ctx: FieldContext, k: int, h: int) -> list[FieldElement]:
    """Greedy smallest-element coset representatives.

    Picks the h smallest nonzero elements whose differences with zero and
    with every previously chosen representative avoid the degree-k
    subfield.
    """
    subfield = set(enumerate_subfield(ctx, k))
    chosen: list[FieldElement] = []
    for x in ctx.elements():
        if len(chosen) == h:
            break
        if x.is_zero() or x in subfield:
            continue
        if any((x - t) in subfield for t in chosen):
            continue
        chosen.append(x)
    if len(chosen) < h:
        raise ParameterError(
            f"cannot pick {h} coset representatives outside F_{ctx.q}^{k}"
        )
    return chosen


def class1_build(
    q: int,
    m: int,
    k: int,
    h: int,
    thetas: Sequence[FieldElement | str] | None = None,
) -> DefiningSet:
    """Complement of h+1 disjoint cosets of the degree-k subfield."""
    if not is_prime(q):
        raise ParameterError(f"characteristic {q} is not prime")
    if not (1 <= k < m) or m % k != 0:
        raise ParameterError(f"requires 1 <= k < m and k | m, got k={k}, m={m}")
    if not (0 <= h <= q - 1):
        raise ParameterError(f"requires 0 <= h <= q-1, got h={h} for q={q}")
    ctx = make_field(q, m)
    subfield = set(enumerate_subfield(ctx, k))
    if thetas is None:
        theta_list = _default_thetas(ctx, k, h)
    else:
        theta_list = [
            parse_element(ctx, t) if isinstance(t, str) else t for t in thetas
        ]
        if len(theta_list) != h:
            raise ParameterError(f"expected {h} coset representatives")
        for i, t in enumerate(theta_list):
            if t.is_zero() or t in subfield:
                raise ParameterError(
                    f"representative {format_element(t)} differs from 0 by a subfield element"
                )
            for s in theta_list[:i]:
                if (t - s) in subfield:
                    raise ParameterError(
                        "representatives whose difference lies in the subfield"
                    )
    omega = set(subfield)
    for t in theta_list:
        omega.update(t + u for u in subfield)
    if len(omega) != (h + 1) * q**k:
        raise AssertionError("cosets are not disjoint")
    members = [x for x in ctx.elements() if x not in omega]
    if not members:
        raise ParameterError("defining set is empty at these parameters")
    return DefiningSet(
        kind=CLASS1,
        q=q,
        contexts=(ctx,),
        elements=tuple(members),
        params={"m": m, "k": k, "h": h, "thetas": tuple(theta_list)},
    )


# ---------------------------------------------------------------------------
# class 2: (F_{q^m} \ F_{q^s}) x (F_{q^k} \ F_{q^l})


def class2_build(q: int, m: int, s: int, k: int, l: int) -> DefiningSet:
    if not is_prime(q):
        raise ParameterError(f"characteristic {q} is not prime")
    if not (0 < s < m) or m % s != 0:
        raise ParameterError(f"requires 0 < s < m and s | m, got s={s}, m={m}")
    if not (0 < l < k) or k % l != 0:
        raise ParameterError(f"requires 0 < l < k and l | k, got l={l}, k={k}")
    if k - l > m - s:
        raise ParameterError(f"requires k-l <= m-s, got k-l={k - l}, m-s={m - s}")
    ctx_m = make_field(q, m)
    ctx_k = make_field(q, k)
    sub_s = set(enumerate_subfield(ctx_m, s))
    sub_l = set(enumerate_subfield(ctx_k, l))
    xs = [x for x in ctx_m.elements() if x not in sub_s]
    ys = [y for y in ctx_k.elements() if y not in sub_l]
    exceptional = q ** (m - s) <= q ** (m + l - k - s) + 1
    notes = ()
    if exceptional:
        notes = (
            "exceptional parameters: the closed-form hierarchy does not "
            "apply; oracle methods remain valid",
        )
    return DefiningSet(
        kind=CLASS2,
        q=q,
        contexts=(ctx_m, ctx_k),
        elements=tuple((x, y) for x in xs for y in ys),
        params={"m": m, "s": s, "k": k, "l": l},
        exceptional=exceptional,
        formula_available=not exceptional,
        notes=notes,
    )


# ---------------------------------------------------------------------------
# class 3: the butterfly set over F_{2^m} x F_{2^m}


PATTERNS = ((0, 1), (1, 0), (0, 0), (1, 1))


def _pair_pattern(x: FieldElement, y: FieldElement, one: FieldElement) -> tuple[int, int]:
    return (
        trace_to_prime(x * (y + one)),
        trace_to_prime(y * (x + one)),
    )


def class3_variant_build(m: int, pattern: tuple[int, int] = (0, 1)) -> DefiningSet:
    """Pairs over F_{2^m}^2 whose trace pattern equals the given pair.

    The four pattern sets partition the whole plane.  Only the (0,1) and
    (1,0) patterns admit the closed-form hierarchy; the other two yield a
    code of deficient dimension and are left to the oracles.
    """
    if m < 2:
        raise ParameterError(f"requires m >= 2, got m={m}")
    pattern = (int(pattern[0]), int(pattern[1]))
    if pattern not in PATTERNS:
        raise ParameterError(f"pattern must be one of {PATTERNS}")
    ctx = make_field(2, m)
    one = ctx.one()
    members = [
        (x, y)
        for x in ctx.elements()
        for y in ctx.elements()
        if _pair_pattern(x, y, one) == pattern
    ]
    formula = pattern in ((0, 1), (1, 0))
    notes = () if formula else ("hierarchy-formula-unavailable for this pattern",)
    return DefiningSet(
        kind=CLASS3,
        q=2,
        contexts=(ctx, ctx),
        elements=tuple(members),
        params={"m": m, "pattern": pattern},
        formula_available=formula,
        notes=notes,
    )


def class3_build(m: int) -> DefiningSet:
    return class3_variant_build(m, (0, 1))


def class3_membership_equivalence(m: int) -> bool:
    """Check the two published forms of the butterfly predicate coincide.

    The pair condition (Tr(x(x+y)), Tr(y(x+y))) = (0, 1) selects the same
    set as (Tr(x(y+1)), Tr(y(x+1))) = (0, 1) in characteristic 2 because
    Tr(z^2) = Tr(z).
    """
    ctx = make_field(2, m)
    one = ctx.one()
    for x in ctx.elements():
        for y in ctx.elements():
            lhs = (
                trace_to_prime(x * (x + y)) == 0
                and trace_to_prime(y * (x + y)) == 1
            )
            rhs = _pair_pattern(x, y, one) == (0, 1)
            if lhs != rhs:
                return False
    return True


# ---------------------------------------------------------------------------
# free-form sets (testing and kernel experiments; no closed form)


def custom_univariate_set(ctx: FieldContext, elements: Sequence[FieldElement]) -> DefiningSet:
    members = sorted(set(elements), key=lambda x: x.to_int())
    if not members:
        raise ParameterError("defining set is empty")
    return DefiningSet(
        kind=CUSTOM,
        q=ctx.q,
        contexts=(ctx,),
        elements=tuple(members),
        params={},
        formula_available=False,
    )
