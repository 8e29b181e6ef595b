"""Extension fields F_{q^n} for prime q, with trace maps and subfield tools.

Elements are coordinate vectors over the power basis 1, g, ..., g^{n-1},
where g is the residue class of the indeterminate modulo a fixed monic
irreducible polynomial.  For a given (q, n) the modulus is the
lexicographically smallest monic irreducible (coefficients compared
constant-term first), so reconstruction is deterministic.

Elements are totally ordered by reading their coordinate vector as a
base-q integer, index 0 least significant.  Every "first element such
that ..." selection in the package uses this order.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import ContextMismatchError, ParameterError


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# polynomial helpers: coefficient tuples, constant term first, no trailing
# zeros (the zero polynomial is the empty tuple)


def _trim(c: Sequence[int]) -> tuple[int, ...]:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _poly_mul(a: Sequence[int], b: Sequence[int], q: int) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % q
    return _trim(out)


def _poly_mod(a: Sequence[int], mod: Sequence[int], q: int) -> tuple[int, ...]:
    """Remainder of a modulo a monic polynomial."""
    r = list(a)
    dm = len(mod) - 1
    while len(_trim(r)) - 1 >= dm:
        r = list(_trim(r))
        shift = len(r) - 1 - dm
        lead = r[-1]
        for i, mi in enumerate(mod):
            r[shift + i] = (r[shift + i] - lead * mi) % q
    return _trim(r)


def _is_irreducible(f: Sequence[int], q: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg(f)//2."""
    deg = len(f) - 1
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(q), repeat=d):
            divisor = tuple(low) + (1,)
            if not _poly_mod(f, divisor, q):
                return False
    return deg >= 1


def smallest_irreducible(q: int, n: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree n over F_q."""
    for low in itertools.product(range(q), repeat=n):
        f = tuple(low) + (1,)
        if _is_irreducible(f, q):
            return f
    raise ParameterError(f"no irreducible polynomial of degree {n} over F_{q}")


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldContext:
    """Immutable description of F_{q^n}: prime q, degree n, monic modulus."""

    q: int
    n: int
    modulus: tuple[int, ...]  # length n + 1, constant term first, monic

    @property
    def size(self) -> int:
        return self.q**self.n

    def element(self, coeffs: Sequence[int]) -> "FieldElement":
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != self.n:
            raise ParameterError(
                f"expected {self.n} coordinates, got {len(coeffs)}"
            )
        if any(c < 0 or c >= self.q for c in coeffs):
            raise ParameterError(f"coordinates must lie in [0, {self.q})")
        return FieldElement(self, coeffs)

    def zero(self) -> "FieldElement":
        return FieldElement(self, (0,) * self.n)

    def one(self) -> "FieldElement":
        return FieldElement(self, (1,) + (0,) * (self.n - 1))

    def gen(self) -> "FieldElement":
        """Residue of the indeterminate (0 in the degenerate n = 1 case)."""
        if self.n == 1:
            return self.zero()
        return FieldElement(self, (0, 1) + (0,) * (self.n - 2))

    def from_int(self, value: int) -> "FieldElement":
        if value < 0 or value >= self.size:
            raise ParameterError(f"element index {value} out of range")
        coeffs = []
        for _ in range(self.n):
            coeffs.append(value % self.q)
            value //= self.q
        return FieldElement(self, tuple(coeffs))

    def elements(self) -> Iterator["FieldElement"]:
        """All elements in the global base-q order."""
        for i in range(self.size):
            yield self.from_int(i)

    def scalar(self, value: int) -> "FieldElement":
        """Embed an F_q scalar as a constant coordinate vector."""
        return FieldElement(self, (value % self.q,) + (0,) * (self.n - 1))

    def describe(self) -> str:
        mod = "".join(str(c) for c in self.modulus)
        return f"q={self.q} n={self.n} mod={mod}"


def make_field(q: int, n: int) -> FieldContext:
    if not is_prime(q):
        raise ParameterError(f"characteristic {q} is not prime")
    if n < 1:
        raise ParameterError(f"extension degree must be positive, got {n}")
    return FieldContext(q, n, smallest_irreducible(q, n))


def parse_context(text: str) -> FieldContext:
    parts = dict(p.split("=", 1) for p in text.split())
    q = int(parts["q"])
    n = int(parts["n"])
    modulus = tuple(int(c) for c in parts["mod"])
    if len(modulus) != n + 1 or modulus[-1] != 1:
        raise ParameterError(f"malformed modulus in context {text!r}")
    return FieldContext(q, n, modulus)


@functools.lru_cache(maxsize=None)
def _reduction_table(ctx: FieldContext) -> tuple[tuple[int, ...], ...]:
    """Coordinates of g^j for j in [n, 2n-2], used to fold products."""
    rows = []
    for j in range(ctx.n, 2 * ctx.n - 1):
        mono = (0,) * j + (1,)
        rem = _poly_mod(mono, ctx.modulus, ctx.q)
        rows.append(tuple(rem) + (0,) * (ctx.n - len(rem)))
    return tuple(rows)


@dataclass(frozen=True)
class FieldElement:
    """A field element as a length-n coordinate vector over F_q."""

    ctx: FieldContext
    coeffs: tuple[int, ...]

    def _check(self, other: "FieldElement") -> None:
        if self.ctx != other.ctx:
            raise ContextMismatchError(
                f"contexts differ: {self.ctx.describe()} vs {other.ctx.describe()}"
            )

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def to_int(self) -> int:
        value = 0
        for c in reversed(self.coeffs):
            value = value * self.ctx.q + c
        return value

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        q = self.ctx.q
        return FieldElement(
            self.ctx,
            tuple((a + b) % q for a, b in zip(self.coeffs, other.coeffs)),
        )

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        q = self.ctx.q
        return FieldElement(
            self.ctx,
            tuple((a - b) % q for a, b in zip(self.coeffs, other.coeffs)),
        )

    def __neg__(self) -> "FieldElement":
        q = self.ctx.q
        return FieldElement(self.ctx, tuple((-a) % q for a in self.coeffs))

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        ctx = self.ctx
        prod = _poly_mul(self.coeffs, other.coeffs, ctx.q)
        if len(prod) <= ctx.n:
            return FieldElement(ctx, tuple(prod) + (0,) * (ctx.n - len(prod)))
        table = _reduction_table(ctx)
        out = list(prod[: ctx.n]) + [0] * (ctx.n - min(len(prod), ctx.n))
        out = out[: ctx.n]
        for j in range(ctx.n, len(prod)):
            cj = prod[j]
            if cj:
                row = table[j - ctx.n]
                for i in range(ctx.n):
                    out[i] = (out[i] + cj * row[i]) % ctx.q
        return FieldElement(ctx, tuple(out))

    def __pow__(self, e: int) -> "FieldElement":
        if e < 0:
            return self.inverse() ** (-e)
        result = self.ctx.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inversion of zero field element")
        return self ** (self.ctx.size - 2)

    def frobenius(self, times: int = 1) -> "FieldElement":
        return self ** (self.ctx.q**times)


def trace_to_prime(x: FieldElement) -> int:
    """Absolute trace down to F_q, returned as a plain scalar."""
    ctx = x.ctx
    acc = ctx.zero()
    term = x
    for _ in range(ctx.n):
        acc = acc + term
        term = term.frobenius()
    if any(c != 0 for c in acc.coeffs[1:]):
        raise AssertionError("trace left the prime field")
    return acc.coeffs[0]


def relative_trace(x: FieldElement, k: int) -> FieldElement:
    """Trace from F_{q^n} onto the degree-k subfield (k must divide n)."""
    ctx = x.ctx
    if k < 1 or ctx.n % k != 0:
        raise ParameterError(f"{k} does not divide extension degree {ctx.n}")
    acc = ctx.zero()
    term = x
    for _ in range(ctx.n // k):
        acc = acc + term
        term = term.frobenius(k)
    return acc


def subfield_absolute_trace(x: FieldElement, k: int) -> int:
    """Absolute trace of a degree-k subfield element, evaluated in place.

    Treats x as an element of F_{q^k}, so the sum runs over the k subfield
    Frobenius conjugates only.
    """
    if not is_in_subfield(x, k):
        raise ParameterError("element does not lie in the requested subfield")
    ctx = x.ctx
    acc = ctx.zero()
    term = x
    for _ in range(k):
        acc = acc + term
        term = term.frobenius()
    if any(c != 0 for c in acc.coeffs[1:]):
        raise AssertionError("trace left the prime field")
    return acc.coeffs[0]


def is_in_subfield(x: FieldElement, k: int) -> bool:
    if k < 1 or x.ctx.n % k != 0:
        raise ParameterError(f"{k} does not divide extension degree {x.ctx.n}")
    return x.frobenius(k) == x


def enumerate_subfield(ctx: FieldContext, k: int) -> list[FieldElement]:
    """The q^k elements fixed by the k-fold Frobenius, in global order."""
    if k < 1 or ctx.n % k != 0:
        raise ParameterError(f"{k} does not divide extension degree {ctx.n}")
    members = [x for x in ctx.elements() if x.frobenius(k) == x]
    if len(members) != ctx.q**k:
        raise AssertionError("subfield has unexpected size")
    return members


def format_element(x: FieldElement) -> str:
    """Digit string, least significant coordinate first."""
    return "".join(str(c) for c in x.coeffs)


def parse_element(ctx: FieldContext, text: str) -> FieldElement:
    if len(text) != ctx.n or not text.isdigit():
        raise ParameterError(f"malformed element {text!r} for {ctx.describe()}")
    return ctx.element(tuple(int(ch) for ch in text))
