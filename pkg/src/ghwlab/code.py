"""Materialize the linear code of a defining set.

The generator matrix is indexed by the power basis of the message space,
with one column per defining-set element in the set's fixed order.  A
column for element d is the trace pairing of d against the basis, which
is exactly the Gram matrix applied to d's flattened coordinate vector.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import product

import numpy as np

from .defsets import DefiningSet
from .errors import BudgetExceededError, ParameterError
from .linalg import FqMatrix, Subspace, product_trace_gram, trace_gram

DEFAULT_CODEWORD_BUDGET = 2**24


@dataclass(frozen=True, eq=False)
class CodeInstance:
    defining_set: DefiningSet
    generator: FqMatrix  # message_dim x n
    length: int
    message_dim: int
    code_dim: int
    kernel: Subspace  # messages mapping to the zero codeword

    @property
    def q(self) -> int:
        return self.defining_set.q


def message_gram(dset: DefiningSet) -> FqMatrix:
    if dset.arity == "univariate":
        return trace_gram(dset.contexts[0])
    return product_trace_gram(dset.contexts[0], dset.contexts[1])


def build_code(dset: DefiningSet) -> CodeInstance:
    if not dset.elements:
        raise ParameterError("cannot build a code from an empty defining set")
    gram = message_gram(dset)
    columns = [gram.apply(vec) for vec in dset.flat_elements()]
    md = dset.ambient_dim
    generator = FqMatrix.from_rows(
        dset.q, tuple(tuple(col[i] for col in columns) for i in range(md)), len(columns)
    )
    kernel = generator.transpose().kernel()
    code_dim = md - kernel.dim
    if generator.rank() != code_dim:
        raise AssertionError("rank inconsistent with kernel dimension")
    return CodeInstance(
        defining_set=dset,
        generator=generator,
        length=len(dset.elements),
        message_dim=md,
        code_dim=code_dim,
        kernel=kernel,
    )


def kernel_space(dset: DefiningSet) -> Subspace:
    """Messages whose codeword is identically zero, as a canonical subspace."""
    gram = message_gram(dset)
    columns = [gram.apply(vec) for vec in dset.flat_elements()]
    md = dset.ambient_dim
    m = FqMatrix.from_rows(dset.q, columns, md)
    return m.kernel()


def weight_distribution(code: CodeInstance, budget: int = DEFAULT_CODEWORD_BUDGET) -> dict[int, int]:
    """Exact weight -> count map over all q^code_dim codewords."""
    q = code.q
    total = q**code.code_dim
    if budget is not None and total > budget:
        raise BudgetExceededError(
            f"weight distribution needs {total} codewords, budget is {budget}",
            required=total,
        )
    messages = np.array(
        list(product(range(q), repeat=code.message_dim)), dtype=np.int64
    )
    gen = np.array(code.generator.rows, dtype=np.int64)
    words = messages @ gen % q
    weights = np.count_nonzero(words, axis=1)
    counts = Counter(int(w) for w in weights)
    multiplicity = q**code.kernel.dim
    dist = {w: c // multiplicity for w, c in sorted(counts.items())}
    if sum(dist.values()) != total or dist.get(0, 0) != 1:
        raise AssertionError("weight distribution bookkeeping failed")
    return dist


def min_distance(code: CodeInstance, budget: int = DEFAULT_CODEWORD_BUDGET) -> int:
    dist = weight_distribution(code, budget=budget)
    return min(w for w in dist if w > 0)
