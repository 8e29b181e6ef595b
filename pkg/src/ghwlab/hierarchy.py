"""Generalized-Hamming-weight engine.

Three routes to the same numbers, reconciled per rank r:

* the support oracle enumerates r-dimensional subcodes through message
  subspaces and minimizes the count of not-always-zero coordinates;
* the dual oracle enumerates r-dimensional ambient subspaces, takes the
  canonical trace-dual of each, and maximizes how many defining-set
  elements that dual contains;
* the closed forms evaluate the per-class piecewise expressions exactly.

All arithmetic is integer-exact.  Both oracles support chunked parallel
reduction; merges are associative with ties resolved toward the earliest
enumeration position.
"""

from __future__ import annotations

import concurrent.futures
import functools
import itertools
import json
import random
import time
from dataclasses import dataclass, field as dc_field

import numpy as np

from .code import CodeInstance, build_code, kernel_space, message_gram, min_distance, weight_distribution
from .defsets import CLASS1, CLASS2, CLASS3, DefiningSet
from .errors import BudgetExceededError, FormulaUnavailableError, ParameterError
from .field import FieldContext, enumerate_subfield, relative_trace, trace_to_prime
from .linalg import (
    Subspace,
    _basis_at,
    _pivot_blocks,
    gaussian_binomial,
    intersect,
    enumerate_subspaces,
    subspace_at_index,
)

DEFAULT_TEST_BUDGET = 10**7


# ---------------------------------------------------------------------------
# closed forms


def class1_ghw(q: int, m: int, k: int, h: int, r: int) -> int:
    if not 1 <= r <= m:
        raise ParameterError(f"rank {r} out of range [1, {m}]")
    n = q**m - (h + 1) * q**k
    if r <= k:
        return n - q ** (m - r) + (h + 1) * q ** (k - r)
    return n - q ** (m - r) + 1


def class2_ghw(q: int, m: int, s: int, k: int, l: int, r: int) -> int:
    if not 1 <= r <= m + k:
        raise ParameterError(f"rank {r} out of range [1, {m + k}]")
    if q ** (m - s) <= q ** (m + l - k - s) + 1:
        raise FormulaUnavailableError(
            "closed form does not apply at the exceptional parameters "
            f"(q={q}, m={m}, s={s}, k={k}, l={l}); use the oracles"
        )
    n = (q**m - q**s) * (q**k - q**l)
    if r <= k - l:
        return n - q ** (m + k - r) + q ** (m + l - r) + q ** (k + s - r) - q ** (s + l)
    if r <= m + l:
        return n - q ** (m + k - r) + q ** (m + l - r)
    return n - q ** (m + k - r) + 1


def class3_ghw(m: int, r: int) -> int:
    if m < 2:
        raise ParameterError(f"requires m >= 2, got m={m}")
    if not 1 <= r <= 2 * m:
        raise ParameterError(f"rank {r} out of range [1, {2 * m}]")
    if r <= m:
        return 2 ** (2 * m - 2) - 2 ** (2 * m - r - 2) - 2 ** (m - 2)
    if r < 2 * m:
        return 2 ** (2 * m - 2) - 2 ** (2 * m - r - 1)
    return 2 ** (2 * m - 2)


def formula_ghw(dset: DefiningSet, r: int) -> int:
    if not dset.formula_available:
        raise FormulaUnavailableError(
            f"no closed-form hierarchy for this {dset.kind} defining set"
        )
    p = dset.params
    if dset.kind == CLASS1:
        return class1_ghw(dset.q, p["m"], p["k"], p["h"], r)
    if dset.kind == CLASS2:
        return class2_ghw(dset.q, p["m"], p["s"], p["k"], p["l"], r)
    if dset.kind == CLASS3:
        return class3_ghw(p["m"], r)
    raise FormulaUnavailableError(f"no closed form for kind {dset.kind!r}")


# ---------------------------------------------------------------------------
# cost estimates and budget guardrails


def dual_oracle_cost(dset: DefiningSet, ranks) -> int:
    n_amb, q = dset.ambient_dim, dset.q
    return sum(gaussian_binomial(n_amb, r, q) for r in ranks) * len(dset.elements)


def support_oracle_cost(code: CodeInstance, ranks) -> int:
    md, q = code.message_dim, code.q
    return sum(gaussian_binomial(md, r, q) for r in ranks) * code.length


# ---------------------------------------------------------------------------
# support oracle: minimize |supp| over r-dimensional subcodes


def _support_chunk(dset: DefiningSet, r: int, chunk_index: int, chunk_count: int):
    """Scan one enumeration slice; returns (best_support, witness_basis)."""
    code = build_code(dset)
    q, md, n = code.q, code.message_dim, code.length
    if code.kernel.dim:
        return _support_chunk_filtered(code, r, chunk_index, chunk_count)
    gen = code.generator.rows
    total = gaussian_binomial(md, r, q)
    start = total * chunk_index // chunk_count
    stop = total * (chunk_index + 1) // chunk_count
    best = n + 1
    witness = None
    pos = 0
    for pivots, free, size in _pivot_blocks(md, r, q):
        if pos + size <= start:
            pos += size
            continue
        if pos >= stop:
            break
        row_free = [[j for (i, j) in free if i == ri] for ri in range(r)]
        # bitmask of nonzero codeword coordinates, one mask per possible row
        row_masks = []
        for ri, p in enumerate(pivots):
            fc = row_free[ri]
            opts = []
            for digits in itertools.product(range(q), repeat=len(fc)):
                vec = list(gen[p])
                for d, j in zip(digits, fc):
                    if d:
                        g = gen[j]
                        vec = [(a + d * b) % q for a, b in zip(vec, g)]
                mask = 0
                for t, v in enumerate(vec):
                    if v:
                        mask |= 1 << t
                opts.append(mask)
            row_masks.append(opts)
        lo = max(0, start - pos)
        hi = min(size, stop - pos)
        stream = itertools.product(*[range(len(o)) for o in row_masks])
        for choice in itertools.islice(stream, lo, hi):
            mask = 0
            for ri, c in enumerate(choice):
                mask |= row_masks[ri][c]
            w = mask.bit_count()
            if w < best:
                best = w
                digits = []
                for ri, c in enumerate(choice):
                    width = len(row_free[ri])
                    digits.extend(c // q ** (width - 1 - t) % q for t in range(width))
                witness = _basis_at(q, md, pivots, free, digits)
        pos += size
    return best, witness


def _support_chunk_filtered(code: CodeInstance, r: int, chunk_index: int, chunk_count: int):
    """Slow path for codes with a nontrivial message kernel."""
    q, md, n = code.q, code.message_dim, code.length
    gen = code.generator.rows
    best = n + 1
    witness = None
    for h in enumerate_subspaces(md, r, q, chunk_index, chunk_count):
        if intersect(h, code.kernel).dim:
            continue
        mask = 0
        for row in h.basis:
            vec = [0] * n
            for c, g in zip(row, gen):
                if c:
                    vec = [(a + c * b) % q for a, b in zip(vec, g)]
            for t, v in enumerate(vec):
                if v:
                    mask |= 1 << t
        w = mask.bit_count()
        if w < best:
            best = w
            witness = h.basis
    return best, witness


def ghw_support_oracle(code: CodeInstance, r: int, workers: int = 1):
    """(d_r, witness message subspace) by exhaustive subcode enumeration."""
    if not 1 <= r <= code.code_dim:
        raise ParameterError(f"rank {r} out of range [1, {code.code_dim}]")
    dset = code.defining_set
    results = _run_chunks(_support_chunk, (dset, r), workers)
    best, witness = min(results, key=lambda t: t[0] if t[1] is not None else 10**18)
    return best, Subspace(code.q, code.message_dim, witness)


# ---------------------------------------------------------------------------
# dual oracle: maximize |D ∩ H^perp| over ambient subspaces


def _dual_scan_context(dset: DefiningSet):
    gram = np.array(message_gram(dset).rows, dtype=np.int64)
    dmat = np.array(dset.flat_elements(), dtype=np.int64)
    kernel = kernel_space(dset)
    return gram, dmat, kernel


def _dual_count_factory(dset: DefiningSet):
    """Counter h -> |D ∩ h^perp| via the canonical dual basis.

    For each subspace the dual is materialized as the null space of the
    pairing matrix, and every defining-set element is reduced against that
    basis; membership means zero residual.
    """
    gram, dmat, _ = _dual_scan_context(dset)
    q = dset.q
    n_amb = dset.ambient_dim

    def count(h: Subspace) -> int:
        pairing = (np.array(h.basis, dtype=np.int64) @ gram % q).tolist()
        rows = [list(row) for row in pairing]
        pivots = []
        rank = 0
        for c in range(n_amb):
            pr = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
            if pr is None:
                continue
            rows[rank], rows[pr] = rows[pr], rows[rank]
            inv = pow(rows[rank][c], -1, q)
            if inv != 1:
                rows[rank] = [inv * x % q for x in rows[rank]]
            for i in range(len(rows)):
                if i != rank and rows[i][c]:
                    f = rows[i][c]
                    rows[i] = [(x - f * y) % q for x, y in zip(rows[i], rows[rank])]
            pivots.append(c)
            rank += 1
        pivot_set = set(pivots)
        free = [j for j in range(n_amb) if j not in pivot_set]
        null_rows = []
        for j in free:
            v = [0] * n_amb
            v[j] = 1
            for i, p in enumerate(pivots):
                v[p] = (-rows[i][j]) % q
            null_rows.append(v)
        nb = np.array(null_rows, dtype=np.int64).reshape(len(free), n_amb)
        residual = (dmat - dmat[:, free] @ nb) % q
        return int(np.count_nonzero(~residual.any(axis=1)))

    return count


def _dual_chunk(dset: DefiningSet, r: int, chunk_index: int, chunk_count: int):
    """Scan one slice; returns (best_count, witness_basis)."""
    _, _, kernel = _dual_scan_context(dset)
    count = _dual_count_factory(dset)
    q = dset.q
    n_amb = dset.ambient_dim
    best = -1
    witness = None
    for h in enumerate_subspaces(n_amb, r, q, chunk_index, chunk_count):
        if kernel.dim and intersect(h, kernel).dim:
            continue
        c = count(h)
        if c > best:
            best = c
            witness = h.basis
    return best, witness


def ghw_dual_oracle(dset: DefiningSet, r: int, workers: int = 1):
    """(d_r, witness ambient subspace) via the dual-intersection search."""
    kernel = kernel_space(dset)
    max_r = dset.ambient_dim - kernel.dim
    if not 1 <= r <= max_r:
        raise ParameterError(f"rank {r} out of range [1, {max_r}]")
    results = _run_chunks(_dual_chunk, (dset, r), workers)
    best, witness = max(results, key=lambda t: t[0])
    d_r = len(dset.elements) - best
    return d_r, Subspace(dset.q, dset.ambient_dim, witness)


def _run_chunks(fn, args, workers: int):
    """Run fn over (args..., i, workers) for each chunk; keep order."""
    if workers <= 1:
        return [fn(*args, 0, 1)]
    with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, *args, i, workers) for i in range(workers)]
        return [f.result() for f in futures]


# ---------------------------------------------------------------------------
# character-sum route for the butterfly family


@functools.lru_cache(maxsize=None)
def _butterfly_tables(ctx: FieldContext):
    """Per-pair tables over F_{2^m}^2, indexed by element integers.

    sign[a][b]    = (-1)^Tr(b(a+1)) - (-1)^Tr(a(b+1))
    special[a][b] = 1 when (Tr(b(a+1)), Tr(a(b+1))) == (0, 1)
    """
    size = ctx.size
    elems = list(ctx.elements())
    one = ctx.one()
    sign = [[0] * size for _ in range(size)]
    special = [[False] * size for _ in range(size)]
    for a_int, a in enumerate(elems):
        for b_int, b in enumerate(elems):
            t1 = trace_to_prime(b * (a + one))
            t2 = trace_to_prime(a * (b + one))
            sign[a_int][b_int] = (1 - 2 * t1) - (1 - 2 * t2)
            special[a_int][b_int] = (t1, t2) == (0, 1)
    return sign, special


def _pair_int(vec, m: int) -> tuple[int, int]:
    a = 0
    for c in reversed(vec[:m]):
        a = a * 2 + c
    b = 0
    for c in reversed(vec[m:]):
        b = b * 2 + c
    return a, b


def butterfly_signed_sum(ctx: FieldContext, h: Subspace) -> int:
    sign, _ = _butterfly_tables(ctx)
    m = ctx.n
    total = 0
    for vec in h.vectors():
        a, b = _pair_int(vec, m)
        total += sign[a][b]
    return total


def butterfly_special_count(ctx: FieldContext, h: Subspace) -> int:
    _, special = _butterfly_tables(ctx)
    m = ctx.n
    return sum(1 for vec in h.vectors() if special[_pair_int(vec, m)[0]][_pair_int(vec, m)[1]])


def butterfly_charsum_intersection(ctx: FieldContext, h: Subspace) -> int:
    """|D ∩ h^perp| for the (0,1) butterfly set, via the character sum."""
    m = ctx.n
    r = h.dim
    s = butterfly_signed_sum(ctx, h)
    all_ones = (1,) + (0,) * (m - 1)
    indicator = 1 if h.contains(all_ones + all_ones) else 0
    value = 2 ** (2 * m) + 2**m * s - 2 ** (2 * m) * indicator
    if value % 2 ** (r + 2):
        raise AssertionError("character sum not divisible by 2^(r+2)")
    return value // 2 ** (r + 2)


# ---------------------------------------------------------------------------
# structural consistency checks (exhaustive at desk scale)


def check_class1_separator(dset: DefiningSet) -> dict:
    """Some trace-zero element pairs nontrivially with every representative."""
    ctx = dset.contexts[0]
    k = dset.params["k"]
    thetas = dset.params["thetas"]
    for x in ctx.elements():
        if not relative_trace(x, k).is_zero():
            continue
        if all(trace_to_prime(t * x) != 0 for t in thetas):
            return {"ok": True, "witness": "".join(str(c) for c in x.coeffs)}
    return {"ok": len(thetas) == 0, "witness": None}


def check_class2_structure(dset: DefiningSet) -> dict:
    """Set-level identities plus the dual-intersection size bound."""
    q = dset.q
    m, s, k, l = (dset.params[key] for key in ("m", "s", "k", "l"))
    sub_l = set(enumerate_subfield(dset.contexts[1], l))
    sub_s = set(enumerate_subfield(dset.contexts[0], s))
    if any(y in sub_l or x in sub_s for (x, y) in dset.elements):
        return {"ok": False, "violation": "element inside an excluded subfield"}
    count = _dual_count_factory(dset)
    for r in range(1, m + k + 1):
        bound = q ** (m + k - r) - max(1, q ** (m + l - r))
        for h in enumerate_subspaces(m + k, r, q):
            if count(h) > bound:
                return {
                    "ok": False,
                    "violation": f"bound exceeded at r={r}",
                    "subspace": h.serialize(),
                }
    return {"ok": True}


def _class3_subspace_sample(m: int, samples: int):
    rng = random.Random(0)
    for _ in range(samples):
        r = rng.randint(1, 2 * m)
        idx = rng.randrange(gaussian_binomial(2 * m, r, 2))
        yield subspace_at_index(2 * m, r, 2, idx)


def check_class3_structure(dset: DefiningSet, samples: int = 10_000) -> dict:
    """Halving bound, signed-sum range, and character-sum consistency.

    Exhaustive over every subspace for m <= 3; deterministic sampling
    beyond that.
    """
    ctx = dset.contexts[0]
    m = dset.params["m"]
    count = _dual_count_factory(dset)
    if m <= 3:
        subspaces = itertools.chain.from_iterable(
            enumerate_subspaces(2 * m, r, 2) for r in range(1, 2 * m + 1)
        )
        mode = "exhaustive"
    else:
        subspaces = _class3_subspace_sample(m, samples)
        mode = f"sampled-{samples}"
    all_ones = (1,) + (0,) * (m - 1)
    flat_ones = all_ones + all_ones
    checked = 0
    for h in subspaces:
        r = h.dim
        ssum = butterfly_signed_sum(ctx, h)
        if not -(2**m) <= ssum <= 2**m:
            return {"ok": False, "violation": "signed sum out of range", "subspace": h.serialize()}
        if h.contains(flat_ones) and ssum != 0:
            return {"ok": False, "violation": "signed sum nonzero despite (1,1)", "subspace": h.serialize()}
        if butterfly_special_count(ctx, h) > 2 ** (r - 1):
            return {"ok": False, "violation": "halving bound exceeded", "subspace": h.serialize()}
        if dset.params.get("pattern", (0, 1)) == (0, 1):
            if butterfly_charsum_intersection(ctx, h) != count(h):
                return {
                    "ok": False,
                    "violation": "character sum disagrees with direct count",
                    "subspace": h.serialize(),
                }
        checked += 1
    return {"ok": True, "mode": mode, "checked": checked}


def structure_checks(dset: DefiningSet, samples: int = 10_000) -> dict:
    if dset.kind == CLASS1:
        return {"separator": check_class1_separator(dset)}
    if dset.kind == CLASS2:
        return {"class2": check_class2_structure(dset)}
    if dset.kind == CLASS3:
        return {"class3": check_class3_structure(dset, samples=samples)}
    return {}


# ---------------------------------------------------------------------------
# report assembly


KNOWN_PARAM_ERRATA = {
    (CLASS1, 2, 4, 2, 1): (
        "params (q=2, m=4, k=2, h=1) are sometimes quoted with results "
        "[54, 4, 36] and hierarchy {36, 48, 52, 54}; those values belong to "
        "(q=3, m=4, k=2, h=2).  This run reports the actual [8, 4] code."
    ),
}


@dataclass
class HierarchyRow:
    r: int
    values: dict  # method name -> d_r
    witness: str | None
    agree: bool

    def to_dict(self) -> dict:
        out = {"r": self.r}
        for method in ("support", "dual", "formula"):
            if method in self.values:
                out[f"d_{method}"] = self.values[method]
        if self.witness is not None:
            out["witness"] = self.witness
        out["agree"] = self.agree
        return out


@dataclass
class HierarchyReport:
    kind: str
    params: dict
    n: int
    dim: int
    rows: list
    checks: dict
    notes: list
    timings: dict
    ok: bool
    extra: dict = dc_field(default_factory=dict)

    def hierarchy(self, method: str | None = None) -> list:
        """The d_r sequence, preferring the first available method."""
        out = []
        for row in self.rows:
            if method is not None:
                out.append(row.values[method])
            else:
                out.append(next(iter(row.values.values())))
        return out

    def to_dict(self, deterministic: bool = False) -> dict:
        data = {
            "class": self.kind,
            "params": self.params,
            "n": self.n,
            "dim": self.dim,
            "rows": [row.to_dict() for row in self.rows],
            "checks": self.checks,
            "notes": list(self.notes),
            "ok": self.ok,
        }
        data.update(self.extra)
        if not deterministic:
            data["timings"] = {k: round(v, 6) for k, v in self.timings.items()}
            data["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%S")
        return data

    def to_json(self, deterministic: bool = False) -> str:
        return json.dumps(self.to_dict(deterministic), sort_keys=True, indent=2)

    def to_csv(self) -> str:
        methods = [m for m in ("support", "dual", "formula") if m in self.rows[0].values]
        lines = ["r," + ",".join(f"d_{m}" for m in methods) + ",agree"]
        for row in self.rows:
            cells = [str(row.r)] + [str(row.values[m]) for m in methods] + [str(row.agree).lower()]
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"

    def to_table(self) -> str:
        lines = [
            f"class={self.kind} params={self.params} code=[{self.n}, {self.dim}]"
        ]
        parts = []
        for row in self.rows:
            value = next(iter(row.values.values()))
            parts.append(f"wt_{row.r}={value}")
        lines.append("hierarchy: {" + ",".join(parts) + "}")
        for row in self.rows:
            if not row.agree:
                lines.append(f"DISAGREEMENT at r={row.r}: {row.values}")
        for key, value in self.checks.items():
            lines.append(f"check {key}: {value}")
        for note in self.notes:
            lines.append(f"note: {note}")
        lines.append("status: " + ("ok" if self.ok else "FAILED"))
        return "\n".join(lines)


def _json_ready_params(dset: DefiningSet) -> dict:
    out = {}
    for key, value in sorted(dset.params.items()):
        if key == "thetas":
            out[key] = ["".join(str(c) for c in t.coeffs) for t in value]
        elif key == "pattern":
            out[key] = list(value)
        else:
            out[key] = value
    out["q"] = dset.q
    return out


def verify_hierarchy(
    dset: DefiningSet,
    methods=("support", "dual", "formula"),
    workers: int = 1,
    budget: int | None = None,
    force: bool = False,
    run_checks: bool = True,
    check_samples: int = 10_000,
) -> HierarchyReport:
    if not methods:
        raise ParameterError("at least one method is required")
    methods = tuple(methods)
    for method in methods:
        if method not in ("support", "dual", "formula"):
            raise ParameterError(f"unknown method {method!r}")
    code = build_code(dset)
    ranks = range(1, code.code_dim + 1)
    if budget is not None and not force:
        cost = 0
        if "dual" in methods:
            cost += dual_oracle_cost(dset, ranks)
        if "support" in methods:
            cost += support_oracle_cost(code, ranks)
        if cost > budget:
            raise BudgetExceededError(
                f"oracle run needs {cost} subspace-element tests, budget is "
                f"{budget}; pass force=True / --force to proceed",
                required=cost,
            )

    notes = list(dset.notes)
    if dset.kind == CLASS1:
        key = (CLASS1, dset.q, dset.params["m"], dset.params["k"], dset.params["h"])
        if key in KNOWN_PARAM_ERRATA:
            notes.append(KNOWN_PARAM_ERRATA[key])

    use_formula = "formula" in methods and dset.formula_available
    if "formula" in methods and not dset.formula_available:
        if not any(m in methods for m in ("support", "dual")):
            raise FormulaUnavailableError(
                f"no closed-form hierarchy for this {dset.kind} defining set; "
                "request an oracle method"
            )
        notes.append("formula method requested but unavailable; oracle-only run")

    timings = {m: 0.0 for m in methods if m != "formula" or use_formula}
    rows = []
    for r in ranks:
        values = {}
        witness = None
        if "support" in methods:
            t0 = time.perf_counter()
            d, w = ghw_support_oracle(code, r, workers=workers)
            timings["support"] += time.perf_counter() - t0
            values["support"] = d
            witness = w.serialize()
        if "dual" in methods:
            t0 = time.perf_counter()
            d, w = ghw_dual_oracle(dset, r, workers=workers)
            timings["dual"] += time.perf_counter() - t0
            values["dual"] = d
            witness = w.serialize()
        if use_formula:
            t0 = time.perf_counter()
            values["formula"] = formula_ghw(dset, r)
            timings["formula"] += time.perf_counter() - t0
        agree = len(set(values.values())) == 1
        rows.append(HierarchyRow(r=r, values=values, witness=witness, agree=agree))

    sequence = [next(iter(row.values.values())) for row in rows]
    checks = {
        "monotone": all(a < b for a, b in zip(sequence, sequence[1:])),
        "singleton": all(
            d <= code.length - code.code_dim + r for r, d in enumerate(sequence, 1)
        ),
        "top_weight_is_length": sequence[-1] == code.length if rows else True,
        "kernel_dim": code.kernel.dim,
    }
    if run_checks:
        checks.update(structure_checks(dset, samples=check_samples))

    ok = (
        all(row.agree for row in rows)
        and checks["monotone"]
        and checks["singleton"]
        and all(
            part.get("ok", True)
            for part in checks.values()
            if isinstance(part, dict)
        )
    )
    return HierarchyReport(
        kind=dset.kind,
        params=_json_ready_params(dset),
        n=code.length,
        dim=code.code_dim,
        rows=rows,
        checks=checks,
        notes=notes,
        timings=timings,
        ok=ok,
    )
