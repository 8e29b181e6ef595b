"""End-to-end acceptance gate.

Each test covers one numbered criterion and prints a single PASS/FAIL
line (run pytest with -s or read captured stdout).  Failures are real
assertion failures; nothing is downgraded.
"""

import contextlib
import json
import time

import pytest

from ghwlab.cli import main as cli_main
from ghwlab.code import build_code, message_gram, min_distance
from ghwlab.defsets import (
    class1_build,
    class2_build,
    class3_build,
    class3_membership_equivalence,
    class3_variant_build,
)
from ghwlab.errors import FormulaUnavailableError
from ghwlab.hierarchy import (
    butterfly_charsum_intersection,
    butterfly_signed_sum,
    butterfly_special_count,
    check_class1_separator,
    class2_ghw,
    formula_ghw,
    ghw_dual_oracle,
    ghw_support_oracle,
    verify_hierarchy,
)
from ghwlab.linalg import (
    dual,
    enumerate_subspaces,
    gaussian_binomial,
    rref,
    trace_gram,
)


@contextlib.contextmanager
def criterion(number: int, label: str):
    start = time.monotonic()
    try:
        yield
    except BaseException:
        print(f"CRITERION {number} [{label}]: FAIL ({time.monotonic() - start:.1f}s)")
        raise
    print(f"CRITERION {number} [{label}]: PASS ({time.monotonic() - start:.1f}s)")


def test_criterion_1_univariate_18_3_12():
    with criterion(1, "class1 q=3 m=3 k=1 h=2 -> [18,3,12] {12,16,18}"):
        start = time.monotonic()
        dset = class1_build(3, 3, 1, 2)
        code = build_code(dset)
        assert (code.length, code.code_dim) == (18, 3)
        assert min_distance(code) == 12
        report = verify_hierarchy(dset, workers=1, budget=None)
        assert report.ok
        assert report.hierarchy("support") == [12, 16, 18]
        assert report.hierarchy("dual") == [12, 16, 18]
        assert report.hierarchy("formula") == [12, 16, 18]
        assert time.monotonic() - start < 5.0


def test_criterion_2_parameter_mixup_resolution():
    with criterion(2, "class1 mixed-up parameter point flagged, both readings verified"):
        start = time.monotonic()
        # the quoted numbers belong to (q=3, m=4, k=2, h=2)
        quoted = class1_build(3, 4, 2, 2)
        code = build_code(quoted)
        assert (code.length, code.code_dim) == (54, 4)
        report = verify_hierarchy(quoted, methods=("dual", "formula"), budget=None)
        assert report.ok
        assert report.hierarchy("formula") == [36, 48, 52, 54]
        assert report.hierarchy("dual") == [36, 48, 52, 54]
        assert gaussian_binomial(4, 2, 3) == 130  # largest stratum searched

        # the literally stated parameters give a different, smaller code
        literal = class1_build(2, 4, 2, 1)
        code2 = build_code(literal)
        assert (code2.length, code2.code_dim) == (8, 4)
        report2 = verify_hierarchy(literal, budget=None)
        assert report2.ok
        assert report2.hierarchy("formula") == [4, 6, 7, 8]
        assert any("(q=3, m=4, k=2, h=2)" in note for note in report2.notes)
        assert time.monotonic() - start < 5.0


def test_criterion_3_bivariate_family():
    with criterion(3, "class2 (2,3,1,2,1), (3,2,1,2,1), exceptional (2,2,1,2,1)"):
        start = time.monotonic()
        a = class2_build(2, 3, 1, 2, 1)
        ca = build_code(a)
        assert (ca.length, ca.code_dim, min_distance(ca)) == (12, 5, 4)
        ra = verify_hierarchy(a, budget=None)
        assert ra.ok and ra.hierarchy("formula") == [4, 8, 10, 11, 12]

        b = class2_build(3, 2, 1, 2, 1)
        cb = build_code(b)
        assert (cb.length, cb.code_dim, min_distance(cb)) == (36, 4, 18)
        rb = verify_hierarchy(b, methods=("dual", "formula"), budget=None)
        assert rb.ok and rb.hierarchy("formula") == [18, 30, 34, 36]
        rs = verify_hierarchy(b, methods=("support",), budget=None)
        assert rs.hierarchy("support") == [18, 30, 34, 36]

        exc = class2_build(2, 2, 1, 2, 1)
        cexc = build_code(exc)
        assert (cexc.length, cexc.code_dim, min_distance(cexc)) == (4, 3, 2)
        with pytest.raises(FormulaUnavailableError):
            class2_ghw(2, 2, 1, 2, 1, 1)
        rexc = verify_hierarchy(exc, methods=("support", "dual"), budget=None)
        assert rexc.ok and rexc.hierarchy("support") == [2, 3, 4]
        assert time.monotonic() - start < 30.0


def test_criterion_4_butterfly_small():
    with criterion(4, "class3 m=2 -> [4,4,1] {1,2,3,4}; m=3 -> [16,6,6] {6,...,16}"):
        start = time.monotonic()
        for m, shape, expected in (
            (2, (4, 4, 1), [1, 2, 3, 4]),
            (3, (16, 6, 6), [6, 10, 12, 14, 15, 16]),
        ):
            dset = class3_build(m)
            code = build_code(dset)
            assert (code.length, code.code_dim, min_distance(code)) == shape
            report = verify_hierarchy(dset, budget=None)
            assert report.ok
            for method in ("support", "dual", "formula"):
                assert report.hierarchy(method) == expected
        assert time.monotonic() - start < 10.0


def test_criterion_5_butterfly_m4_extrapolation():
    with criterion(5, "class3 m=4 formula vs dual oracle, all r, 4 workers"):
        start = time.monotonic()
        dset = class3_build(4)
        code = build_code(dset)
        assert (code.length, code.code_dim) == (64, 8)
        assert gaussian_binomial(8, 4, 2) == 200787
        report = verify_hierarchy(
            dset, methods=("dual", "formula"), workers=4, budget=None,
            check_samples=2000,
        )
        assert report.ok
        assert report.hierarchy("formula") == [28, 44, 52, 56, 60, 62, 63, 64]
        assert report.hierarchy("dual") == report.hierarchy("formula")
        assert time.monotonic() - start < 600.0


def test_criterion_6_property_suites():
    with criterion(6, "oracle equivalence, bounds, character sums, structural suite"):
        golden = [
            class1_build(3, 3, 1, 2),
            class1_build(3, 4, 2, 2),
            class1_build(2, 4, 2, 1),
            class2_build(2, 3, 1, 2, 1),
            class2_build(3, 2, 1, 2, 1),
            class2_build(2, 2, 1, 2, 1),
            class3_build(2),
            class3_build(3),
        ]
        for dset in golden:
            code = build_code(dset)
            hierarchy = []
            for r in range(1, code.code_dim + 1):
                ds, _ = ghw_support_oracle(code, r)
                dd, _ = ghw_dual_oracle(dset, r)
                assert ds == dd  # oracle equivalence
                hierarchy.append(ds)
            # strict monotonicity and the generalized Singleton bound
            assert all(a < b for a, b in zip(hierarchy, hierarchy[1:]))
            assert all(
                d <= code.length - code.code_dim + r
                for r, d in enumerate(hierarchy, 1)
            )
            if dset.formula_available:
                assert hierarchy == [
                    formula_ghw(dset, r) for r in range(1, code.code_dim + 1)
                ]

        # character-sum identity, exhaustive over every subspace at m = 2, 3
        for m in (2, 3):
            dset = class3_build(m)
            ctx = dset.contexts[0]
            gram = message_gram(dset)
            flat = dset.flat_elements()
            ones = (1,) + (0,) * (m - 1)
            for r in range(1, 2 * m + 1):
                for h in enumerate_subspaces(2 * m, r, 2):
                    hd = dual(h, gram)
                    direct = sum(1 for v in flat if hd.contains(v))
                    assert butterfly_charsum_intersection(ctx, h) == direct
                    # structural bounds alongside
                    assert butterfly_special_count(ctx, h) <= 2 ** (r - 1)
                    s = butterfly_signed_sum(ctx, h)
                    assert -(2**m) <= s <= 2**m
                    if h.contains(ones + ones):
                        assert s == 0

        # separator witness for the univariate family
        for dset in (class1_build(3, 3, 1, 2), class1_build(2, 4, 2, 1),
                     class1_build(3, 4, 2, 2)):
            assert check_class1_separator(dset)["ok"]

        # dual-intersection bound for the bivariate family
        from ghwlab.hierarchy import _dual_count_factory

        for q, m, s, k, l in ((2, 3, 1, 2, 1), (3, 2, 1, 2, 1), (2, 2, 1, 2, 1)):
            dset = class2_build(q, m, s, k, l)
            count = _dual_count_factory(dset)
            for r in range(1, m + k + 1):
                bound = q ** (m + k - r) - max(1, q ** (m + l - r))
                for h in enumerate_subspaces(m + k, r, q):
                    assert count(h) <= bound

        # set-size identities and predicate-form equivalence
        assert len(class1_build(2, 6, 2, 1)) == 2**6 - 2 * 2**2
        assert len(class2_build(2, 4, 2, 2, 1)) == (2**4 - 2**2) * (2**2 - 2)
        for m in (2, 3, 4):
            assert len(class3_build(m)) == 2 ** (2 * m - 2)
            assert class3_membership_equivalence(m)

        # theta-independence under two distinct valid selections
        alt = class1_build(2, 4, 2, 1, thetas=["0011"])
        base = class1_build(2, 4, 2, 1)
        assert base.params["thetas"] != alt.params["thetas"]
        assert [ghw_dual_oracle(alt, r)[0] for r in range(1, 5)] == [
            ghw_dual_oracle(base, r)[0] for r in range(1, 5)
        ]

        # linear-algebra suite
        for n, r, q in ((4, 2, 2), (3, 1, 3), (4, 2, 3)):
            assert sum(1 for _ in enumerate_subspaces(n, r, q)) == gaussian_binomial(n, r, q)
        from ghwlab.field import make_field

        ctx = make_field(2, 4)
        gram4 = trace_gram(ctx)
        for r in range(5):
            for h in enumerate_subspaces(4, r, 2):
                hd = dual(h, gram4)
                assert hd.dim == 4 - r
                assert dual(hd, gram4) == h
        full = [s.basis for s in enumerate_subspaces(4, 2, 2)]
        for chunks in (2, 3, 7):
            pieces = []
            for i in range(chunks):
                pieces.extend(
                    s.basis for s in enumerate_subspaces(4, 2, 2, i, chunks)
                )
            assert pieces == full


def test_criterion_7_sweep_determinism(tmp_path):
    with criterion(7, "two default sweeps byte-identical under --deterministic"):
        out1 = tmp_path / "sweep1.json"
        out2 = tmp_path / "sweep2.json"
        assert cli_main(["sweep", "--deterministic", "--out", str(out1)]) == 0
        assert cli_main(["sweep", "--deterministic", "--out", str(out2)]) == 0
        blob1 = out1.read_bytes()
        assert blob1 == out2.read_bytes()
        data = json.loads(blob1)
        ran = [e for e in data["results"] if "skipped" not in e]
        skipped = [e for e in data["results"] if "skipped" in e]
        assert ran and all(e["ok"] for e in ran)
        assert all(e["required"] > 10**7 for e in skipped)
