"""The full verification suite.

Each check is a function returning a :class:`CheckResult`; the CLI and the
acceptance tests share these runners. Checks are exact: every comparison
is integer equality or set equality of canonical encodings, never
approximate. A check that raises is reported as FAIL with the error text.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from . import _kernels
from .braid import BraidWord, fold_to_three_strands
from .burau import (
    LatticeVector,
    alternating_vector,
    apply_word,
    form,
    integral_burau,
    project_w_complement,
    split_off_fixed_vector,
    symplectic_basis,
    to_sp,
    transvection,
    unreduced_burau,
)
from .cosets import braid_quotient_order, level_vs_power_ratio, von_dyck_order
from .factorizer import SearchStats, factor_power, verify_certificate
from .finquot import (
    braid_image,
    check_level_generation,
    check_level_generation_2power,
    check_normal_generators,
    check_transvection_power_generation,
    normal_closure,
)
from .stabilizer import (
    StabilizerContext,
    kernel_factorize,
    stabilizer_kernel_element,
)


@dataclass
class CheckResult:
    name: str
    passed: bool
    seconds: float
    details: dict[str, object] = field(default_factory=dict)
    error: str | None = None


def _run(name: str, fn) -> CheckResult:
    t0 = time.perf_counter()
    try:
        details = fn() or {}
        passed = bool(details.pop("_passed", True))
        return CheckResult(name, passed, time.perf_counter() - t0, details)
    except Exception as exc:  # any crash inside a check is a FAIL, not an abort
        return CheckResult(
            name, False, time.perf_counter() - t0, {}, f"{type(exc).__name__}: {exc}"
        )


# -- individual checks -----------------------------------------------------


def check_burau_relations() -> dict:
    """Both braid relations hold exactly over the Laurent ring, n <= 6."""
    count = 0
    for n in range(2, 7):
        for i in range(1, n - 1):
            a = unreduced_burau(BraidWord.from_ints(n, [i, i + 1, i]))
            b = unreduced_burau(BraidWord.from_ints(n, [i + 1, i, i + 1]))
            assert a == b, f"adjacent relation failed at n={n}, i={i}"
            count += 1
        for i in range(1, n):
            for j in range(i + 2, n):
                a = unreduced_burau(BraidWord.from_ints(n, [i, j]))
                b = unreduced_burau(BraidWord.from_ints(n, [j, i]))
                assert a == b, f"commuting relation failed at n={n}, ({i},{j})"
                count += 1
        w = BraidWord.from_ints(n, [1, -1])
        assert unreduced_burau(w) == unreduced_burau(BraidWord(n))
    return {"relations-checked": count}


def check_generator_transvections() -> dict:
    """The three routes to a generator image agree exactly, n <= 8."""
    count = 0
    for n in range(2, 9):
        for i in range(1, n):
            g = BraidWord.generator(n, i)
            via_rows = integral_burau(g)
            via_form = transvection(LatticeVector.c(n, i))
            via_laurent = unreduced_burau(g).eval_at(-1)
            assert via_rows == via_form, f"transvection mismatch n={n} i={i}"
            assert via_rows == via_laurent, f"laurent mismatch n={n} i={i}"
            count += 1
    return {"generators-checked": count}


def _random_word(rng: random.Random, n: int, length: int) -> BraidWord:
    return BraidWord.from_ints(
        n, [rng.choice([1, -1]) * rng.randint(1, n - 1) for _ in range(length)]
    )


def check_invariant_lattices(seed: int = 0) -> dict:
    """Fixed vector, lattice invariance, odd/even decompositions, and form
    preservation under 100 random words per strand count."""
    rng = random.Random(seed)
    for n in range(3, 7):
        w = alternating_vector(n)
        for _ in range(100):
            g = _random_word(rng, n, rng.randint(1, 25))
            assert apply_word(g, w) == w, "alternating vector moved"
            x = LatticeVector.from_c_coords(
                n, [rng.randint(-4, 4) for _ in range(n - 1)]
            )
            gx = apply_word(g, x)
            assert gx.coord_sum() == 0, "zero-sum lattice not preserved"
            u = LatticeVector(tuple(rng.randint(-4, 4) for _ in range(n)))
            v = LatticeVector(tuple(rng.randint(-4, 4) for _ in range(n)))
            assert form(apply_word(g, u), apply_word(g, v)) == form(u, v)
        if n % 2 == 1:
            for _ in range(50):
                v = LatticeVector(tuple(rng.randint(-9, 9) for _ in range(n)))
                vp, k = split_off_fixed_vector(v)
                assert vp.coord_sum() == 0
                assert vp + w.scale(k) == v, "decomposition did not reassemble"
        else:
            for i in range(1, n):
                assert form(LatticeVector.c(n, i), w) == 0
            for _ in range(25):
                v = LatticeVector(tuple(rng.randint(-9, 9) for _ in range(n)))
                if form(v, w) == 0:
                    assert v.coord_sum() == 0, "w-perp exceeded the zero-sum lattice"
                else:
                    assert v.coord_sum() != 0
    # conjugation transport: rho(g) T_x rho(g)^-1 = T_{rho(g) x}
    for n in (3, 4, 5):
        for _ in range(20):
            g = _random_word(rng, n, 12)
            x = LatticeVector.from_c_coords(
                n, [rng.randint(-3, 3) for _ in range(n - 1)]
            )
            rho = integral_burau(g)
            lhs = rho * transvection(x) * integral_burau(g.inverse())
            assert lhs == transvection(apply_word(g, x))
    return {"strand-counts": "3..6"}


def check_kernel_words() -> dict:
    """The standard kernel words have identity image, and the 4-to-3 strand
    projection diagram commutes on generators."""
    assert integral_burau(BraidWord.parse("3: 1 2") ** 6).is_identity()
    assert integral_burau(BraidWord.parse("4: 1 2") ** 6).is_identity()
    assert integral_burau(BraidWord.parse("5: 1 2 3 4") ** 10).is_identity()
    basis3 = symplectic_basis(3)
    for i in (1, 2, 3):
        g4 = BraidWord.generator(4, i)
        left = project_w_complement(integral_burau(g4))
        right = to_sp(integral_burau(fold_to_three_strands(g4)), basis3)
        assert left == right, f"projection diagram failed on generator {i}"
    assert project_w_complement(
        integral_burau(BraidWord.generator(4, 3))
    ) == project_w_complement(integral_burau(BraidWord.generator(4, 1)))
    return {"kernel-words": 3}


def check_level_generation_shadows(
    cap: int | None = None, heavy: bool = False
) -> dict:
    pairs = [(3, 2), (3, 3), (3, 4), (4, 2), (5, 2)]
    details: dict[str, object] = {}
    ok = True
    for n, m in pairs:
        r = check_level_generation(n, m, cap)
        details[f"({n},{m})"] = (
            f"closure={r.fields['closure-order']} filter={r.fields['filter-order']}"
        )
        ok = ok and r.passed
        if (n, m) == (3, 2):
            assert r.fields["closure-order"] == 8, "expected both orders 8"
    if heavy:
        # deeper moduli (4m), where the level-2m part is joined explicitly
        for n, m in [(3, 2), (3, 3), (4, 2)]:
            r = check_level_generation(n, m, cap, modulus_factor=4)
            details[f"({n},{m}) mod {4 * m}"] = (
                f"closure={r.fields['closure-order']} "
                f"filter={r.fields['filter-order']}"
            )
            ok = ok and r.passed
    return {"_passed": ok, **details}


def check_level_generation_2power_shadows(cap: int | None = None) -> dict:
    pairs = [(3, 1), (3, 2), (4, 1)]
    details: dict[str, object] = {}
    ok = True
    for n, r_exp in pairs:
        r = check_level_generation_2power(n, r_exp, cap)
        details[f"(n={n},r={r_exp})"] = (
            f"closure={r.fields['closure-order']} filter={r.fields['filter-order']}"
        )
        ok = ok and r.passed
    return {"_passed": ok, **details}


def check_transvection_power_shadows(cap: int | None = None) -> dict:
    details: dict[str, object] = {}
    ok = True
    r = check_transvection_power_generation(1, 2, cap)
    ok = ok and r.passed and r.fields["filter-order"] == 8
    details["(g=1,m=2)"] = f"filter={r.fields['filter-order']} (expect 8)"
    r = check_transvection_power_generation(1, 3, cap)
    mod6_kernel = 144 // 24  # |SL2(Z/6)| / |SL2(Z/3)|
    ok = ok and r.passed and r.fields["filter-order"] == mod6_kernel
    details["(g=1,m=3)"] = f"filter={r.fields['filter-order']} (expect {mod6_kernel})"
    r = check_transvection_power_generation(2, 2, cap)
    ok = ok and r.passed and r.fields["filter-order"] == 1024
    details["(g=2,m=2)"] = f"filter={r.fields['filter-order']} (expect 1024 = 2^10)"
    return {"_passed": ok, **details}


def check_stabilizer_kernel(seed: int = 0) -> dict:
    """S_x postconditions, factorization round-trips, displacement
    injectivity, and two-step nilpotency, at genus 2."""
    rng = random.Random(seed)
    span = [(1, 0, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]  # orthogonal to w = a1
    rounds = 0
    for m in (1, 2, 3):
        ctx = StabilizerContext.standard(2, m)
        for _ in range(100):
            x = tuple(
                sum(rng.randint(-3, 3) * b[i] for b in span) for i in range(4)
            )
            s = stabilizer_kernel_element(ctx, x)
            assert s.apply(ctx.w) == ctx.w
            assert all(
                (v - (1 if i == j else 0)) % m == 0
                for i, row in enumerate(s.rows)
                for j, v in enumerate(row)
            )
            disp = tuple(a - b for a, b in zip(s.apply(ctx.v), ctx.v))
            assert disp == tuple(m * xi for xi in x)
            cert = kernel_factorize(ctx, s)
            assert cert.product(ctx.gram) == s
            rounds += 1
    # displacement injectivity: same displacement => same matrix
    ctx = StabilizerContext.standard(2, 2)
    for _ in range(20):
        x = tuple(sum(rng.randint(-2, 2) * b[i] for b in span) for i in range(4))
        s1 = stabilizer_kernel_element(ctx, x)
        s2 = stabilizer_kernel_element(ctx, tuple(x))
        assert s1 == s2
    # nilpotency: [S_x, S_y] is central in the kernel and a power of T_w^m
    elems = []
    for _ in range(4):
        x = tuple(sum(rng.randint(-2, 2) * b[i] for b in span) for i in range(4))
        elems.append(stabilizer_kernel_element(ctx, x))
    for a in elems:
        for b in elems:
            comm = a * b * a.inverse() * b.inverse()
            cert = kernel_factorize(ctx, comm)
            assert all(f.vector == ctx.w for f in cert.factors), (
                "commutator is not a power of the w-transvection"
            )
            for c in elems:
                assert comm * c == c * comm, "commutator is not central"
    return {"roundtrips": rounds}


def certificate_shadow_ambients() -> list[tuple[int, int]]:
    """(n, m) pairs whose mod-2m closure fits the default budget."""
    return [(n, m) for n in (2, 3, 4, 5) for m in (1, 2)]


def check_power_certificates(
    seed: int = 0, trials: int = 200, node_budget: int = 10**6
) -> dict:
    """Certificates for 200 random targets per (n, m); each verifies
    exactly, orbit searches stay fast, and for small (n, m) every factor's
    mod-2m image lies in the normal closure of the half-twist power."""
    rng = random.Random(seed)
    stats = SearchStats()
    shadow_pairs = set(certificate_shadow_ambients())
    produced = 0
    shadow_checked = 0
    for n in (2, 3, 4, 5, 6):
        for m in (1, 2, 3):
            shadow = None
            if (n, m) in shadow_pairs:
                ell = 2 * m
                ambient = braid_image(n, ell)
                seedmat = integral_burau(
                    BraidWord.generator(n, 1) ** m
                ).reduce_mod(ell)
                shadow = (ell, normal_closure(ambient, [seedmat]).encodings())
            for trial in range(trials):
                lam = [rng.randint(-5, 5) for _ in range(n - 1)]
                x = LatticeVector.from_c_coords(n, lam)
                cert = factor_power(n, m, x, node_budget, seed, stats)
                res = verify_certificate(cert)
                assert res.ok, res.reason
                produced += 1
                if shadow is not None:
                    ell, closure_set = shadow
                    acc = None
                    for f in cert.factors:
                        img = f.matrix_mod(ell)
                        assert img.encode() in closure_set, (
                            "factor image left the closure"
                        )
                        acc = img if acc is None else acc * img
                    if acc is not None:
                        assert acc.is_identity(), (
                            "certificate product is not trivial mod 2m"
                        )
                    shadow_checked += 1
    mean_ms = stats.mean_ms()
    assert mean_ms < 50.0, f"orbit searches too slow: {mean_ms:.1f} ms"
    return {
        "certificates": produced,
        "shadow-checked": shadow_checked,
        "orbit-searches": stats.searches,
        "mean-search-ms": f"{mean_ms:.2f}",
    }


def check_triangle_quotients() -> dict:
    details = {}
    for m, expect in [(3, 12), (4, 24), (5, 60)]:
        o = von_dyck_order(m)
        assert o == expect, f"triangle order {o} != {expect}"
        z = BraidWord.parse("3: 1 2") ** 3
        o2 = braid_quotient_order(3, m, extra=(z,))
        assert o2 == expect, f"central quotient order {o2} != {expect}"
        details[f"m={m}"] = o
    return details


def check_quotient_ratios(heavy: bool = False) -> dict:
    details = {}
    for (n, m), expect in [((3, 3), 1), ((3, 4), 2), ((3, 5), 5)]:
        r = level_vs_power_ratio(n, m)
        assert r == expect, f"ratio({n},{m}) = {r}, expected {expect}"
        details[f"({n},{m})"] = str(r)
    if heavy:
        denom = braid_image(5, 3).order
        assert denom == 51840, f"mod-3 image order {denom} != 51840"
        r = level_vs_power_ratio(5, 3)
        assert r == 3, f"ratio(5,3) = {r}, expected 3"
        details["(5,3)"] = str(r)
        details["mod3-image-order"] = denom
    return details


def check_normal_generator_shadows(cap: int | None = None) -> dict:
    details: dict[str, object] = {}
    ok = True
    for m in range(1, 7):
        r = check_normal_generators(2, m, extra_words=[], cap=cap)
        ok = ok and r.passed
    details["n=2,m<=6"] = "PASS" if ok else "FAIL"
    for m in range(1, 5):
        r = check_normal_generators(3, m, cap=cap)
        ok = ok and r.passed and r.fields.get("extra0-integral-identity", True)
        details[f"n=3,m={m}"] = "PASS" if r.passed else "FAIL"
    r = check_normal_generators(5, 2, cap=cap)
    ok = ok and r.passed
    ok = ok and r.fields["extra0-integral-identity"]
    ok = ok and r.fields["extra1-integral-identity"]
    details["n=5,m=2"] = "PASS" if r.passed else "FAIL"
    return {"_passed": ok, **details}


# -- registry ---------------------------------------------------------------

CHECKS: list[tuple[str, object, bool]] = [
    ("burau-relations", check_burau_relations, False),
    ("generator-transvections", check_generator_transvections, False),
    ("invariant-lattices", check_invariant_lattices, False),
    ("kernel-words", check_kernel_words, False),
    ("level-generation-shadows", check_level_generation_shadows, True),
    ("level-generation-2power", check_level_generation_2power_shadows, False),
    ("transvection-power-shadows", check_transvection_power_shadows, False),
    ("stabilizer-kernel", check_stabilizer_kernel, False),
    ("power-certificates", check_power_certificates, False),
    ("triangle-quotients", check_triangle_quotients, False),
    ("quotient-ratios", check_quotient_ratios, True),  # heavy flag widens it
    ("normal-generator-shadows", check_normal_generator_shadows, False),
]


@dataclass
class SuiteReport:
    results: list[CheckResult]
    heavy: bool
    seed: int

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def render(self, include_times: bool = True) -> str:
        lines = [
            "braidcong verification suite",
            f"seed: {self.seed}",
            f"heavy: {'on' if self.heavy else 'off'}",
            f"kernel-backend: {_kernels.BACKEND}",
            "",
        ]
        width = max(len(r.name) for r in self.results) + 2
        header = f"{'check'.ljust(width)} status"
        if include_times:
            header += "   seconds"
        lines.append(header)
        for r in self.results:
            row = f"{r.name.ljust(width)} {'PASS' if r.passed else 'FAIL'}"
            if include_times:
                row += f"   {r.seconds:8.2f}"
            lines.append(row)
            if r.error:
                lines.append(f"    error: {r.error}")
            for k, v in r.details.items():
                if not include_times and k.endswith(("-ms", "-seconds")):
                    continue
                lines.append(f"    {k}: {v}")
        lines.append("")
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"


def run_full_suite(
    heavy: bool = False, seed: int = 0, only: set[str] | None = None
) -> SuiteReport:
    if only is not None:
        known = {name for name, _, _ in CHECKS}
        unknown = only - known
        if unknown:
            raise ValueError(f"unknown checks: {sorted(unknown)}")
    results = []
    for name, fn, takes_heavy in CHECKS:
        if only is not None and name not in only:
            continue
        if name in ("invariant-lattices", "stabilizer-kernel"):
            results.append(_run(name, lambda f=fn: f(seed=seed)))
        elif name == "power-certificates":
            results.append(_run(name, lambda f=fn: f(seed=seed)))
        elif takes_heavy:
            results.append(_run(name, lambda f=fn: f(heavy=heavy)))
        else:
            results.append(_run(name, fn))
    return SuiteReport(results, heavy, seed)
