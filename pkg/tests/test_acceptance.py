"""Acceptance gate: every verification criterion at its stated tolerance.

Each test runs one criterion exactly (integer/set equality throughout; the
only numeric threshold is the orbit-search latency bound) and prints a
single pass/fail line. Run with ``-s`` to see the
lines; the heavy enumerations are included by default and can be
deselected with ``-m 'not heavy'``.
"""

import time

import pytest

from braidcong import _mutation
from braidcong.suite import (
    check_burau_relations,
    check_generator_transvections,
    check_invariant_lattices,
    check_kernel_words,
    check_level_generation_2power_shadows,
    check_level_generation_shadows,
    check_normal_generator_shadows,
    check_power_certificates,
    check_quotient_ratios,
    check_stabilizer_kernel,
    check_transvection_power_shadows,
    check_triangle_quotients,
    run_full_suite,
)


def _criterion(name, fn):
    t0 = time.perf_counter()
    try:
        details = fn() or {}
        passed = bool(details.pop("_passed", True))
        error = None
    except Exception as exc:  # report, then re-raise through the assert below
        details, passed, error = {}, False, f"{type(exc).__name__}: {exc}"
    dt = time.perf_counter() - t0
    status = "PASS" if passed else "FAIL"
    line = f"[{status}] {name} ({dt:.2f}s)"
    if error:
        line += f" -- {error}"
    print(line)
    assert passed, error or f"{name} failed: {details}"
    return details


def test_burau_relations_exact():
    _criterion("burau-relations", check_burau_relations)


def test_generators_equal_transvections():
    _criterion("generator-transvections", check_generator_transvections)


def test_invariant_lattice_suite():
    _criterion("invariant-lattices", check_invariant_lattices)


def test_kernel_words_and_projection_diagram():
    _criterion("kernel-words", check_kernel_words)


def test_level_generation_shadows():
    d = _criterion("level-generation-shadows", check_level_generation_shadows)
    assert d["(3,2)"] == "closure=8 filter=8"


def test_level_generation_2power_shadows():
    _criterion("level-generation-2power", check_level_generation_2power_shadows)


def test_transvection_power_shadows():
    d = _criterion("transvection-power-shadows", check_transvection_power_shadows)
    assert "1024" in d["(g=2,m=2)"]


def test_stabilizer_kernel_suite():
    d = _criterion("stabilizer-kernel", check_stabilizer_kernel)
    assert d["roundtrips"] == 300


def test_power_certificates_all_combinations():
    d = _criterion("power-certificates", check_power_certificates)
    assert d["certificates"] == 15 * 200
    assert float(d["mean-search-ms"]) < 50.0


def test_triangle_quotient_orders():
    d = _criterion("triangle-quotients", check_triangle_quotients)
    assert (d["m=3"], d["m=4"], d["m=5"]) == (12, 24, 60)


def test_quotient_ratios_default():
    _criterion("quotient-ratios", check_quotient_ratios)


@pytest.mark.heavy
def test_quotient_ratio_heavy():
    d = _criterion(
        "quotient-ratios-heavy", lambda: check_quotient_ratios(heavy=True)
    )
    assert d["(5,3)"] == "3"
    assert d["mod3-image-order"] == 51840


def test_normal_generator_shadows():
    _criterion("normal-generator-shadows", check_normal_generator_shadows)


# -- mutation soundness ------------------------------------------------------
#
# Corrupting any one core formula must cause at least one suite FAIL. Each
# corruption is paired with the smallest subset of checks that must notice.

MUTATION_TARGETS = [
    ("burau_block", {"burau-relations"}),
    ("form_sign", {"generator-transvections"}),
    ("parity_shift", {"power-certificates"}),
    ("certificate_exponent", {"power-certificates"}),
]


@pytest.mark.parametrize("name,subset", MUTATION_TARGETS, ids=[t[0] for t in MUTATION_TARGETS])
def test_mutation_causes_suite_failure(name, subset):
    with _mutation.corrupt(name):
        if "power-certificates" in subset:
            # a fixed battery that includes parity-sensitive targets; the
            # full 3000-certificate run is not needed to detect corruption
            from braidcong.burau import LatticeVector
            from braidcong.errors import BraidcongError
            from braidcong.factorizer import factor_power, verify_certificate

            failures = 0
            for lam in [(0, 0, 1), (1, 0, 2), (2, 0, 1), (1, 1, 1)]:
                try:
                    cert = factor_power(4, 2, LatticeVector.from_c_coords(4, list(lam)))
                    if not verify_certificate(cert).ok:
                        failures += 1
                except BraidcongError:
                    failures += 1
            print(f"[PASS] mutation-{name} detected ({failures} failures)")
            assert failures > 0
        else:
            report = run_full_suite(only=subset)
            status = "PASS" if not report.passed else "FAIL"
            print(f"[{status}] mutation-{name} detected by {subset}")
            assert not report.passed
    # the hook is scoped: everything must pass again afterwards
    report = run_full_suite(only={"burau-relations", "generator-transvections"})
    assert report.passed
