"""Command-line entry point.

Exit codes: 0 for success or PASS, 1 for a verified FAIL (a check or
certificate that is genuinely false), 2 for budget exhaustion or usage
errors. Reports are plain structured text with a stable field order so
they can be golden-tested; timing fields are confined to clearly marked
columns.
"""

from __future__ import annotations

import argparse
import sys

from .braid import BraidWord
from .burau import LatticeVector, integral_burau, unreduced_burau
from .cosets import (
    braid_presentation,
    level_vs_power_ratio,
    parse_presentation,
    todd_coxeter,
    von_dyck_presentation,
)
from .errors import BudgetExceeded, CertificateError
from .exactmat import format_matrix, parse_matrix
from .factorizer import (
    FactorCertificate,
    factor_power,
    verify_certificate,
)
from .finquot import (
    braid_image,
    check_level_generation,
    check_level_generation_2power,
    check_normal_generators,
    check_transvection_power_generation,
    congruence_filter,
    normal_closure,
)
from .stabilizer import StabilizerContext, kernel_factorize
from .suite import run_full_suite


def _word_from_args(args, attr: str = "word") -> BraidWord:
    raw = getattr(args, attr)
    strands = getattr(args, "n", None)
    return BraidWord.parse(raw, strands)


def _print_laurent(m) -> None:
    print(f"{m.n} laurent")
    for row in m.rows:
        print("\t".join(str(e) for e in row))


def cmd_burau_matrix(args) -> int:
    w = _word_from_args(args)
    if args.laurent:
        _print_laurent(unreduced_burau(w))
        return 0
    m = integral_burau(w)
    if args.mod:
        print(format_matrix(m.reduce_mod(args.mod)), end="")
    else:
        print(format_matrix(m), end="")
    return 0


def cmd_spcong_kernel_factorize(args) -> int:
    with open(args.matrix) as fh:
        m = parse_matrix(fh.read())
    ctx = StabilizerContext.standard(args.g, args.m)
    cert = kernel_factorize(ctx, m)
    print(f"{2 * args.g} {args.m}")
    for f in cert.factors:
        print(f"{f.exponent} : {','.join(str(v) for v in f.vector)}")
    return 0


def _braid_gens(args):
    return braid_image(args.n, args.mod, args.cap)


def cmd_finquot_enum(args) -> int:
    enum = _braid_gens(args)
    print(f"n: {args.n}")
    print(f"modulus: {args.mod}")
    print(f"order: {enum.order}")
    return 0


def cmd_finquot_closure(args) -> int:
    enum = _braid_gens(args)
    seeds = [
        integral_burau(BraidWord.parse(w, args.n)).reduce_mod(args.mod)
        for w in args.word
    ]
    closure = normal_closure(enum, seeds, cap=args.cap)
    print(f"n: {args.n}")
    print(f"modulus: {args.mod}")
    print(f"ambient-order: {enum.order}")
    print(f"closure-order: {closure.order}")
    return 0


def cmd_finquot_filter(args) -> int:
    enum = _braid_gens(args)
    filt = congruence_filter(enum, args.m)
    print(f"n: {args.n}")
    print(f"modulus: {args.mod}")
    print(f"m: {args.m}")
    print(f"ambient-order: {enum.order}")
    print(f"filter-order: {filt.order}")
    return 0


def _finish_check(report) -> int:
    print(report.render(), end="")
    return 0 if report.passed else 1


def cmd_check_thm41(args) -> int:
    return _finish_check(
        check_level_generation(args.n, args.m, args.cap, args.mod_factor)
    )


def cmd_check_lemma42(args) -> int:
    return _finish_check(check_level_generation_2power(args.n, args.r, args.cap))


def cmd_check_mennicke(args) -> int:
    return _finish_check(
        check_transvection_power_generation(
            args.g, args.m, args.cap, orthogonal_to_w=args.variant == "b"
        )
    )


def cmd_check_corollary(args) -> int:
    extra = [BraidWord.parse(w, args.n) for w in args.word] if args.word else None
    return _finish_check(check_normal_generators(args.n, args.m, extra, args.cap))


def cmd_cosets_order(args) -> int:
    if args.preset == "braid":
        extra = tuple(BraidWord.parse(w, args.n) for w in args.relator)
        p = braid_presentation(args.n, args.m, extra)
    elif args.preset == "vondyck":
        p = von_dyck_presentation(args.m)
    elif args.preset == "file":
        if not args.path or not args.gens:
            raise ValueError("--preset file needs --path and --gens")
        with open(args.path) as fh:
            p = parse_presentation(fh.read(), args.gens)
    else:
        raise ValueError(f"unknown preset {args.preset!r}")
    table = todd_coxeter(p, args.cap, args.strategy)
    print(f"preset: {args.preset}")
    print(f"order: {table.order}")
    print(f"rows-defined: {table.rows_defined}")
    return 0


def cmd_cosets_ratio(args) -> int:
    ratio = level_vs_power_ratio(args.n, args.m, args.cap)
    print(f"n: {args.n}")
    print(f"m: {args.m}")
    print(f"ratio: {ratio}")
    return 0


def cmd_factorize(args) -> int:
    coords = [int(tok) for tok in args.x.split(",")]
    x = LatticeVector.from_c_coords(args.n, coords)
    cert = factor_power(args.n, args.m, x, args.budget, args.seed)
    text = cert.serialize()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(f"factors: {len(cert.factors)}")
        print(f"written: {args.out}")
    else:
        print(text, end="")
    return 0


def cmd_verify(args) -> int:
    with open(args.cert) as fh:
        cert = FactorCertificate.parse(fh.read())
    result = verify_certificate(cert)
    print(f"factors: {len(cert.factors)}")
    print(f"status: {'PASS' if result.ok else 'FAIL'}")
    if not result.ok:
        print(f"reason: {result.reason}")
    return 0 if result.ok else 1


def cmd_suite(args) -> int:
    only = set(args.only.split(",")) if args.only else None
    report = run_full_suite(heavy=args.heavy, seed=args.seed, only=only)
    print(report.render(include_times=not args.no_times), end="")
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="braidcong",
        description="Integral Burau representations and congruence subgroup "
        "computations for braid groups",
    )
    sub = top.add_subparsers(dest="command", required=True)

    burau = sub.add_parser("burau", help="representation matrices")
    burau_sub = burau.add_subparsers(dest="subcommand", required=True)
    bm = burau_sub.add_parser("matrix", help="print the image of a braid word")
    bm.add_argument("--n", type=int, help="strand count (optional if the word carries it)")
    bm.add_argument("--word", required=True, help="braid word, e.g. '4: 1 2 -3 1'")
    group = bm.add_mutually_exclusive_group()
    group.add_argument("--mod", type=int, help="reduce the integral image mod L")
    group.add_argument("--laurent", action="store_true", help="print the Laurent matrix")
    bm.set_defaults(fn=cmd_burau_matrix)

    spc = sub.add_parser("spcong", help="stabilizer kernel tools")
    spc_sub = spc.add_subparsers(dest="subcommand", required=True)
    kf = spc_sub.add_parser("kernel-factorize", help="factor a kernel element")
    kf.add_argument("--g", type=int, required=True, help="genus (rank 2g)")
    kf.add_argument("--m", type=int, required=True, help="level")
    kf.add_argument("--matrix", required=True, help="matrix file (text format)")
    kf.set_defaults(fn=cmd_spcong_kernel_factorize)

    fq = sub.add_parser("finquot", help="finite quotient enumeration and checks")
    fq_sub = fq.add_subparsers(dest="subcommand", required=True)

    def _fq(name, fn):
        p = fq_sub.add_parser(name)
        p.add_argument("--cap", type=int, help="element cap")
        p.set_defaults(fn=fn)
        return p

    p = _fq("enum", cmd_finquot_enum)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mod", type=int, required=True)
    p = _fq("closure", cmd_finquot_closure)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mod", type=int, required=True)
    p.add_argument("--word", action="append", default=[], required=True)
    p = _fq("filter", cmd_finquot_filter)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mod", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p = _fq("check-thm41", cmd_check_thm41)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--mod-factor", type=int, default=2,
                   help="verify mod FACTOR*m (default 2; 4 adds the deeper shadow)")
    p = _fq("check-lemma42", cmd_check_lemma42)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p = _fq("check-mennicke", cmd_check_mennicke)
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--variant", choices=["a", "b"], default="a")
    p = _fq("check-corollary", cmd_check_corollary)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--word", action="append", default=None,
                   help="extra normal generators (default: the standard kernel words)")

    cosets = sub.add_parser("cosets", help="coset enumeration")
    cosets_sub = cosets.add_subparsers(dest="subcommand", required=True)
    co = cosets_sub.add_parser("order", help="order of a finitely presented group")
    co.add_argument("--preset", choices=["braid", "vondyck", "file"], required=True)
    co.add_argument("--n", type=int, help="strands (braid preset)")
    co.add_argument("--m", type=int, help="power (braid/vondyck presets)")
    co.add_argument("--relator", action="append", default=[],
                    help="extra relator as a braid word (braid preset)")
    co.add_argument("--gens", type=int, help="generator count (file preset)")
    co.add_argument("--path", help="presentation file (file preset)")
    co.add_argument("--cap", type=int, help="coset cap")
    co.add_argument("--strategy", choices=["felsch", "hlt"], default="felsch")
    co.set_defaults(fn=cmd_cosets_order)
    cr = cosets_sub.add_parser("ratio", help="power-quotient vs level-image ratio")
    cr.add_argument("--n", type=int, required=True)
    cr.add_argument("--m", type=int, required=True)
    cr.add_argument("--cap", type=int)
    cr.set_defaults(fn=cmd_cosets_ratio)

    fz = sub.add_parser("factorize", help="produce a power certificate")
    fz.add_argument("--n", type=int, required=True)
    fz.add_argument("--m", type=int, required=True)
    fz.add_argument("--x", required=True,
                    help="target vector in c-coordinates, e.g. '1,0,-2'")
    fz.add_argument("--seed", type=int, default=0)
    fz.add_argument("--budget", type=int, default=10**6, help="search node budget")
    fz.add_argument("--out", help="certificate output path")
    fz.set_defaults(fn=cmd_factorize)

    vf = sub.add_parser("verify", help="verify a power certificate")
    vf.add_argument("--cert", required=True)
    vf.set_defaults(fn=cmd_verify)

    st = sub.add_parser("suite", help="run the full verification suite")
    st.add_argument("--heavy", action="store_true",
                    help="include the large coset/enumeration cases")
    st.add_argument("--seed", type=int, default=0)
    st.add_argument("--only", help="comma-separated check names")
    st.add_argument("--no-times", action="store_true",
                    help="omit timing columns (for byte-identical reports)")
    st.set_defaults(fn=cmd_suite)

    return top


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 2
    except CertificateError as exc:
        print(f"certificate failure: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
