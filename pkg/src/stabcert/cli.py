"""Command-line entry point: verify, verify-all, optimize, recursion-sim, report.

Exit-code contract (scriptable CI usage):
    0  all exact checks pass
    1  an exact check failed
    2  usage or configuration error
    3  strict mode and the certificate contains discrepancies
    4  search finished without a certified result

Certificates are written atomically by a single writer; report rendering is
read-only and never alters numeric fields.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import bubble, iteration, optimize, published
from .certificate import CertCheck, Certificate, PublishedTarget
from .config import ConfigError, RunConfig, load_config
from .curvature import ParamSet, certify_builtin_row, epsilon_of
from .rational import rational_to_str

EXIT_PASS = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_STRICT_DISCREPANCY = 3
EXIT_UNCERTIFIED = 4


def exit_code_for(cert: Certificate, strict: bool) -> int:
    """Pure mapping from certificate content to an exit code."""
    if cert.overall_status == "failed":
        return EXIT_CHECK_FAILED
    if strict and cert.discrepancies:
        return EXIT_STRICT_DISCREPANCY
    return EXIT_PASS


def _apply_overrides(cfg: RunConfig, args) -> RunConfig:
    if getattr(args, "cms", None) is not None:
        cfg.c_ms = args.cms
    if getattr(args, "radius", None) is not None:
        cfg.radius = args.radius
    if getattr(args, "seed", None) is not None:
        cfg.seed = args.seed
    if getattr(args, "budget", None) is not None:
        cfg.budget = args.budget
    cfg.__post_init__()  # re-validate after overrides
    return cfg


def build_row_certificate(n: int, cfg: RunConfig) -> Certificate:
    """Full per-row pipeline: curvature checks plus the bubble coefficient chain."""
    cert = certify_builtin_row(
        n, sample_count=cfg.curvature_samples, linearity_samples=cfg.linearity_samples, seed=cfg.seed
    )
    cert.environment.update(cfg.environment())
    params = ParamSet.published_row(n)
    eps = epsilon_of(params).epsilon
    _, checks, targets, flags, values = bubble.certify_chain(
        params,
        eps,
        quadform_samples=cfg.quadform_samples,
        barrier_samples=cfg.barrier_samples,
        dps=cfg.float_precision_digits,
        seed=cfg.seed,
    )
    for check in checks:
        cert.add_check(check)
    for target in targets:
        cert.add_target(target)
    cert.flags.extend(flags)
    cert.values.update(values)
    return cert


def cmd_verify(args) -> int:
    if args.n not in published.SUPPORTED_N:
        print(f"error: no built-in parameter row for n = {args.n}", file=sys.stderr)
        return EXIT_USAGE
    try:
        cfg = _apply_overrides(load_config(args.config), args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    cert = build_row_certificate(args.n, cfg)
    out = Path(args.out) if args.out else cfg.out_dir / f"certificate_n{args.n}.json"
    cert.write(out)
    print(f"wrote {out} ({cert.overall_status}; {len(cert.discrepancies)} discrepancies)")
    return exit_code_for(cert, args.strict)


def _delta1_checks(cert: Certificate) -> None:
    for n in published.SUPPORTED_N:
        value = iteration.delta1_of(n)
        quoted = published.DELTA1[n]
        cert.add_target(PublishedTarget(f"delta1(n={n})", rational_to_str(quoted), rational_to_str(value), value == quoted))
    collapse_ok = True
    for n in range(3, 13):
        want = Fraction((n - 2) ** 2, 4 * (n - 1))
        if iteration.collapse_sqrt(n) != want:
            collapse_ok = False
    cert.add_check(
        CertCheck(
            "critical_radicand_perfect_square",
            "exact",
            "pass" if collapse_ok else "fail",
            detail="sqrt(delta_c(delta_c-(n-2)/n)) = (n-2)^2/(4(n-1)) for n=3..12",
        )
    )
    exponents_ok = True
    for n in published.SUPPORTED_N:
        dc = iteration.critical_delta_threshold(n)
        res = iteration.critical_delta_exponent(n, dc + Fraction(1, 1000))
        if not res.p_exceeds_n:
            exponents_ok = False
    cert.add_check(
        CertCheck(
            "exponent_exceeds_dimension_above_threshold",
            "exact",
            "pass" if exponents_ok else "fail",
            detail="p = 4k+2 > n at delta = delta_c + 1/1000",
        )
    )


def cmd_verify_all(args) -> int:
    try:
        cfg = _apply_overrides(load_config(args.config), args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    combined = Certificate(n=0, params={"rows": ",".join(str(n) for n in published.SUPPORTED_N)})
    combined.environment.update(cfg.environment())
    for n in published.SUPPORTED_N:
        row_cert = build_row_certificate(n, cfg)
        combined.values[f"row_n{n}"] = row_cert.to_jsonable()
        combined.add_check(
            CertCheck(
                f"row_n{n}_overall",
                "exact",
                "pass" if row_cert.overall_status == "passed" else "fail",
                detail=f"{len(row_cert.discrepancies)} discrepancies",
            )
        )
        for target in row_cert.published_targets:
            combined.add_target(
                PublishedTarget(f"n={n}:{target.quantity}", target.quoted, target.computed, target.match)
            )
        for flag in row_cert.flags:
            combined.add_flag(f"n={n}:{flag['name']}", flag["detail"])
    _delta1_checks(combined)
    # iteration constants on a configured (q, delta) grid: epsilon1 plus the
    # dyadic constants (C_MS, R) and the Caccioppoli constants (s, s1)
    grid = []
    for n in published.SUPPORTED_N:
        delta = Fraction(1)
        q = (Fraction(n - 2, n) + delta) / 2
        dg = iteration.degiorgi_constants(n, delta, q, cfg.c_ms, cfg.radius, dps=cfg.float_precision_digits)
        cacc = iteration.caccioppoli_constants(n, delta, delta / 2, cfg.s, cfg.s1)
        grid.append(
            {
                "n": n,
                "delta": rational_to_str(delta),
                "q": rational_to_str(q),
                "epsilon1": dg.epsilon1.to_jsonable(),
                "C": str(dg.C),
                "C0": dg.C0.to_jsonable(),
                "caccioppoli_C1": rational_to_str(cacc.c1),
                "caccioppoli_C2": rational_to_str(cacc.c2_exact)
                if cacc.c2_exact is not None
                else cacc.c2_approx.to_jsonable(),
                "p": rational_to_str(cacc.p),
                "both_branches_positive": cacc.both_branches_positive,
            }
        )
    combined.values["iteration_grid"] = grid
    out = Path(args.out) if args.out else cfg.out_dir / "certificate_all.json"
    combined.write(out)
    print(f"wrote {out} ({combined.overall_status}; {len(combined.discrepancies)} discrepancies)")
    return exit_code_for(combined, args.strict)


def result_certificate(result: optimize.SearchResult, cfg: RunConfig) -> Certificate:
    """Certificate for one certified search result; re-verifiable from params alone."""
    assert result.best_params is not None and result.constraint_report is not None
    cert = Certificate(n=result.n, params=result.best_params.as_strings())
    cert.environment.update(cfg.environment())
    cert.environment["objective"] = result.objective
    cert.environment["evaluations_used"] = result.evaluations_used
    for entry in result.constraint_report.entries:
        cert.add_check(
            CertCheck(
                entry.name,
                "exact",
                "pass" if entry.satisfied else "fail",
                margin=rational_to_str(entry.margin) if entry.margin is not None else None,
                detail=entry.detail or entry.requirement,
            )
        )
    if result.epsilon is not None:
        cert.values["epsilon"] = rational_to_str(result.epsilon)
    if result.delta0 is not None:
        cert.values["delta0"] = rational_to_str(result.delta0)
    if result.improvement_vs_published is not None:
        cert.values["improvement_vs_published"] = rational_to_str(result.improvement_vs_published)
    return cert


def cmd_optimize(args) -> int:
    try:
        cfg = _apply_overrides(load_config(args.config), args)
        search_cfg = optimize.SearchConfig(
            n=args.n,
            objective="maximize_epsilon" if args.objective == "epsilon" else "minimize_delta0",
            budget=cfg.budget,
            denominator_bound=args.denominator_bound or cfg.denominator_bound,
            seeds=(cfg.seed, cfg.seed + 1, cfg.seed + 2, cfg.seed + 3),
        )
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.n not in published.SUPPORTED_N and args.n != 6:
        print(f"error: n = {args.n} not supported (3, 4, 5 or the open probe 6)", file=sys.stderr)
        return EXIT_USAGE
    if search_cfg.objective == "maximize_epsilon":
        try:
            delta0 = Fraction(args.delta0) if args.delta0 else published.DELTA0.get(args.n)
        except (ValueError, ZeroDivisionError) as exc:
            print(f"error: bad --delta0: {exc}", file=sys.stderr)
            return EXIT_USAGE
        if delta0 is None:
            print("error: --delta0 required for the epsilon objective at this n", file=sys.stderr)
            return EXIT_USAGE
        result = optimize.maximize_epsilon(search_cfg, delta0)
    else:
        result = optimize.minimize_delta0(search_cfg)

    payload = {
        "n": result.n,
        "objective": result.objective,
        "certified": result.certified,
        "delta0": rational_to_str(result.delta0) if result.delta0 is not None else None,
        "epsilon": rational_to_str(result.epsilon) if result.epsilon is not None else None,
        "params": result.best_params.as_strings() if result.best_params else None,
        "improvement_vs_published": rational_to_str(result.improvement_vs_published)
        if result.improvement_vs_published is not None
        else None,
        "evaluations_used": result.evaluations_used,
        "notes": result.notes,
        "margin_profile": result.best_margin_profile,
    }
    import json

    out = Path(args.out) if args.out else cfg.out_dir / f"search_n{args.n}_{args.objective}.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    tmp = out.with_suffix(out.suffix + ".tmp")
    tmp.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    tmp.replace(out)
    print(f"wrote {out}")
    log_line = {k: payload[k] for k in ("n", "objective", "certified", "delta0", "epsilon", "evaluations_used")}
    with open(out.parent / "search_log.jsonl", "a", encoding="utf-8") as fh:
        fh.write(json.dumps(log_line) + "\n")
    if result.certified and result.best_params is not None:
        cert = result_certificate(result, cfg)
        cert_path = out.with_name(out.stem + "_certificate.json")
        cert.write(cert_path)
        print(f"wrote {cert_path}")
        if args.n == 6:
            print("FINDING: a certified feasible row exists for n = 6 — review the certificate")
    for note in result.notes:
        print(f"  {note}")
    if not result.certified:
        print("search ended without a certified result (budget or infeasibility)")
        return EXIT_UNCERTIFIED
    return EXIT_PASS


def cmd_recursion_sim(args) -> int:
    try:
        if args.q is not None or args.delta is not None:
            if args.c0 is not None or args.c is not None:
                print("error: give either --c0/--c or --q/--delta, not both", file=sys.stderr)
                return EXIT_USAGE
            if args.q is None or args.delta is None:
                print("error: --q and --delta must be given together", file=sys.stderr)
                return EXIT_USAGE
            dg = iteration.degiorgi_constants(
                args.n, Fraction(args.delta), Fraction(args.q), args.cms, args.radius
            )
            c0 = float(dg.C0.value)
            c = float(dg.C.approx_mp())
            print(f"derived C0 = {dg.C0.value}, C = {dg.C} from q={args.q}, delta={args.delta}, "
                  f"C_MS={args.cms}, R={args.radius}")
        else:
            if args.c0 is None or args.c is None:
                print("error: --c0 and --c required (or derive them with --q/--delta)", file=sys.stderr)
                return EXIT_USAGE
            c0, c = args.c0, args.c
        result = iteration.recursion_simulate(args.s1, c0, c, args.n, args.steps)
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"{'step':>4}  {'sequence':>20}  {'closed bound':>20}")
    for i, (v, b) in enumerate(zip(result.values_str, result.bounds_str)):
        print(f"{i:>4}  {v:>20}  {b:>20}")
    print(
        f"dominated={result.dominated} tends_to_zero={result.tends_to_zero} "
        f"exponent_identity={result.exponent_identity_ok} log_direct_agreement={result.log_direct_agreement_ok}"
    )
    if not (result.dominated and result.exponent_identity_ok and result.log_direct_agreement_ok):
        return EXIT_CHECK_FAILED
    return EXIT_PASS


def cmd_report(args) -> int:
    try:
        cert = Certificate.read(args.certificate)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: cannot read certificate: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"certificate schema {cert.schema_version}, n = {cert.n}, status: {cert.overall_status}")
    if cert.params:
        print("parameters:")
        for key, value in cert.params.items():
            print(f"  {key} = {value}")
    print(f"checks ({len(cert.checks)}):")
    for check in cert.checks:
        extra = f"  margin={check.margin}" if check.margin else ""
        print(f"  [{check.status:>11}] {check.name} ({check.kind}){extra}")
    if cert.published_targets:
        print("published targets:")
        for target in cert.published_targets:
            mark = "match" if target.match else "DISCREPANCY"
            print(f"  {target.quantity}: quoted {target.quoted} vs computed {target.computed} [{mark}]")
    for flag in cert.flags:
        print(f"flag: {flag.get('name')}: {flag.get('detail')}")
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stabcert", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="key = value configuration file")
        p.add_argument("--out", help="output path")
        p.add_argument("--seed", type=int)
        p.add_argument("--budget", type=int)
        p.add_argument("--cms", type=float, help="Sobolev-type constant C_MS")
        p.add_argument("--radius", type=float, help="iteration radius R")

    p_verify = sub.add_parser("verify", help="certify one built-in row")
    p_verify.add_argument("--n", type=int, required=True)
    p_verify.add_argument("--strict", action="store_true", help="discrepancies exit 3")
    common(p_verify)
    p_verify.set_defaults(func=cmd_verify)

    p_all = sub.add_parser("verify-all", help="certify all rows plus the threshold table")
    p_all.add_argument("--strict", action="store_true")
    common(p_all)
    p_all.set_defaults(func=cmd_verify_all)

    p_opt = sub.add_parser("optimize", help="search parameter space with exact recertification")
    p_opt.add_argument("--n", type=int, required=True)
    p_opt.add_argument("--objective", choices=("delta0", "epsilon"), default="delta0")
    p_opt.add_argument("--delta0", help="fixed delta0 (p/q) for the epsilon objective")
    p_opt.add_argument("--denominator-bound", type=int, dest="denominator_bound")
    common(p_opt)
    p_opt.set_defaults(func=cmd_optimize)

    p_sim = sub.add_parser("recursion-sim", help="simulate the decay recursion against its closed bound")
    p_sim.add_argument("--s1", type=float, required=True)
    p_sim.add_argument("--c0", type=float, help="iteration constant C0 (or derive via --q/--delta)")
    p_sim.add_argument("--c", type=float, help="iteration constant C (or derive via --q/--delta)")
    p_sim.add_argument("--n", type=int, required=True)
    p_sim.add_argument("--steps", type=int, default=20)
    p_sim.add_argument("--q", help="derive C0, C from this q (p/q rational)")
    p_sim.add_argument("--delta", help="stability parameter delta (p/q rational)")
    p_sim.add_argument("--cms", type=float, default=1.0)
    p_sim.add_argument("--radius", type=float, default=100.0)
    p_sim.set_defaults(func=cmd_recursion_sim)

    p_rep = sub.add_parser("report", help="render a stored certificate (read-only)")
    p_rep.add_argument("certificate")
    p_rep.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already; normalize
        return EXIT_USAGE if exc.code not in (0, None) else 0
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
