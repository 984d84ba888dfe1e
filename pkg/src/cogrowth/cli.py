"""Command-line front end: ``cogrowth {count,verify,asymptotics,presets}``.

Exit status: 0 when everything requested passed, 1 on a verification
failure, 2 on a budget or configuration error.  Output is deterministic for
identical arguments (no timestamps).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

from . import __version__
from .asymptotics import (
    AMENABLE_GAP,
    DEFAULT_TOLERANCE,
    DEFAULT_WINDOW,
    NONAMENABLE_GAP,
    InsufficientData,
    amenability_diagnostic,
    integral_split_diagnostics,
    ratio_limit_experiment,
    remark_bound_probe,
    spectral_data,
)
from .counting import (
    DEFAULT_BALL_BUDGET,
    DEFAULT_ENUM_BUDGET,
    CountTable,
    EnumerationBudgetExceeded,
    count_table,
    gamma_bruteforce,
    walk_bruteforce,
)
from .exact_series import (
    chebyshev_moment_value,
    cogrowth_series_finite,
    finite_spectrum,
    functional_equation_check,
    grigorchuk_identity_check,
    singularity_analysis,
)
from .marked_groups import (
    BackendOverflowError,
    BallBudgetExceeded,
    GroupSpecError,
    MarkedGroup,
    PRESETS,
    load_group,
    load_preset,
    preset_spec,
)

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
CSV_HEADER = "# cogrowth-asymptotics-csv v1"
CHECKS = ("grigorchuk", "chebyshev", "functional", "singularities")
TAGS = {
    "grigorchuk": "grigorchuk-identity",
    "chebyshev": "chebyshev-moment",
    "functional": "functional-equation",
    "singularities": "singularities",
}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    preset: str | None = None
    group_path: str | None = None
    counts_path: str | None = None
    n_max: int = 20
    ball_budget: int = DEFAULT_BALL_BUDGET
    enum_budget: int = DEFAULT_ENUM_BUDGET
    order: int | None = None
    tolerance: float = DEFAULT_TOLERANCE
    window: int = DEFAULT_WINDOW
    amenable_gap: float = AMENABLE_GAP
    nonamenable_gap: float = NONAMENABLE_GAP
    fmt: str = "text"
    out: str | None = None
    method: str = "dp"

    def validate(self):
        if self.ball_budget <= 0 or self.enum_budget <= 0:
            raise ConfigError("budgets must be positive")
        if self.n_max < 2:
            raise ConfigError("--nmax must be at least 2")
        if self.preset is not None and self.preset not in PRESETS:
            raise ConfigError(f"unknown preset {self.preset!r}; known: {', '.join(PRESETS)}")
        if self.preset and self.group_path:
            raise ConfigError("give either --preset or --group, not both")
        if not (self.preset or self.group_path or self.counts_path):
            raise ConfigError("one of --preset, --group or --counts is required")
        if not self.tolerance > 0:
            raise ConfigError("--tolerance must be positive")
        if self.order is not None and self.order < 1:
            raise ConfigError("--order must be positive")

    def provenance(self) -> dict:
        return {
            "preset": self.preset,
            "group_file": self.group_path,
            "n_max": self.n_max,
            "ball_budget": self.ball_budget,
            "enum_budget": self.enum_budget,
            "cogrowth_version": __version__,
        }


def _group(cfg: RunConfig, fallback_name: str | None = None) -> MarkedGroup:
    if cfg.preset:
        return load_preset(cfg.preset)
    if cfg.group_path:
        return load_group(cfg.group_path)
    if fallback_name in PRESETS:
        return load_preset(fallback_name)
    raise ConfigError("cannot determine the group; pass --preset or --group")


def _emit(cfg: RunConfig, text: str):
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)


def _table(cfg: RunConfig, G: MarkedGroup | None) -> CountTable:
    if cfg.counts_path:
        return CountTable.from_json(Path(cfg.counts_path).read_text())
    assert G is not None
    if cfg.method == "bruteforce":
        gamma = [gamma_bruteforce(G, n, cfg.enum_budget) for n in range(cfg.n_max + 1)]
        walk = [walk_bruteforce(G, n, cfg.enum_budget) for n in range(cfg.n_max + 1)]
        prov = cfg.provenance() | {"method": "bruteforce"}
        return CountTable(G.name, G.rank, gamma, walk, provenance=prov)
    t = count_table(G, cfg.n_max, cfg.ball_budget)
    t.provenance = cfg.provenance() | {"method": "transfer-dp"}
    return t


def _format_table(t: CountTable, fmt: str) -> str:
    if fmt == "json":
        return t.to_json()
    if fmt == "csv":
        buf = io.StringIO()
        buf.write("# cogrowth-count-table-csv v1\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "gamma", "walk"])
        for n in range(t.n_max + 1):
            w.writerow([n, t.gamma[n], t.walk[n]])
        return buf.getvalue()
    lines = [f"# group={t.group} rank={t.rank} q={t.q} n_max={t.n_max}"
             f"{' TRUNCATED' if t.truncated else ''}"]
    for k, v in sorted(t.provenance.items()):
        lines.append(f"# {k}={v}")
    lines.append(f"gamma = [{', '.join(map(str, t.gamma))}]")
    lines.append(f"walk  = [{', '.join(map(str, t.walk))}]")
    return "\n".join(lines) + "\n"


def cmd_count(cfg: RunConfig) -> int:
    G = _group(cfg)
    try:
        t = _table(cfg, G)
    except BallBudgetExceeded as exc:
        partial = exc.partial
        if isinstance(partial, CountTable):
            partial.provenance = cfg.provenance() | {"method": "transfer-dp",
                                                     "truncation": str(exc)}
            _emit(cfg, _format_table(partial, cfg.fmt))
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    _emit(cfg, _format_table(t, cfg.fmt))
    return EXIT_OK


def run_checks(t: CountTable, G: MarkedGroup | None, which: str = "all",
               order: int | None = None) -> list[dict]:
    """Run the selected exact checks; one result dict per check."""
    selected = CHECKS if which == "all" else (which,)
    results = []
    for name in selected:
        tag = TAGS[name]
        if name == "grigorchuk":
            N = t.n_max + 1 if order is None else order
            res = grigorchuk_identity_check(t, N)
            entry = {"check": tag, "status": "pass" if res else "fail", "order": N}
            if not res:
                entry.update(failed_order=res.first_order, index=res.first_order - 1,
                             residual=str(res.value))
        elif name == "chebyshev":
            entry = {"check": tag, "status": "pass", "range": [2, t.n_max]}
            for n in range(2, t.n_max + 1):
                v = chebyshev_moment_value(t, n)
                if v != t.gamma[n]:
                    entry.update(status="fail", index=n, expected=str(v), found=str(t.gamma[n]))
                    break
        else:
            if G is None or not G.is_finite:
                results.append({"check": tag, "status": "skipped",
                                "reason": "needs a finite quotient"})
                continue
            spectrum = finite_spectrum(G)
            gamma = cogrowth_series_finite(G, spectrum)
            if name == "functional":
                ok = functional_equation_check(gamma, G.q)
                entry = {"check": tag, "status": "pass" if ok else "fail"}
            else:
                rep = singularity_analysis(gamma, G.q, spectrum)
                entry = {"check": tag, "status": "pass" if rep.ok else "fail", **rep.summary()}
        results.append(entry)
    return results


def cmd_verify(cfg: RunConfig, which: str = "all") -> int:
    t = _table(cfg, None) if cfg.counts_path else None
    G = _group(cfg, t.group if t else None) if (cfg.preset or cfg.group_path or t) else None
    if t is None:
        t = _table(cfg, G)
    problems = t.check_invariants()
    results = run_checks(t, G, which, cfg.order)
    failed = [r for r in results if r["status"] == "fail"]
    if cfg.fmt == "json":
        text = json.dumps({"group": t.group, "n_max": t.n_max, "invariant_problems": problems,
                           "results": results, "passed": not failed}, indent=2) + "\n"
    else:
        lines = [f"# verify group={t.group} q={t.q} n_max={t.n_max}"]
        for p in problems:
            lines.append(f"WARN table invariant: {p}")
        for r in results:
            extra = ""
            if r["status"] == "fail":
                if "failed_order" in r:
                    extra = f" order={r['failed_order']} index={r['index']}"
                elif "index" in r:
                    extra = f" index={r['index']}"
            elif r["status"] == "skipped":
                extra = f" ({r['reason']})"
            lines.append(f"{r['status'].upper():7s} {r['check']}{extra}")
        lines.append("RESULT " + ("pass" if not failed else "fail"))
        text = "\n".join(lines) + "\n"
    _emit(cfg, text)
    return EXIT_FAIL if failed else EXIT_OK


def _finite(x: float):
    return None if x is None or (isinstance(x, float) and not math.isfinite(x)) else x


def asymptotics_report(cfg: RunConfig, t: CountTable, G: MarkedGroup | None) -> dict:
    spectrum = finite_spectrum(G) if G is not None and G.is_finite else None
    report: dict = {"group": t.group, "q": t.q, "n_max": t.n_max}
    verdict = amenability_diagnostic(t, amenable_gap=cfg.amenable_gap,
                                     nonamenable_gap=cfg.nonamenable_gap)
    report["amenability"] = {k: _finite(v) for k, v in asdict(verdict).items()}
    if verdict.verdict == "trivial kernel":
        report["ratio_table"] = []
        return report
    s = spectral_data(t, spectrum)
    report["rho"] = s.rho
    report["rho_source"] = "spectrum" if spectrum else f"even_ratio@{s.rho_n}"
    table = ratio_limit_experiment(t, s, cfg.window)
    report["prediction"] = table.prediction
    report["trailing_max_deviation"] = _finite(table.trailing_max_deviation)
    report["tolerance"] = cfg.tolerance
    report["within_tolerance"] = bool(table.trailing_max_deviation <= cfg.tolerance)
    report["ratio_table"] = [asdict(r) for r in table.rows]
    if spectrum is not None:
        probe = remark_bound_probe(t, s)
        report["remark_probe"] = {"h_rho0": probe.h_rho0, "holds": probe.holds,
                                  "inf_L": probe.inf_L, "rows": probe.rows}
        split = []
        for n in range(1, t.n_max // 2 + 1):
            d = integral_split_diagnostics(s, n)
            split.append({"n": n, "I_n": d.I_n, "I_n1": d.I_n1, "I_n2": d.I_n2,
                          "I_tilde2": d.I_tilde2, "majorant": d.majorant,
                          "gamma_2n_over_q_n": t.gamma[2 * n] / t.q ** n})
        report["integral_split"] = split
    return report


def cmd_asymptotics(cfg: RunConfig) -> int:
    t = _table(cfg, None) if cfg.counts_path else None
    G = _group(cfg, t.group if t else None) if (cfg.preset or cfg.group_path or t) else None
    if t is None:
        t = _table(cfg, G)
    report = asymptotics_report(cfg, t, G)
    if cfg.fmt == "json":
        text = json.dumps(report, indent=2) + "\n"
    elif cfg.fmt == "csv":
        buf = io.StringIO()
        buf.write(CSV_HEADER + "\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "gamma_2n", "ratio", "prediction", "deviation", "root_estimate"])
        for r in report["ratio_table"]:
            w.writerow([r["n"], r["gamma_2n"], repr(r["ratio"]), repr(r["prediction"]),
                        repr(r["deviation"]), repr(r["root_estimate"])])
        text = buf.getvalue()
    else:
        a = report["amenability"]
        lines = [f"# asymptotics group={t.group} q={t.q} n_max={t.n_max}",
                 f"verdict: {a['verdict']}"]
        if a["gamma_hat"] is not None:
            lines.append(f"gamma_hat={a['gamma_hat']:.10g} (ratio, 2n={a['n_used']}) "
                         f"root={a['gamma_root']:.10g} gap={a['gap']:.6g}")
            lines.append(f"rho={report['rho']:.12g} [{report['rho_source']}] "
                         f"gamma_from_rho={a['gamma_from_rho']}")
            lines.append(f"predicted ratio limit={report['prediction']:.12g}; trailing max "
                         f"deviation={report['trailing_max_deviation']:.3e} "
                         f"(tolerance {cfg.tolerance:g}: "
                         f"{'within' if report['within_tolerance'] else 'not within'})")
            lines.append(f"{'n':>4} {'gamma_2n':>24} {'ratio':>18} {'deviation':>12}")
            for r in report["ratio_table"]:
                lines.append(f"{r['n']:>4} {r['gamma_2n']:>24} {r['ratio']:>18.12g} "
                             f"{r['deviation']:>12.3e}")
        if "remark_probe" in report:
            p = report["remark_probe"]
            lines.append(f"remark probe: h(rho0)={p['h_rho0']:.12g} bound holds={p['holds']} "
                         f"inf L_n={p['inf_L']:.12g}")
        lines.append(a["note"])
        text = "\n".join(lines) + "\n"
    _emit(cfg, text)
    return EXIT_OK


def cmd_presets(cfg: RunConfig | None = None) -> int:
    lines = []
    for name in PRESETS:
        spec = preset_spec(name)
        lines.append(f"{name:10s} rank={spec['rank']} backend={spec['backend']['type']}")
    text = "\n".join(lines) + "\n"
    if cfg is not None:
        _emit(cfg, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cogrowth", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"cogrowth {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, nmax_default=20):
        src = p.add_mutually_exclusive_group()
        src.add_argument("--preset", help="built-in group (see `cogrowth presets`)")
        src.add_argument("--group", dest="group_path", help="group-spec JSON file")
        p.add_argument("--nmax", type=int, default=nmax_default)
        p.add_argument("--ball-budget", type=int, default=DEFAULT_BALL_BUDGET)
        p.add_argument("--enum-budget", type=int, default=DEFAULT_ENUM_BUDGET)
        p.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE,
                       help="convergence tolerance for asymptotics reports (exact checks ignore it)")
        p.add_argument("--format", dest="fmt", choices=("text", "json", "csv"), default="text")
        p.add_argument("--out")

    p = sub.add_parser("count", help="exact gamma_n and W_n")
    common(p)
    p.add_argument("--method", choices=("dp", "bruteforce"), default="dp")

    p = sub.add_parser("verify", help="exact identity checks")
    common(p)
    p.add_argument("--counts", dest="counts_path", help="count-table JSON to check instead")
    p.add_argument("--order", type=int, help="series order of the return-count identity")
    p.add_argument("which", nargs="?", default="all", choices=CHECKS + ("all",))

    p = sub.add_parser("asymptotics", help="ratio/root estimates and diagnostics")
    common(p, nmax_default=24)
    p.add_argument("--counts", dest="counts_path")
    p.add_argument("--window", type=int, default=DEFAULT_WINDOW)
    p.add_argument("--amenable-gap", type=float, default=AMENABLE_GAP)
    p.add_argument("--nonamenable-gap", type=float, default=NONAMENABLE_GAP)

    p = sub.add_parser("presets", help="list built-in groups")
    p.add_argument("--out")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "presets":
        return cmd_presets(RunConfig(preset="trivial", out=args.out))
    cfg = RunConfig(
        preset=args.preset,
        group_path=args.group_path,
        counts_path=getattr(args, "counts_path", None),
        n_max=args.nmax,
        ball_budget=args.ball_budget,
        enum_budget=args.enum_budget,
        order=getattr(args, "order", None),
        tolerance=args.tolerance,
        window=getattr(args, "window", DEFAULT_WINDOW),
        amenable_gap=getattr(args, "amenable_gap", AMENABLE_GAP),
        nonamenable_gap=getattr(args, "nonamenable_gap", NONAMENABLE_GAP),
        fmt=args.fmt,
        out=args.out,
        method=getattr(args, "method", "dp"),
    )
    try:
        cfg.validate()
        if args.command == "count":
            return cmd_count(cfg)
        if args.command == "verify":
            return cmd_verify(cfg, args.which)
        return cmd_asymptotics(cfg)
    except (ConfigError, GroupSpecError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (BallBudgetExceeded, EnumerationBudgetExceeded, BackendOverflowError,
            InsufficientData) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
