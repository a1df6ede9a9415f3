"""Command-line front end.

Subcommands bind the spectrum, bound, and simulation layers into
reproducible experiments: outputs are written atomically, embed the full
effective configuration for provenance, and a run can be reproduced
byte-for-byte by feeding that embedded config back through --config.
Exit codes: 0 success, 1 runtime error, 2 validation error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

from . import __version__
from .bounds import NoiseModel, bound_curve, sphere_escape_probability
from .constellation import (
    VALID_CONSTELLATION_IDS,
    MappingRule,
    make_constellation,
    pair_distance_spectrum,
    sample_random_mapping,
)
from .gf import Field
from .rs import RsCode
from .simulate import SimConfig, estimate_in_sphere_wer, simulate_wer
from .spectrum import (
    codebook_distance_spectrum,
    ensemble_distance_spectrum,
    hamming_spectrum,
)


class CliError(Exception):
    """Invalid experiment specification (exit code 2)."""


def _parse_code(text: str) -> tuple[int, int, int]:
    try:
        q, n, k = (int(v) for v in text.split(","))
    except ValueError as exc:
        raise CliError(f"--code expects 'q,n,k', got {text!r}") from exc
    if not 1 <= k <= n <= q:
        raise CliError(f"--code needs 1 <= k <= n <= q, got q={q}, n={n}, k={k}")
    if q & (q - 1):
        raise CliError(f"field size q must be a power of two, got {q}")
    return q, n, k


def _parse_snr(text: str) -> list[float]:
    try:
        parts = [float(v) for v in text.split(":")]
    except ValueError as exc:
        raise CliError(f"--snr expects 'start:stop:step', got {text!r}") from exc
    if len(parts) == 1:
        return parts
    if len(parts) != 3:
        raise CliError(f"--snr expects 'start:stop:step', got {text!r}")
    start, stop, step = parts
    if step <= 0:
        raise CliError(f"--snr step must be positive, got {step}")
    if stop < start:
        raise CliError(f"--snr stop {stop} is below start {start}")
    count = int(round((stop - start) / step)) + 1
    grid = [start + i * step for i in range(count)]
    return [g for g in grid if g <= stop + 1e-9]


def _parse_float_list(text: str, flag: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise CliError(f"{flag} expects comma-separated floats, got {text!r}") from exc


def _make_constellation(spec: str, q: int):
    try:
        cons = make_constellation(spec)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    if cons.q != q:
        raise CliError(
            f"constellation {spec!r} has {cons.q} points but the code field has q={q}"
        )
    return cons


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".rscm-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _config_json(config: dict) -> str:
    return json.dumps(config, sort_keys=True, separators=(", ", ": "))


def _format_value(v) -> str:
    return repr(v) if isinstance(v, float) else str(v)


def _emit_rows(args, config: dict, fieldnames: list[str], rows: list[dict]) -> None:
    if args.format == "json":
        doc = {"version": __version__, "config": config, "rows": rows}
        text = json.dumps(doc, indent=2) + "\n"
    else:
        lines = [f"# rscm {__version__}", f"# config {_config_json(config)}"]
        lines.append(",".join(fieldnames))
        for row in rows:
            lines.append(",".join(_format_value(row[name]) for name in fieldnames))
        text = "\n".join(lines) + "\n"
    if args.output:
        _atomic_write(args.output, text)
    else:
        sys.stdout.write(text)
    if getattr(args, "plot", False):
        if not args.output:
            raise CliError("--plot requires --output")
        from .plotting import render

        png = os.path.splitext(args.output)[0] + ".png"
        render(args.command, rows, png, title=config.get("title", args.command))


def _emit_json(args, doc: dict) -> None:
    text = json.dumps(doc, indent=2) + "\n"
    if args.output:
        _atomic_write(args.output, text)
    else:
        sys.stdout.write(text)


# -- subcommand runners -------------------------------------------------------


def _ensemble_spectrum(q: int, n: int, k: int, constellation_id: str):
    cons = _make_constellation(constellation_id, q)
    weights = hamming_spectrum(n, k, q)
    return cons, ensemble_distance_spectrum(weights, pair_distance_spectrum(cons))


def run_spectrum(args) -> None:
    q, n, k = _parse_code(args.code)
    config = {
        "subcommand": "spectrum",
        "code": args.code,
        "kind": args.kind,
        "constellation": args.constellation,
        "mapping": args.mapping,
        "seed": args.seed,
    }
    if args.kind == "hamming":
        spec = hamming_spectrum(n, k, q)
        entries = {str(i): w for i, w in sorted(spec.counts.items())}
    elif args.kind == "ensemble":
        if not args.constellation:
            raise CliError("--kind ensemble requires --constellation")
        _, bspec = _ensemble_spectrum(q, n, k, args.constellation)
        entries = bspec.to_json_entries()
    else:  # exhaustive
        if not args.constellation:
            raise CliError("--kind exhaustive requires --constellation")
        cons = _make_constellation(args.constellation, q)
        field = Field(q.bit_length() - 1)
        code = RsCode(field, n, k)
        if args.mapping == "random":
            mapping = sample_random_mapping(q, n, args.seed)
        else:
            mapping = MappingRule.identity(q, n)
        try:
            aspec = codebook_distance_spectrum(code, cons, mapping)
        except ValueError as exc:
            raise CliError(str(exc)) from exc
        entries = aspec.to_json_entries()
    _emit_json(
        args,
        {
            "version": __version__,
            "config": config,
            "kind": args.kind,
            "q": q,
            "n": n,
            "k": k,
            "entries": entries,
        },
    )


def run_bound(args) -> None:
    q, n, k = _parse_code(args.code)
    if not args.constellation:
        raise CliError("bound requires --constellation")
    snr = _parse_snr(args.snr)
    cons, bspec = _ensemble_spectrum(q, n, k, args.constellation)
    points = bound_curve(
        bspec, cons.ell * n, cons.avg_energy, n, k, q, snr, snr_type=args.snr_type
    )
    config = {
        "subcommand": "bound",
        "code": args.code,
        "constellation": args.constellation,
        "snr": args.snr,
        "snr_type": args.snr_type,
        "format": args.format,
    }
    rows = [
        {
            "snr_db": p.snr_db,
            "eb_n0_db": p.eb_n0_db,
            "es_n0_db": p.es_n0_db,
            "ub": p.ub,
            "sb": p.sb,
        }
        for p in points
    ]
    _emit_rows(args, config, ["snr_db", "eb_n0_db", "es_n0_db", "ub", "sb"], rows)


def _sigma2_for(snr_db: float, snr_type: str, cons, n: int, k: int, q: int) -> float:
    from .bounds import sigma2_from_ebn0_db, sigma2_from_esn0_db

    if snr_type == "ebn0":
        return sigma2_from_ebn0_db(snr_db, cons.avg_energy, n, k, q)
    return sigma2_from_esn0_db(snr_db, cons.avg_energy)


def run_simulate(args) -> None:
    q, n, k = _parse_code(args.code)
    if not args.constellation:
        raise CliError("simulate requires --constellation")
    cons = _make_constellation(args.constellation, q)
    snr = _parse_snr(args.snr)
    config = {
        "subcommand": "simulate",
        "code": args.code,
        "constellation": args.constellation,
        "mapping": args.mapping,
        "decoder": args.decoder,
        "eta": args.eta,
        "mu": args.mu,
        "snr": args.snr,
        "snr_type": args.snr_type,
        "seed": args.seed,
        "min_errors": args.min_errors,
        "max_trials": args.max_trials,
        "format": args.format,
    }
    rows = []
    for snr_db in snr:
        cfg = SimConfig(
            q=q,
            n=n,
            k=k,
            constellation=args.constellation,
            mapping=args.mapping,
            decoder=args.decoder,
            sigma2=_sigma2_for(snr_db, args.snr_type, cons, n, k, q),
            seed=args.seed,
            min_errors=args.min_errors,
            max_trials=args.max_trials,
            eta=args.eta,
            mu=args.mu,
        )
        est = simulate_wer(cfg, threads=args.threads)
        rows.append(
            {
                "snr_db": snr_db,
                "trials": est.trials,
                "errors": est.errors,
                "wer": est.wer,
                "ci": est.ci_radius,
            }
        )
    _emit_rows(args, config, ["snr_db", "trials", "errors", "wer", "ci"], rows)


def run_sandwich(args) -> None:
    q, n, k = _parse_code(args.code)
    if not args.constellation:
        raise CliError("sandwich requires --constellation")
    cons = _make_constellation(args.constellation, q)
    snr = _parse_snr(args.snr)
    if bool(args.r_star) == bool(args.escape_prob):
        raise CliError("give exactly one of --r-star or --escape-prob")
    config = {
        "subcommand": "sandwich",
        "code": args.code,
        "constellation": args.constellation,
        "mapping": args.mapping,
        "decoder": args.decoder,
        "eta": args.eta,
        "mu": args.mu,
        "snr": args.snr,
        "snr_type": args.snr_type,
        "seed": args.seed,
        "min_errors": args.min_errors,
        "max_trials": args.max_trials,
        "r_star": args.r_star,
        "escape_prob": args.escape_prob,
        "format": args.format,
    }
    rows = []
    for snr_db in snr:
        sigma2 = _sigma2_for(snr_db, args.snr_type, cons, n, k, q)
        noise = NoiseModel(sigma2, cons.ell * n)
        if args.r_star:
            radii = _parse_float_list(args.r_star, "--r-star")
        else:
            from .bounds import radius_for_escape_probability

            radii = [
                radius_for_escape_probability(p, noise)
                for p in _parse_float_list(args.escape_prob, "--escape-prob")
            ]
        for r_star in radii:
            cfg = SimConfig(
                q=q,
                n=n,
                k=k,
                constellation=args.constellation,
                mapping=args.mapping,
                decoder=args.decoder,
                sigma2=sigma2,
                seed=args.seed,
                min_errors=args.min_errors,
                max_trials=args.max_trials,
                eta=args.eta,
                mu=args.mu,
                r_star=r_star,
            )
            est = estimate_in_sphere_wer(cfg, threads=args.threads)
            pe1 = sphere_escape_probability(r_star, noise)
            rows.append(
                {
                    "snr_db": snr_db,
                    "r_star": r_star,
                    "trials": est.trials,
                    "errors": est.errors,
                    "wer": est.wer,
                    "ci": est.ci_radius,
                    "pr_e1": pe1,
                    "lower": est.wer,
                    "upper": min(1.0, pe1 + est.wer),
                    "generated": est.generated,
                }
            )
    _emit_rows(
        args,
        config,
        [
            "snr_db",
            "r_star",
            "trials",
            "errors",
            "wer",
            "ci",
            "pr_e1",
            "lower",
            "upper",
            "generated",
        ],
        rows,
    )


# -- argument plumbing --------------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--code", required=False, help="code parameters as q,n,k")
    p.add_argument(
        "--constellation",
        default=None,
        help=f"signal set id: {VALID_CONSTELLATION_IDS}",
    )
    p.add_argument("--output", default=None, help="output file (default: stdout)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--seed", type=int, default=0, help="64-bit experiment seed")
    p.add_argument("--threads", type=int, default=1, help="worker threads (never affects results)")
    p.add_argument("--config", default=None, help="JSON file with option defaults")
    p.add_argument("--plot", action="store_true", help="also render a PNG figure next to --output")


def _add_sim_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mapping", choices=["specific", "random"], default="specific")
    p.add_argument("--decoder", choices=["exhaustive-ml", "chase"], default="exhaustive-ml")
    p.add_argument("--eta", type=int, default=3, help="chase: unreliable positions to flip")
    p.add_argument("--mu", type=int, default=2, help="chase: candidate symbols per position")
    p.add_argument("--snr", required=False, help="grid start:stop:step in dB")
    p.add_argument("--snr-type", choices=["ebn0", "esn0"], default="ebn0")
    p.add_argument("--min-errors", type=int, default=200)
    p.add_argument("--max-trials", type=int, default=100_000_000)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rscm", description=__doc__)
    parser.add_argument("--version", action="version", version=f"rscm {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_spec = sub.add_parser("spectrum", help="weight / distance spectra as JSON")
    _add_common(p_spec)
    p_spec.add_argument("--kind", choices=["hamming", "ensemble", "exhaustive"], default="hamming")
    p_spec.add_argument("--mapping", choices=["identity", "random"], default="identity")
    p_spec.set_defaults(func=run_spectrum)

    p_bound = sub.add_parser("bound", help="union/sphere bound curves")
    _add_common(p_bound)
    p_bound.add_argument("--snr", required=False, help="grid start:stop:step in dB")
    p_bound.add_argument("--snr-type", choices=["ebn0", "esn0"], default="ebn0")
    p_bound.set_defaults(func=run_bound)

    p_sim = sub.add_parser("simulate", help="Monte-Carlo word error rate")
    _add_common(p_sim)
    _add_sim_args(p_sim)
    p_sim.set_defaults(func=run_simulate)

    p_sand = sub.add_parser("sandwich", help="simulation-based ML WER bounds")
    _add_common(p_sand)
    _add_sim_args(p_sand)
    p_sand.add_argument("--r-star", default=None, help="comma-separated sphere radii")
    p_sand.add_argument(
        "--escape-prob", default=None, help="comma-separated escape probabilities to derive radii"
    )
    p_sand.set_defaults(func=run_sandwich)
    return parser


def _apply_config_file(parser: argparse.ArgumentParser, argv: list[str]) -> list[str]:
    """Fold --config JSON values in as defaults for the reparse."""
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    if idx + 1 >= len(argv):
        raise CliError("--config needs a file path")
    path = argv[idx + 1]
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read config file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise CliError(f"config file {path} must hold a JSON object")
    sub = data.pop("subcommand", None)
    if sub is not None and argv and argv[0] != sub:
        raise CliError(f"config file is for subcommand {sub!r}, invoked {argv[0]!r}")
    for action in parser._subparsers._group_actions[0].choices.values():  # type: ignore[union-attr]
        known = {a.dest for a in action._actions}
        action.set_defaults(**{k: v for k, v in data.items() if k in known and v is not None})
    return argv


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _apply_config_file(parser, argv)
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:
            return int(exc.code or 0)
        for required in ("code",):
            if getattr(args, required, None) is None:
                raise CliError(f"--{required} is required")
        if getattr(args, "snr", "unused") is None:
            raise CliError("--snr is required")
        args.func(args)
        return 0
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"runtime error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
