"""Command line interface wiring the modules into reproducible workflows.

Exit codes: 0 success, 1 usage error, 2 validation/configuration failure,
3 statistical-check failure. Generation commands require an explicit seed
and emit a JSON manifest next to every output file; consuming commands
verify input digests against those manifests and warn on mismatch.
"""

import argparse
import sys
from pathlib import Path

from . import __version__
from .config import default_config, load_config
from .dataset_io import (
    config_digest,
    file_digest,
    manifest_path_for,
    read_citizens,
    read_manifest,
    read_ratings,
    read_routes,
    write_citizens,
    write_manifest,
    write_ratings,
    write_routes,
    RunManifest,
)
from .errors import HealthRoutesError
from .evaluation import evaluate_recommender, noise_floor, prevalence_report
from .population import generate_population
from .profiles import MASK_BITS, ProfileId, profile_census
from .rating_sim import NoiseConfig, generate_ratings
from .recommender import HealthFilterConfig, Recommender, SimilarityModel
from .routes import normalize_features

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_STATS = 3

# MAE band around the noise floor that the CF predictor is expected to hit
# on default-scale datasets.
MAE_BAND_BELOW = 0.1
MAE_BAND_ABOVE = 0.6


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _warn(message: str) -> None:
    print(f"warning: {message}", file=sys.stderr)


def _load_simulation_config(path):
    return load_config(path) if path else default_config()


def _verify_input_digest(data_path) -> RunManifest | None:
    """Check a consumed file against its manifest, if one exists."""
    manifest_path = manifest_path_for(data_path)
    if not manifest_path.exists():
        return None
    manifest = read_manifest(manifest_path)
    recorded = manifest.outputs.get(Path(data_path).name)
    if recorded and recorded != file_digest(data_path):
        _warn(f"{data_path} does not match the digest recorded in {manifest_path}")
    return manifest


def _emit_manifest(out_path, seed, digests, shapes) -> None:
    manifest = RunManifest(
        seed=seed,
        version=__version__,
        digests=digests,
        shapes=shapes,
        outputs={Path(out_path).name: file_digest(out_path)},
    )
    write_manifest(manifest_path_for(out_path), manifest)


def cmd_gen_citizens(args) -> int:
    cfg = _load_simulation_config(args.config)
    population = generate_population(
        args.n, pyramid=cfg.pyramid, cfg=cfg.prevalence, seed=args.seed
    )
    write_citizens(args.out, population)
    _emit_manifest(
        args.out,
        args.seed,
        digests={
            "pyramid": config_digest(cfg.pyramid),
            "prevalence": config_digest(cfg.prevalence),
        },
        shapes={"n_users": len(population), "m_routes": 0, "n_ratings": 0},
    )
    print(f"wrote {len(population)} citizens to {args.out}")
    return EXIT_OK


def cmd_ingest_routes(args) -> int:
    catalog = read_routes(args.infile)
    write_routes(args.out, catalog)
    print(f"wrote {len(catalog)} routes to {args.out}")
    print("normalized feature preview (ease scores, 0=hardest 5=easiest):")
    print(f"{'id':<12} {'distance':>8} {'elevation':>9} {'pavement':>8}")
    for route in catalog:
        scores = normalize_features(route, catalog)
        print(
            f"{route.id:<12} {scores.distance:>8.2f} {scores.elevation:>9.2f} "
            f"{scores.pavement:>8.2f}"
        )
    return EXIT_OK


def cmd_gen_ratings(args) -> int:
    citizens_manifest = _verify_input_digest(args.citizens)
    population = read_citizens(args.citizens)
    catalog = read_routes(args.routes)
    cfg = _load_simulation_config(args.config)
    noise = NoiseConfig(std_dev=args.noise_std, enabled=not args.no_noise)
    matrix = generate_ratings(
        population, catalog, table=cfg.modifiers, noise=noise, seed=args.seed
    )
    write_ratings(args.out, matrix, full_precision=args.full_precision)
    digests = {
        "modifiers": config_digest(cfg.modifiers),
        "noise": config_digest(noise),
    }
    if citizens_manifest is not None:
        for name in ("pyramid", "prevalence"):
            if name in citizens_manifest.digests:
                digests[name] = citizens_manifest.digests[name]
    _emit_manifest(
        args.out,
        args.seed,
        digests=digests,
        shapes={
            "n_users": matrix.n_users,
            "m_routes": matrix.n_routes,
            "n_ratings": matrix.n_ratings,
        },
    )
    print(
        f"wrote {matrix.n_ratings} ratings ({matrix.n_users} users x "
        f"{matrix.n_routes} routes) to {args.out}"
    )
    return EXIT_OK


def cmd_recommend(args) -> int:
    _verify_input_digest(args.ratings)
    matrix = read_ratings(args.ratings)
    model = SimilarityModel(
        metric=args.metric, k_neighbors=args.k, min_overlap=args.min_overlap
    )
    citizen = None
    health = None
    if args.citizens and args.routes:
        population = {c.id: c for c in read_citizens(args.citizens)}
        if args.user not in population:
            raise HealthRoutesError(f"user {args.user} not found in {args.citizens}")
        citizen = population[args.user]
        catalog = read_routes(args.routes)
        health = HealthFilterConfig(
            catalog=tuple(catalog),
            table=_load_simulation_config(args.config).modifiers,
            threshold=args.threshold,
            strict=args.strict,
        )
    elif args.citizens or args.routes:
        raise HealthRoutesError(
            "health filtering needs both --citizens and --routes (or neither)"
        )
    recommender = Recommender(matrix, model)
    recommendations = recommender.top_n(
        args.user,
        args.n,
        citizen=citizen,
        health=health,
        include_rated=args.include_rated,
    )
    lines = [
        f"# healthroutes {__version__} recommend",
        f"# params: user={args.user} n={args.n} metric={model.metric} "
        f"k={model.k_neighbors} min_overlap={model.min_overlap} "
        f"threshold={args.threshold} strict={args.strict} "
        f"include_rated={args.include_rated} health_filter={health is not None}",
        "user_id,rank,route_id,predicted,threshold_ok,status_ok",
    ]
    verdict = "pass" if health is not None else "n/a"
    for rank, rec in enumerate(recommendations, start=1):
        lines.append(
            f"{args.user},{rank},{rec.route_id},{rec.predicted:.6f},{verdict},{verdict}"
        )
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8", newline="\n")
        _emit_manifest(
            args.out,
            0,
            digests={"model": config_digest(model)},
            shapes={
                "n_users": matrix.n_users,
                "m_routes": matrix.n_routes,
                "n_ratings": matrix.n_ratings,
            },
        )
        print(f"wrote {len(recommendations)} recommendations to {args.out}")
    else:
        sys.stdout.write(text)
    if not recommendations and not args.include_rated:
        _warn(
            "no unrated candidate routes; on complete generated matrices "
            "pass --include-rated"
        )
    return EXIT_OK


def cmd_evaluate(args) -> int:
    _verify_input_digest(args.ratings)
    matrix = read_ratings(args.ratings)
    model = SimilarityModel(
        metric=args.metric, k_neighbors=args.k, min_overlap=args.min_overlap
    )
    report = evaluate_recommender(matrix, model, fraction=args.fraction, seed=args.seed)
    floor = noise_floor(args.noise_std)
    lo, hi = floor - MAE_BAND_BELOW, floor + MAE_BAND_ABOVE
    truth = "full-precision noisy values" if matrix.exact is not None else "stored ratings"
    print(f"hold-out: {report.n_test} cells ({args.fraction:.0%}), truth = {truth}")
    print(f"CF predictor : MAE={report.mae:.4f} RMSE={report.rmse:.4f}")
    if report.oracle_mae is not None:
        print(
            f"oracle (deterministic) baseline: MAE={report.oracle_mae:.4f} "
            f"RMSE={report.oracle_rmse:.4f}"
        )
    print(f"noise floor (std={args.noise_std}): {floor:.4f}; MAE band [{lo:.2f}, {hi:.2f}]")
    if lo <= report.mae <= hi:
        print("noise-floor check: PASS")
        return EXIT_OK
    print("noise-floor check: FAIL")
    return EXIT_STATS


def cmd_stats(args) -> int:
    population = read_citizens(args.citizens)
    cfg = _load_simulation_config(args.config)
    checks = prevalence_report(population, cfg.prevalence)
    print(f"population: {len(population)} citizens")
    print(f"{'condition':<12} {'target':>8} {'empirical':>10} {'bound':>8}  verdict")
    failed = False
    for check in checks:
        verdict = "PASS" if check.passed else "FAIL"
        failed = failed or not check.passed
        print(
            f"{check.condition:<12} {check.target:>8.4f} {check.empirical:>10.4f} "
            f"{check.bound:>8.4f}  {verdict}"
        )
    census = profile_census(population)
    print(f"profiles observed: {len(census)}/64")
    print(f"{'profile':>7} {'bracket':>7} {'mask':>4}  conditions{'':<24} count")
    for packed in sorted(census):
        profile = ProfileId.from_packed(packed)
        names = ",".join(profile.diseases()) or "-"
        print(
            f"{packed:>7} {profile.age_bracket:>7} {profile.disease_mask:>4}  "
            f"{names:<34} {census[packed]}"
        )
    return EXIT_STATS if failed else EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(
        prog="healthroutes",
        description=(
            "Generate statistically grounded citizen/route rating datasets and "
            "serve health-aware top-N route recommendations."
        ),
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", metavar="command")

    p = sub.add_parser(
        "gen-citizens", help="generate a citizens file (ages + health conditions)"
    )
    p.add_argument("--n", type=int, required=True, help="number of citizens")
    p.add_argument("--seed", type=int, required=True, help="generation seed (mandatory)")
    p.add_argument("--config", help="YAML simulation config (defaults when omitted)")
    p.add_argument("--out", required=True, help="output citizens CSV path")
    p.set_defaults(handler=cmd_gen_citizens)

    p = sub.add_parser("ingest-routes", help="validate a route catalog and canonicalise it")
    p.add_argument("--in", dest="infile", required=True, help="raw catalog CSV path")
    p.add_argument("--out", required=True, help="canonical catalog CSV path")
    p.set_defaults(handler=cmd_ingest_routes)

    p = sub.add_parser("gen-ratings", help="synthesize the ratings matrix")
    p.add_argument("--citizens", required=True, help="citizens CSV path")
    p.add_argument("--routes", required=True, help="route catalog CSV path")
    p.add_argument("--seed", type=int, required=True, help="generation seed (mandatory)")
    p.add_argument(
        "--noise-std",
        type=float,
        default=1.5,
        help="rating noise standard deviation (default 1.5)",
    )
    p.add_argument("--no-noise", action="store_true", help="disable rating noise")
    p.add_argument("--config", help="YAML simulation config (modifier table)")
    p.add_argument(
        "--full-precision",
        action="store_true",
        help="also store deterministic and pre-rounding values (evaluation oracle)",
    )
    p.add_argument("--out", required=True, help="output ratings CSV path")
    p.set_defaults(handler=cmd_gen_ratings)

    p = sub.add_parser("recommend", help="print top-N route recommendations for a user")
    p.add_argument("--ratings", required=True, help="ratings CSV path")
    p.add_argument("--user", type=int, required=True, help="user id to recommend for")
    p.add_argument("--n", type=int, default=10, help="number of recommendations (default 10)")
    p.add_argument(
        "--metric",
        choices=["pearson", "cosine"],
        default="pearson",
        help="similarity metric (default pearson)",
    )
    p.add_argument("--k", type=int, default=30, help="neighbourhood size (default 30)")
    p.add_argument(
        "--min-overlap",
        type=int,
        default=3,
        help="minimum co-rated routes for a similarity to count (default 3)",
    )
    p.add_argument(
        "--threshold",
        type=float,
        default=3.0,
        help="health filter: minimum deterministic rating (default 3.0)",
    )
    p.add_argument(
        "--strict",
        action="store_true",
        help="health filter: also drop Caution routes for citizens with any condition",
    )
    p.add_argument(
        "--include-rated",
        action="store_true",
        help="treat every route as a candidate (complete-matrix mode)",
    )
    p.add_argument("--citizens", help="citizens CSV (enables the health filter)")
    p.add_argument("--routes", help="route catalog CSV (enables the health filter)")
    p.add_argument("--config", help="YAML simulation config (modifier table)")
    p.add_argument("--out", help="write recommendations to a file instead of stdout")
    p.set_defaults(handler=cmd_recommend)

    p = sub.add_parser("evaluate", help="hold-out accuracy and noise-floor comparison")
    p.add_argument("--ratings", required=True, help="ratings CSV path")
    p.add_argument(
        "--fraction", type=float, default=0.2, help="hold-out fraction (default 0.2)"
    )
    p.add_argument("--seed", type=int, required=True, help="hold-out split seed")
    p.add_argument("--metric", choices=["pearson", "cosine"], default="pearson")
    p.add_argument("--k", type=int, default=30, help="neighbourhood size (default 30)")
    p.add_argument("--min-overlap", type=int, default=3)
    p.add_argument(
        "--noise-std",
        type=float,
        default=1.5,
        help="noise std used for the floor comparison (default 1.5)",
    )
    p.set_defaults(handler=cmd_evaluate)

    p = sub.add_parser("stats", help="prevalence report and 64-profile census")
    p.add_argument("--citizens", required=True, help="citizens CSV path")
    p.add_argument("--config", help="YAML simulation config (prevalence targets)")
    p.set_defaults(handler=cmd_stats)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not getattr(args, "handler", None):
        parser.print_help(sys.stderr)
        return EXIT_USAGE
    try:
        return args.handler(args)
    except HealthRoutesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
