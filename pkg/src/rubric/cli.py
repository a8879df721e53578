"""Command-line workflow over the store.

Exit codes: 0 on success, 1 with "error: <code>: <message>" on stderr
for domain failures, 2 for usage mistakes. The store directory comes
from --store, then RUBRIC_STORE, then ./rubric-store.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import engine, evaluation
from .catalog import dump_catalog, load_catalog
from .demo import demo_lines
from .errors import (
    IncompleteAssessmentError,
    NotFoundError,
    ParseError,
    RubricError,
    ValidationError,
)
from .sensitivity import WhatIfDelta, stability_scan, what_if
from .store import (
    Store,
    article_document,
    assessment_document,
    export_assessments,
    export_ratings,
    import_assessment_csv,
    profile_document,
)

DEFAULT_STORE = "./rubric-store"


def _store_path(args: argparse.Namespace) -> Path:
    return Path(args.store or os.environ.get("RUBRIC_STORE") or DEFAULT_STORE)


def _open(args: argparse.Namespace) -> Store:
    return Store.open(_store_path(args))


def _emit_json(body: object) -> None:
    print(json.dumps(body, indent=2))


def _parse_pairs(pairs: list[str]) -> dict[str, str]:
    parsed = {}
    for pair in pairs:
        target, sep, value = pair.partition("=")
        if not sep or not target or not value:
            raise ParseError(f"{pair!r} is not in target=value form")
        parsed[target] = value
    return parsed


def _int_value(target: str, value: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ParseError(f"{target}={value}: {value!r} is not an integer")


def _importance_maps(pairs: list[str]) -> tuple[dict[str, int], dict[str, int]]:
    parsed = _parse_pairs(pairs)
    category = {t: _int_value(t, v) for t, v in parsed.items() if "." not in t}
    criterion = {t: _int_value(t, v) for t, v in parsed.items() if "." in t}
    return category, criterion


def _score_value(target: str, value: str) -> int | str | None:
    if value == "-":
        return None
    if value == engine.NOT_APPLICABLE:
        return engine.NOT_APPLICABLE
    return _int_value(target, value)


def _complete_assessments(store: Store,
                          profile: evaluation.WeightProfile
                          ) -> list[evaluation.Assessment]:
    return [
        a for a in store.list_assessments(profile_id=profile.profile_id)
        if a.profile_revision == profile.revision
        and a.status == evaluation.COMPLETE
    ]


def _resolve_catalog_version(store: Store, catalog_id: str,
                             version: str | None) -> str:
    if version is not None:
        return version
    versions = [v for cid, v in store.list_catalogs() if cid == catalog_id]
    if not versions:
        raise NotFoundError(f"catalog {catalog_id} not found")
    if len(versions) > 1:
        raise ValidationError(
            f"catalog {catalog_id} has {len(versions)} versions; pass --version")
    return versions[0]


# -- handlers ---------------------------------------------------------


def _cmd_init(args: argparse.Namespace) -> int:
    store = Store.init(_store_path(args))
    print(f"initialized {store.root}")
    return 0


def _cmd_catalog_show(args: argparse.Namespace) -> int:
    store = _open(args)
    version = _resolve_catalog_version(store, args.id, args.version)
    catalog = store.get_catalog(args.id, version)
    if args.json:
        _emit_json(dump_catalog(catalog))
        return 0
    criteria = sum(len(c.criteria) for c in catalog.categories)
    print(f"{catalog.catalog_id} v{catalog.version}: "
          f"{len(catalog.categories)} categories, {criteria} criteria")
    for category in catalog.categories:
        print(f"  {category.id} {category.name}")
        for criterion in category.criteria:
            print(f"    {criterion.id} {criterion.prompt}")
    return 0


def _cmd_catalog_add(args: argparse.Namespace) -> int:
    store = _open(args)
    try:
        document = Path(args.file).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {args.file}: {exc}")
    catalog = load_catalog(document)
    store.put_catalog(catalog)
    print(f"stored catalog {catalog.catalog_id} v{catalog.version}")
    return 0


def _cmd_profile_create(args: argparse.Namespace) -> int:
    store = _open(args)
    version = _resolve_catalog_version(store, args.catalog, args.catalog_version)
    catalog = store.get_catalog(args.catalog, version)
    category, criterion = _importance_maps(args.set or [])
    profile = evaluation.new_profile(catalog, args.profile_id, args.name,
                                     category, criterion)
    store.put_profile(profile)
    print(f"created profile {profile.profile_id} r{profile.revision}")
    return 0


def _cmd_profile_set_importance(args: argparse.Namespace) -> int:
    store = _open(args)
    category, criterion = _importance_maps(args.set)
    profile = store.get_profile(args.profile_id)
    updated = evaluation.update_importance(profile, category=category,
                                           criterion=criterion)
    store.put_profile(updated)
    print(f"{updated.profile_id} r{updated.revision}")
    return 0


def _print_profile(store: Store, profile: evaluation.WeightProfile) -> None:
    print(f"{profile.profile_id} r{profile.revision}: {profile.name} "
          f"(catalog {profile.catalog_id} v{profile.catalog_version})")
    try:
        category_weights, criterion_weights = evaluation.weight_preview(
            profile.category_importance, profile.criterion_importance)
    except RubricError:
        print("  no category rated above 0 yet; no weights to show")
        return
    catalog = store.get_catalog(profile.catalog_id, profile.catalog_version)
    names = {category.id: category.name for category in catalog.categories}
    print("  category importance and weight")
    for cid, value in profile.category_importance.items():
        if value > 0:
            print(f"    {cid} {names[cid]:<28} {value}  "
                  f"{engine.format_percent(category_weights[cid]):>7}")
    print("  criterion importance and weight")
    for crit_id, value in profile.criterion_importance.items():
        if value > 0:
            weights = criterion_weights.get(crit_id.rsplit(".", 1)[0], {})
            shown = engine.format_percent(weights[crit_id]) if crit_id in weights \
                else "-"
            print(f"    {crit_id:<6} {value}  {shown:>7}")


def _cmd_profile_show(args: argparse.Namespace) -> int:
    store = _open(args)
    profile = store.get_profile(args.profile_id, args.revision)
    if args.json:
        _emit_json(profile_document(profile))
    else:
        _print_profile(store, profile)
    return 0


def _cmd_profile_list(args: argparse.Namespace) -> int:
    store = _open(args)
    profiles = store.list_profiles()
    if args.json:
        _emit_json({"profiles": [profile_document(p) for p in profiles]})
        return 0
    for profile in profiles:
        print(f"{profile.profile_id} r{profile.revision}: {profile.name}")
    return 0


def _cmd_profile_delete(args: argparse.Namespace) -> int:
    _open(args).delete_profile(args.profile_id)
    print(f"deleted profile {args.profile_id}")
    return 0


def _cmd_profile_weights(args: argparse.Namespace) -> int:
    category, criterion = _importance_maps(args.set)
    category_weights, criterion_weights = evaluation.weight_preview(category,
                                                                    criterion)
    if args.json:
        _emit_json({
            "category_weights": category_weights,
            "criterion_weights": criterion_weights,
            "display": {
                "category": {cid: engine.format_percent(w)
                             for cid, w in category_weights.items()},
                "criterion": {crit_id: engine.format_percent(w)
                              for members in criterion_weights.values()
                              for crit_id, w in members.items()},
            },
        })
        return 0
    print("category weights")
    for cid, weight in category_weights.items():
        print(f"  {cid:<4} {engine.format_percent(weight):>7}")
    if criterion_weights:
        print("criterion weights")
        for members in criterion_weights.values():
            for crit_id, weight in members.items():
                print(f"  {crit_id:<4} {engine.format_percent(weight):>7}")
    return 0


def _cmd_article_add(args: argparse.Namespace) -> int:
    store = _open(args)
    article = evaluation.ArticleRecord(
        article_id=args.article_id, title=args.title, authors=args.authors,
        year=args.year, source=args.source, notes=args.notes)
    store.put_article(article)
    print(f"added article {article.article_id}")
    return 0


def _cmd_article_list(args: argparse.Namespace) -> int:
    store = _open(args)
    articles = store.list_articles()
    if args.json:
        _emit_json({"articles": [article_document(a) for a in articles]})
        return 0
    for article in articles:
        year = f" ({article.year})" if article.year else ""
        print(f"{article.article_id}: {article.title}{year}")
    return 0


def _cmd_article_remove(args: argparse.Namespace) -> int:
    _open(args).delete_article(args.article_id)
    print(f"removed article {args.article_id}")
    return 0


def _cmd_assess_create(args: argparse.Namespace) -> int:
    store = _open(args)
    profile = store.get_profile(args.profile)
    assessment_id = args.id or f"{args.article_id}@{args.profile}"
    assessment = evaluation.new_assessment(assessment_id, args.article_id,
                                           profile)
    store.put_assessment(assessment)
    print(f"created assessment {assessment.assessment_id} "
          f"({assessment.status}, pins {profile.profile_id} "
          f"r{profile.revision})")
    return 0


def _cmd_assess_score(args: argparse.Namespace) -> int:
    store = _open(args)
    assessment = store.get_assessment(args.assessment_id)
    profile = store.get_profile(assessment.profile_id,
                                assessment.profile_revision)
    pairs = _parse_pairs(args.pairs)
    scores = {target: _score_value(target, value)
              for target, value in pairs.items()}
    updated = evaluation.update_scores(assessment, profile, scores)
    store.put_assessment(updated)
    print(f"{updated.assessment_id} r{updated.revision}: {updated.status}")
    return 0


def _cmd_assess_show(args: argparse.Namespace) -> int:
    assessment = _open(args).get_assessment(args.assessment_id)
    if args.json:
        _emit_json(assessment_document(assessment))
        return 0
    print(f"{assessment.assessment_id}: article {assessment.article_id} "
          f"under {assessment.profile_id} r{assessment.profile_revision} "
          f"({assessment.status})")
    for criterion_id, value in assessment.scores.items():
        print(f"  {criterion_id} = {value}")
    return 0


def _cmd_assess_list(args: argparse.Namespace) -> int:
    store = _open(args)
    assessments = store.list_assessments(profile_id=args.profile,
                                         article_id=args.article)
    if args.json:
        _emit_json({"assessments": [assessment_document(a)
                                    for a in assessments]})
        return 0
    for assessment in assessments:
        print(f"{assessment.assessment_id} ({assessment.status})")
    return 0


def _cmd_assess_remove(args: argparse.Namespace) -> int:
    _open(args).delete_assessment(args.assessment_id)
    print(f"removed assessment {args.assessment_id}")
    return 0


def _cmd_rate(args: argparse.Namespace) -> int:
    store = _open(args)
    assessment = store.get_assessment(args.assessment_id)
    if assessment.status != evaluation.COMPLETE:
        raise IncompleteAssessmentError(
            f"assessment {assessment.assessment_id} is still a draft",
            detail={"assessment_id": assessment.assessment_id})
    profile = store.get_profile(assessment.profile_id,
                                assessment.profile_revision)
    catalog = store.get_catalog(profile.catalog_id, profile.catalog_version)
    report = engine.evaluate(catalog, profile, assessment)
    if args.json:
        _emit_json({
            "assessment_id": assessment.assessment_id,
            "article_id": assessment.article_id,
            "profile_id": assessment.profile_id,
            "profile_revision": assessment.profile_revision,
            "article_rating": report.article_rating,
            "category_scores": report.category_scores,
            "category_weights": report.category_weights,
            "criterion_weights": report.criterion_weights,
            "display": report.display_percentages,
        })
        return 0
    names = {category.id: category.name for category in catalog.categories}
    print(f"{assessment.article_id} under {profile.profile_id} "
          f"r{profile.revision}")
    for cid, score in report.category_scores.items():
        print(f"  {cid} {names[cid]:<28} {engine.format_percent(score):>7}  "
              f"(weight {engine.format_percent(report.category_weights[cid])})")
    print(f"  article rating {engine.format_percent(report.article_rating):>21}")
    return 0


def _cmd_rank(args: argparse.Namespace) -> int:
    store = _open(args)
    profile = store.get_profile(args.profile, args.revision)
    catalog = store.get_catalog(profile.catalog_id, profile.catalog_version)
    ranking = evaluation.rank_articles(catalog, profile,
                                       _complete_assessments(store, profile))
    if args.json:
        _emit_json({
            "profile_id": profile.profile_id,
            "revision": profile.revision,
            "ranking": [
                {"article_id": e.article_id, "rank": e.rank,
                 "article_rating": e.article_rating,
                 "display": engine.format_percent(e.article_rating)}
                for e in ranking
            ],
        })
        return 0
    print("rank  rating    article_id")
    for entry in ranking:
        print(f"{entry.rank:>4}  {engine.format_percent(entry.article_rating):>8}"
              f"  {entry.article_id}")
    return 0


def _cmd_whatif(args: argparse.Namespace) -> int:
    store = _open(args)
    profile = store.get_profile(args.profile, args.revision)
    catalog = store.get_catalog(profile.catalog_id, profile.catalog_version)
    assessments = _complete_assessments(store, profile)
    if args.scan:
        if args.set:
            raise ValidationError("--scan takes no --set deltas")
        flags = stability_scan(catalog, profile, assessments)
        if args.json:
            _emit_json({"profile_id": profile.profile_id,
                        "revision": profile.revision, "stability": flags})
            return 0
        print("one-notch importance probes")
        for target, fragile in flags.items():
            print(f"  {target:<6} {'fragile' if fragile else 'stable'}")
        return 0
    pairs = _parse_pairs(args.set or [])
    deltas = [WhatIfDelta(target=target, new_importance=_int_value(target, value))
              for target, value in pairs.items()]
    report = what_if(catalog, profile, assessments, deltas)
    if args.json:
        _emit_json({
            "profile_id": profile.profile_id,
            "revision": profile.revision,
            "baseline": [
                {"article_id": e.article_id, "rank": e.rank,
                 "article_rating": e.article_rating}
                for e in report.baseline_ranking
            ],
            "perturbed": [
                {"article_id": e.article_id, "rank": e.rank,
                 "article_rating": e.article_rating}
                for e in report.perturbed_ranking
            ],
            "rating_deltas": report.rating_deltas,
            "rank_reversals": [list(pair) for pair in report.rank_reversals],
        })
        return 0
    perturbed = {e.article_id: e.article_rating for e in report.perturbed_ranking}
    print(f"what-if on {profile.profile_id} r{profile.revision} "
          f"({len(deltas)} delta{'s' if len(deltas) != 1 else ''})")
    for entry in report.baseline_ranking:
        delta = report.rating_deltas[entry.article_id]
        print(f"  {entry.article_id:<12} "
              f"{engine.format_percent(entry.article_rating):>8} -> "
              f"{engine.format_percent(perturbed[entry.article_id]):>8}  "
              f"({engine.format_percent(delta)})")
    if report.rank_reversals:
        for first, second in report.rank_reversals:
            print(f"  reversal: {second} overtakes {first}")
    else:
        print("  no rank reversals")
    return 0


def _cmd_export(args: argparse.Namespace) -> int:
    store = _open(args)
    profile = store.get_profile(args.profile, args.revision)
    catalog = store.get_catalog(profile.catalog_id, profile.catalog_version)
    if args.what == "ratings":
        assessments = _complete_assessments(store, profile)
        articles = {a.article_id: a for a in store.list_articles()}
        document = export_ratings(catalog, profile, assessments, articles)
    else:
        assessments = [
            a for a in store.list_assessments(profile_id=profile.profile_id)
            if a.profile_revision == profile.revision
        ]
        document = export_assessments(catalog, profile, assessments)
    if args.output:
        Path(args.output).write_text(document, encoding="utf-8")
        print(f"wrote {args.output}")
    else:
        print(document, end="")
    return 0


def _cmd_import(args: argparse.Namespace) -> int:
    store = _open(args)
    profile = store.get_profile(args.profile)
    catalog = store.get_catalog(profile.catalog_id, profile.catalog_version)
    try:
        document = Path(args.file).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {args.file}: {exc}")
    assessments = import_assessment_csv(document, catalog, profile)
    for assessment in assessments:
        try:
            store.get_article(assessment.article_id)
        except NotFoundError:
            raise ValidationError(
                f"article {assessment.article_id} is not in the store; "
                f"add it before importing its scores")
    for assessment in assessments:
        store.put_assessment(assessment)
        print(f"stored {assessment.assessment_id} ({assessment.status})")
    return 0


def _cmd_demo(args: argparse.Namespace) -> int:
    print("\n".join(demo_lines()))
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    from .service import serve

    serve(_store_path(args), args.addr)
    return 0


# -- parser -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rubric",
        description="Weighted-criteria article rating from the command line.")
    parser.add_argument("--store", help="store directory (default: "
                        "$RUBRIC_STORE or ./rubric-store)")
    commands = parser.add_subparsers(dest="command", required=True)

    sub = commands.add_parser("init", help="create a new store")
    sub.set_defaults(handler=_cmd_init)

    catalog = commands.add_parser("catalog", help="criteria catalogs")
    catalog_sub = catalog.add_subparsers(dest="subcommand", required=True)
    sub = catalog_sub.add_parser("show", help="print a catalog")
    sub.add_argument("--id", default="builtin")
    sub.add_argument("--version")
    sub.add_argument("--json", action="store_true")
    sub.set_defaults(handler=_cmd_catalog_show)
    sub = catalog_sub.add_parser("add", help="store a catalog from a JSON file")
    sub.add_argument("file")
    sub.set_defaults(handler=_cmd_catalog_add)

    profile = commands.add_parser("profile", help="weight profiles")
    profile_sub = profile.add_subparsers(dest="subcommand", required=True)
    sub = profile_sub.add_parser("create", help="create a profile")
    sub.add_argument("profile_id")
    sub.add_argument("--name", required=True)
    sub.add_argument("--catalog", default="builtin")
    sub.add_argument("--catalog-version")
    sub.add_argument("--set", nargs="+", metavar="TARGET=0..5",
                     help="initial importances, e.g. 1=4 1.1=5")
    sub.set_defaults(handler=_cmd_profile_create)
    sub = profile_sub.add_parser("set-importance",
                                 help="change importances (one revision)")
    sub.add_argument("profile_id")
    sub.add_argument("--set", nargs="+", required=True, metavar="TARGET=0..5")
    sub.set_defaults(handler=_cmd_profile_set_importance)
    sub = profile_sub.add_parser("show", help="print a profile with weights")
    sub.add_argument("profile_id")
    sub.add_argument("--revision", type=int)
    sub.add_argument("--json", action="store_true")
    sub.set_defaults(handler=_cmd_profile_show)
    sub = profile_sub.add_parser("list", help="list profiles")
    sub.add_argument("--json", action="store_true")
    sub.set_defaults(handler=_cmd_profile_list)
    sub = profile_sub.add_parser("delete", help="delete a profile")
    sub.add_argument("profile_id")
    sub.set_defaults(handler=_cmd_profile_delete)
    sub = profile_sub.add_parser("weights",
                                 help="preview weights for given importances")
    sub.add_argument("--set", nargs="+", required=True, metavar="TARGET=0..5")
    sub.add_argument("--json", action="store_true")
    sub.set_defaults(handler=_cmd_profile_weights)

    article = commands.add_parser("article", help="articles under evaluation")
    article_sub = article.add_subparsers(dest="subcommand", required=True)
    sub = article_sub.add_parser("add", help="register an article")
    sub.add_argument("article_id")
    sub.add_argument("--title", required=True)
    sub.add_argument("--authors")
    sub.add_argument("--year", type=int)
    sub.add_argument("--source")
    sub.add_argument("--notes")
    sub.set_defaults(handler=_cmd_article_add)
    sub = article_sub.add_parser("list", help="list articles")
    sub.add_argument("--json", action="store_true")
    sub.set_defaults(handler=_cmd_article_list)
    sub = article_sub.add_parser("remove", help="remove an article")
    sub.add_argument("article_id")
    sub.set_defaults(handler=_cmd_article_remove)

    assess = commands.add_parser("assess", help="score articles")
    assess_sub = assess.add_subparsers(dest="subcommand", required=True)
    sub = assess_sub.add_parser("create", help="start a draft assessment")
    sub.add_argument("article_id")
    sub.add_argument("--profile", required=True)
    sub.add_argument("--id", help="assessment id "
                     "(default: <article>@<profile>)")
    sub.set_defaults(handler=_cmd_assess_create)
    sub = assess_sub.add_parser("score", help="record scores (one revision)")
    sub.add_argument("assessment_id")
    sub.add_argument("pairs", nargs="+", metavar="CRITERION=1..5|NA|-",
                     help="e.g. 1.1=4 2.2=NA 2.1=-  (- removes a score)")
    sub.set_defaults(handler=_cmd_assess_score)
    sub = assess_sub.add_parser("show", help="print an assessment")
    sub.add_argument("assessment_id")
    sub.add_argument("--json", action="store_true")
    sub.set_defaults(handler=_cmd_assess_show)
    sub = assess_sub.add_parser("list", help="list assessments")
    sub.add_argument("--profile")
    sub.add_argument("--article")
    sub.add_argument("--json", action="store_true")
    sub.set_defaults(handler=_cmd_assess_list)
    sub = assess_sub.add_parser("remove", help="delete an assessment")
    sub.add_argument("assessment_id")
    sub.set_defaults(handler=_cmd_assess_remove)

    sub = commands.add_parser("rate", help="evaluate one complete assessment")
    sub.add_argument("assessment_id")
    sub.add_argument("--json", action="store_true")
    sub.set_defaults(handler=_cmd_rate)

    sub = commands.add_parser("rank", help="rank a profile's articles")
    sub.add_argument("--profile", required=True)
    sub.add_argument("--revision", type=int)
    sub.add_argument("--json", action="store_true")
    sub.set_defaults(handler=_cmd_rank)

    sub = commands.add_parser("whatif",
                              help="transient importance perturbations")
    sub.add_argument("--profile", required=True)
    sub.add_argument("--revision", type=int)
    sub.add_argument("--set", nargs="+", metavar="TARGET=0..5")
    sub.add_argument("--scan", action="store_true",
                     help="probe every target one notch up and down")
    sub.add_argument("--json", action="store_true")
    sub.set_defaults(handler=_cmd_whatif)

    export = commands.add_parser("export", help="write CSV documents")
    export.add_argument("what", choices=["ratings", "assessments"])
    export.add_argument("--profile", required=True)
    export.add_argument("--revision", type=int)
    export.add_argument("-o", "--output")
    export.set_defaults(handler=_cmd_export)

    imp = commands.add_parser("import", help="read assessments from CSV")
    imp.add_argument("what", choices=["assessments"])
    imp.add_argument("file")
    imp.add_argument("--profile", required=True)
    imp.set_defaults(handler=_cmd_import)

    sub = commands.add_parser("demo",
                              help="print the worked example, step by step")
    sub.set_defaults(handler=_cmd_demo)

    sub = commands.add_parser("serve", help="run the HTTP service")
    sub.add_argument("--addr", help="bind address (default: $RUBRIC_ADDR "
                     "or 127.0.0.1:8000)")
    sub.set_defaults(handler=_cmd_serve)

    return parser


def command_tree() -> dict[str, set[str]]:
    """Subcommand names keyed by top-level command, for parity checks."""
    tree: dict[str, set[str]] = {}
    parser = build_parser()
    top = next(action for action in parser._actions
               if isinstance(action, argparse._SubParsersAction))
    for name, sub in top.choices.items():
        nested: set[str] = set()
        for action in sub._actions:
            if isinstance(action, argparse._SubParsersAction):
                nested |= set(action.choices)
        tree[name] = nested
    return tree


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.handler(args)
    except RubricError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
