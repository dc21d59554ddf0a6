"""Command-line interface.

Subcommands compose the library modules: ingest, stats, audit, chi2,
ava-extract, ava-apply, report, annotate-serve. Data goes to standard
output or --out files; diagnostics go to standard error. Exit codes:
0 success, 1 validation/usage error, 2 I/O or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import annotate
from .audit import cross_table, frequency_table, matchset_to_jsonl, run_audit, top_terms
from .config import load_config
from .corpus import PROFILES, Partition, corpus_stats, load_corpus
from .errors import ConfigError, LexauditError, ParseError, ValidationError
from .lexicon import (
    Dictionary,
    dump_dictionary,
    load_ava,
    load_dictionary,
    merge,
    subtract,
)
from .report import (
    fmt_p,
    fmt_statistic,
    render_audit,
    render_chi2,
    report_filename,
    report_from_json,
)
from .stats import Chi2Result, chi2_2x2, chi2_gof
from .stopwords import STOPWORDS, load_stopwords


class _Parser(argparse.ArgumentParser):
    """argparse that exits 1 on usage errors, per the CLI contract."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _write(data: str | bytes, out: str | None) -> None:
    if isinstance(data, str):
        data = data.encode("utf-8")
    if out is None or out == "-":
        sys.stdout.buffer.write(data)
    else:
        Path(out).write_bytes(data)


def _load_corpus_args(args) -> "list":
    corpora = []
    names = args.corpus_name or []
    partitions = args.partition or []
    for i, path in enumerate(args.corpus):
        fmt = args.format[i] if i < len(args.format) else args.format[-1]
        name = names[i] if i < len(names) else None
        partition = partitions[i] if i < len(partitions) else "unpartitioned"
        corpora.append(load_corpus(path, fmt, name=name, partition=partition))
    return corpora


_FORMAT_FOR_SUFFIX = {
    ".csv": "scored_csv",
    ".jsonl": "native_jsonl",
    ".txt": "categorical_list",
}


def _dict_format_for(path: str, formats: list[str], index: int) -> str:
    if index < len(formats):
        return formats[index]
    if formats:
        return formats[-1]
    inferred = _FORMAT_FOR_SUFFIX.get(Path(path).suffix.lower())
    if inferred is None:
        raise ConfigError(
            f"cannot infer dictionary format for {path!r}; pass --dict-format"
        )
    return inferred


def _load_dict_args(args) -> Dictionary:
    if not args.dict:
        raise ConfigError("at least one --dict is required")
    categories = args.dict_category or []
    loaded = []
    for i, path in enumerate(args.dict):
        fmt = _dict_format_for(path, args.dict_format, i)
        category = categories[i] if i < len(categories) else None
        loaded.append(load_dictionary(path, fmt, category=category))
    if len(loaded) == 1:
        dictionary = loaded[0]
    else:
        dictionary = merge(loaded)
    if args.dict_name:
        dictionary = Dictionary(
            args.dict_name,
            dictionary.entries,
            dictionary.metadata,
            dictionary.duplicates_dropped,
        )
    return dictionary


def _add_corpus_flags(parser, multiple=False):
    action = "append" if multiple else None
    parser.add_argument("--corpus", required=True, action=action,
                        help="corpus file path")
    parser.add_argument("--format", required=True, action=action,
                        choices=["massive", "redial"] if not multiple else None,
                        help="corpus format: massive or redial")
    parser.add_argument("--corpus-name", action=action,
                        help="override the corpus name (default: file stem)")
    parser.add_argument("--partition", action=action,
                        help="partition label for redial files (train/test)")


def _add_dict_flags(parser):
    parser.add_argument("--dict", action="append", default=[],
                        help="dictionary file (repeatable; repeated dictionaries merge)")
    parser.add_argument("--dict-format", action="append", default=[],
                        help="dictionary format: categorical_list, scored_csv, "
                             "gender_tag_json, ava_jsonl, pronoun_lists, "
                             "name_lists, native_jsonl (default: inferred from "
                             "extension: .txt/.csv/.jsonl)")
    parser.add_argument("--dict-category", action="append",
                        help="override entry category for the matching --dict")
    parser.add_argument("--dict-name", help="name for the (merged) dictionary")


def _profile(args):
    if args.profile not in PROFILES:
        raise ConfigError(
            f"unknown profile {args.profile!r}; choose from {sorted(PROFILES)}"
        )
    return PROFILES[args.profile]


def _stopwords(args):
    return load_stopwords(args.stopwords) if getattr(args, "stopwords", None) else STOPWORDS


def cmd_ingest(args) -> int:
    corpus = load_corpus(args.corpus, args.format,
                         name=args.corpus_name,
                         partition=args.partition or "unpartitioned")
    lines = [
        json.dumps(
            {"id": u.id, "partition": u.partition.value, "text": u.text, "meta": u.meta},
            ensure_ascii=False,
        )
        for u in corpus
    ]
    _write("\n".join(lines) + ("\n" if lines else ""), args.out)
    print(
        f"{corpus.name}: {len(corpus)} utterances, partitions: "
        f"{', '.join(p.value for p in corpus.partitions) or 'none'}",
        file=sys.stderr,
    )
    return 0


def cmd_stats(args) -> int:
    corpus = load_corpus(args.corpus, args.format,
                         name=args.corpus_name,
                         partition=args.partition or "unpartitioned")
    stats = corpus_stats(corpus, _profile(args), _stopwords(args))
    payload = {
        "corpus": corpus.name,
        "profile": args.profile,
        "total_tokens": stats.total_tokens,
        "unique_surface": stats.unique_surface,
        "unique_processed": stats.unique_processed,
        "per_partition_counts": stats.per_partition_counts,
    }
    _write(json.dumps(payload, ensure_ascii=False, indent=2) + "\n", args.out)
    return 0


def cmd_audit(args) -> int:
    corpus = load_corpus(args.corpus, args.format,
                         name=args.corpus_name,
                         partition=args.partition or "unpartitioned")
    dictionary = _load_dict_args(args)
    ava = None
    if args.ava:
        ava = (load_ava(args.ava), args.ava_mode)
    matchset = run_audit(
        corpus,
        dictionary,
        _profile(args),
        ava=ava,
        exclusions=args.exclude,
        stopwords=_stopwords(args),
        workers=args.workers,
    )
    report = frequency_table(matchset)
    if args.export_matches:
        Path(args.export_matches).write_text(matchset_to_jsonl(matchset), encoding="utf-8")
    if args.top:
        for term, gender, freq in top_terms(matchset, args.top):
            print(f"{term}\t{gender.value}\t{freq}", file=sys.stderr)
    _write(render_audit(report, "json"), args.out)
    return 0


def cmd_chi2(args) -> int:
    def numbers(values) -> list[float]:
        try:
            return [float(x) for x in values]
        except ValueError as exc:
            raise ConfigError(f"counts must be numeric: {exc}") from None

    if args.test == "gof":
        proportions = None
        if args.proportions:
            proportions = numbers(args.proportions.split(","))
        result = chi2_gof(numbers(args.counts), proportions)
    else:
        a, b, c, d = numbers(args.counts)
        result = chi2_2x2([[a, b], [c, d]], yates=args.yates)
    if args.json:
        payload = [{
            "label": args.label or args.test,
            "statistic": result.statistic,
            "df": result.df,
            "p": result.p,
            "corrected": result.corrected,
        }]
        _write(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        _write(f"{fmt_statistic(result.statistic)} {result.df} {fmt_p(result.p)}\n",
               args.out)
    return 0


def cmd_ava_extract(args) -> int:
    corpora = {c.name: c for c in _load_corpus_args(args)}
    dictionary = _load_dict_args(args)
    profile = _profile(args)
    stopwords = _stopwords(args)
    matchsets = [
        run_audit(c, dictionary, profile, stopwords=stopwords, workers=args.workers)
        for c in corpora.values()
    ]
    candidates = annotate.extract_candidates(
        matchsets, corpora, samples_per_corpus=args.samples, window=args.window,
        stopwords=stopwords,
    )
    payload = [c.to_dict() for c in candidates]
    _write(json.dumps(payload, ensure_ascii=False, indent=2) + "\n", args.out)
    print(f"extracted {len(candidates)} candidate terms", file=sys.stderr)
    return 0


def cmd_ava_apply(args) -> int:
    dictionary = _load_dict_args(args)
    entries = load_ava(args.ava)
    result = subtract(dictionary, entries, mode=args.mode, name=args.dict_name)
    _write(dump_dictionary(result), args.out)
    print(
        f"{len(dictionary)} entries -> {len(result)} after {args.mode}",
        file=sys.stderr,
    )
    return 0


def cmd_report(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    formats = [f.strip() for f in args.formats.split(",") if f.strip()]
    ext = {"markdown": "md", "csv": "csv", "json": "json"}
    written: list[Path] = []
    for path in args.audit or []:
        report = report_from_json(Path(path).read_text(encoding="utf-8"))
        base = (report.corpus_name, report.dictionary_name, report.profile_name)
        for fmt in formats:
            if fmt not in ext:
                raise ConfigError(f"unknown report format {fmt!r}")
            target = out_dir / report_filename(*base, ext[fmt])
            target.write_bytes(render_audit(report, fmt))
            written.append(target)
        if args.figures:
            from .figures import audit_figure

            written.append(audit_figure(report, out_dir / report_filename(*base, "png")))
    if args.chi2:
        rows = json.loads(Path(args.chi2).read_text(encoding="utf-8"))
        results = [
            (row["label"],
             Chi2Result(row["statistic"], row["df"], row["p"],
                        row.get("corrected", False)))
            for row in rows
        ]
        for fmt in formats:
            target = out_dir / f"chi2.{ext[fmt]}"
            target.write_bytes(render_chi2(results, fmt))
            written.append(target)
        if args.figures:
            from .figures import chi2_figure

            written.append(chi2_figure(results, out_dir / "chi2.png"))
    for path in written:
        print(path, file=sys.stderr)
    return 0


def cmd_annotate_serve(args) -> int:
    import uvicorn

    from .service import create_app, state_from_config

    config = load_config(args.config)
    host = args.host or config.host
    port = args.port or config.port
    if host not in ("127.0.0.1", "localhost", "::1") and not args.unsafe_bind:
        raise ConfigError(
            f"refusing to bind non-loopback address {host!r} without --unsafe-bind"
        )
    state = state_from_config(config)
    app = create_app(state)
    print(f"serving on http://{host}:{port}", file=sys.stderr)
    uvicorn.run(app, host=host, port=port, log_level="warning")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="lexaudit", description=__doc__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("ingest", help="parse a corpus and emit normalized JSONL")
    _add_corpus_flags(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("stats", help="corpus token statistics")
    _add_corpus_flags(p)
    p.add_argument("--profile", default="gendered_language")
    p.add_argument("--stopwords", help="alternative stop-word list file")
    p.add_argument("--out")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("audit", help="match a dictionary against a corpus")
    _add_corpus_flags(p)
    _add_dict_flags(p)
    p.add_argument("--profile", default="gendered_language")
    p.add_argument("--ava", help="ambiguous-terms JSONL to apply")
    p.add_argument("--ava-mode", choices=["remove", "flag"], default="remove")
    p.add_argument("--exclude", nargs="*", default=None,
                   help="literal tokens to exclude (default: agent names for "
                        "name audits)")
    p.add_argument("--stopwords")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--top", type=int, default=0,
                   help="print the top K terms to stderr")
    p.add_argument("--export-matches", help="write the match set JSONL here")
    p.add_argument("--out")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("chi2", help="chi-square tests")
    chi2_sub = p.add_subparsers(dest="test", required=True, parser_class=_Parser)
    g = chi2_sub.add_parser("gof", help="goodness of fit against proportions")
    g.add_argument("counts", nargs="+")
    g.add_argument("--proportions", help="comma-separated expected proportions")
    g.add_argument("--label")
    g.add_argument("--json", action="store_true", help="emit full-precision JSON")
    g.add_argument("--out")
    g.set_defaults(func=cmd_chi2)
    i = chi2_sub.add_parser("ind", help="2x2 independence (a b c d, row-major)")
    i.add_argument("counts", nargs=4)
    yates = i.add_mutually_exclusive_group()
    yates.add_argument("--yates", dest="yates", action="store_true", default=True)
    yates.add_argument("--no-yates", dest="yates", action="store_false")
    i.add_argument("--label")
    i.add_argument("--json", action="store_true")
    i.add_argument("--out")
    i.set_defaults(func=cmd_chi2)

    p = sub.add_parser("ava-extract", help="extract candidate ambiguous terms")
    _add_corpus_flags(p, multiple=True)
    _add_dict_flags(p)
    p.add_argument("--profile", default="gendered_language")
    p.add_argument("--samples", type=int, default=5)
    p.add_argument("--window", type=int, default=5)
    p.add_argument("--stopwords")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_ava_extract)

    p = sub.add_parser("ava-apply", help="remove or flag ambiguous terms in a dictionary")
    _add_dict_flags(p)
    p.add_argument("--ava", required=True)
    p.add_argument("--mode", choices=["remove", "flag"], default="remove")
    p.add_argument("--out")
    p.set_defaults(func=cmd_ava_apply)

    p = sub.add_parser("report", help="render report files (tables and figures)")
    p.add_argument("--audit", action="append",
                   help="audit report JSON produced by the audit subcommand")
    p.add_argument("--chi2", help="chi-square results JSON")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--formats", default="markdown,csv,json")
    figures = p.add_mutually_exclusive_group()
    figures.add_argument("--figures", dest="figures", action="store_true", default=True)
    figures.add_argument("--no-figures", dest="figures", action="store_false")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("annotate-serve", help="serve the annotation API")
    p.add_argument("--config", help="config path (default: $LEXAUDIT_CONFIG)")
    p.add_argument("--host")
    p.add_argument("--port", type=int)
    p.add_argument("--unsafe-bind", action="store_true",
                   help="allow binding a non-loopback address")
    p.set_defaults(func=cmd_annotate_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if not getattr(args, "func", None):
        parser.print_usage(sys.stderr)
        return 1
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"lexaudit: parse error: {exc}", file=sys.stderr)
        return 2
    except (ConfigError, ValidationError) as exc:
        print(f"lexaudit: {exc}", file=sys.stderr)
        return 1
    except LexauditError as exc:
        print(f"lexaudit: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"lexaudit: i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
