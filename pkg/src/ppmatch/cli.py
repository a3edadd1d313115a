"""Command-line front end: ``ppmatch induce|extract-templates|coverage|match``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import data
from .bilingual import (coverage_report, extract_templates, format_coverage,
                        format_database, format_entry, load_bilingual)
from .builder import (AmbiguousResult, Failure, Options, Resources, induce_corpus,
                      parse_sentence)
from .grammar import Language, UnknownWordError, EmptyInputError, get_bag
from .items import format_bag, variable_names
from .matching import format_index_map, format_item_map, match_bags
from .syntax import ParseError
from .transfer import NoCoverError, transfer, transfer_rules

log = logging.getLogger("ppmatch")

EXIT_OK, EXIT_NONE, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


@dataclass
class PipelineConfig:
    src_grammar: Path
    tgt_grammar: Path
    src_lex: Path
    tgt_lex: Path
    templates: list[Path]
    bilex: list[Path] = field(default_factory=list)
    corpus: Path | None = None
    out: Path | None = None
    review: Path | None = None
    report: Path | None = None
    mode: str = "block"
    feedback: bool = True
    jobs: int = 1
    max_parses: int = 16
    max_candidates: int = 64

    @classmethod
    def from_args(cls, args) -> PipelineConfig:
        fx = getattr(args, "fixtures", False)
        pick = lambda value, name: Path(value) if value else (data.path(name) if fx else None)
        cfg = cls(
            src_grammar=pick(args.src_grammar, "en.grammar"),
            tgt_grammar=pick(args.tgt_grammar, "es.grammar"),
            src_lex=pick(args.src_lex, "en.lex"),
            tgt_lex=pick(args.tgt_lex, "es.lex"),
            templates=[Path(p) for p in args.templates] or
                      ([data.path("templates.tpl")] if fx else []),
            bilex=([data.path("closed.bilex")] if fx else []) + [Path(p) for p in args.bilex],
            corpus=Path(args.corpus) if getattr(args, "corpus", None) else None,
            out=Path(args.out) if getattr(args, "out", None) else None,
            review=Path(args.review) if getattr(args, "review", None) else None,
            report=Path(args.report) if getattr(args, "report", None) else None,
            mode=getattr(args, "mode", "block"),
            feedback=not getattr(args, "no_feedback", False),
            jobs=getattr(args, "jobs", 1),
            max_parses=args.max_parses,
            max_candidates=args.max_candidates,
        )
        missing = [n for n in ("src_grammar", "tgt_grammar", "src_lex", "tgt_lex")
                   if getattr(cfg, n) is None]
        if missing:
            raise InputError("missing " + ", ".join("--" + m.replace("_", "-") for m in missing)
                             + " (or use --fixtures)")
        if not cfg.templates:
            raise InputError("at least one --templates file is required (or use --fixtures)")
        if cfg.max_parses < 1 or cfg.max_candidates < 1 or cfg.jobs < 1:
            raise InputError("limits must be at least 1")
        return cfg

    def load(self) -> Resources:
        src = Language.from_files(self.src_grammar, self.src_lex)
        tgt = Language.from_files(self.tgt_grammar, self.tgt_lex)
        entries, templates = [], None
        for p in self.templates:
            es, db = load_bilingual(p, src.macros, tgt.macros)
            entries += es
            if templates is None:
                templates = db
            else:
                for t in db:
                    if t.id in templates:
                        raise ParseError(f"duplicate template id {t.id!r}", None, str(p))
                    templates.templates[t.id] = t
                    templates.counts[t.id] = db.count(t.id)
        for p in self.bilex:
            es, _ = load_bilingual(p, src.macros, tgt.macros)
            entries += es
        return Resources(src, tgt, templates, tuple(entries))


def read_corpus(path: Path) -> list[tuple[str, str]]:
    pairs = []
    for n, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ParseError("expected 'source<TAB>target'", n, str(path))
        pairs.append((parts[0].strip(), parts[1].strip()))
    return pairs


def interactive_resolve(candidates, src_macros=None, tgt_macros=None,
                        stdin=None, stdout=None):
    """Ask on the terminal which candidate set to commit; None means skip."""
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    for k, c in enumerate(candidates, 1):
        print(f"# candidate {k} provenance={c.provenance}", file=stdout)
        stdout.write(c.serialize(src_macros, tgt_macros) or "# (no new entries)\n")
    while True:
        print(f"choose 1-{len(candidates)} or 'skip': ", end="", file=stdout, flush=True)
        answer = stdin.readline()
        if not answer:
            return None
        answer = answer.strip().lower()
        if answer in ("s", "skip"):
            return None
        if answer.isdigit() and 1 <= int(answer) <= len(candidates):
            return int(answer) - 1
        print(f"not a choice: {answer!r}", file=stdout)


def _format_review(pair_no, source, target, result, src_macros, tgt_macros) -> str:
    lines = [f"# pair {pair_no}: {source}\t{target}"]
    if result.overflow:
        lines.append("# candidate limit exceeded; listing the first candidates")
    for k, c in enumerate(result.candidates, 1):
        score = "-" if c.score is None else str(c.score)
        lines.append(f"# candidate {k} score={score} provenance={c.provenance}")
        lines.extend(format_entry(e, src_macros, tgt_macros) for e in c.entries)
    return "\n".join(lines) + "\n"


def cmd_induce(args) -> int:
    cfg = PipelineConfig.from_args(args)
    if cfg.corpus is None:
        raise InputError("--corpus is required")
    res = cfg.load()
    pairs = read_corpus(cfg.corpus)
    mode, chooser = cfg.mode, None
    src_m, tgt_m = res.source.macros, res.target.macros
    if mode == "interactive":
        if not sys.stdin.isatty():
            log.warning("stdin is not a terminal; falling back to block mode")
            mode = "block"
        else:
            chooser = lambda cands: interactive_resolve(cands, src_m, tgt_m)
    opts = Options(mode, cfg.max_parses, cfg.max_candidates, chooser)
    run = induce_corpus(pairs, res, opts, feedback=cfg.feedback,
                        jobs=cfg.jobs if not cfg.feedback else 1)

    entries_text = "".join(format_entry(e, src_m, tgt_m) + "\n" for e in run.new_entries)
    review = []
    for n, ((s, t), r) in enumerate(zip(pairs, run.results), 1):
        if isinstance(r, AmbiguousResult) and r.chosen is None:
            review.append(_format_review(n, s, t, r, src_m, tgt_m))
        elif isinstance(r, Failure):
            log.info("pair %d failed: %s", n, r)
    if cfg.out:
        cfg.out.write_text(entries_text, encoding="utf-8")
    else:
        sys.stdout.write(entries_text)
    if cfg.review:
        cfg.review.write_text("\n".join(review), encoding="utf-8")
    summary = run.summary
    if cfg.report:
        cfg.report.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n",
                              encoding="utf-8")
    print(f"pairs={summary['pairs']} unique={summary['unique']} "
          f"ambiguous={summary['ambiguous']} failed={summary['failed']} "
          f"resolved={summary['resolved']} new_entries={len(run.new_entries)}",
          file=sys.stderr)
    for stage, n in summary["failed_by_stage"].items():
        print(f"  failed {stage}: {n}", file=sys.stderr)
    succeeded = summary["unique"] + summary["resolved"]
    return EXIT_OK if succeeded else EXIT_NONE


def _load_lexicon_file(args):
    src_m = tgt_m = None
    if args.src_grammar:
        from .grammar import Grammar
        src_m = Grammar.from_file(args.src_grammar).macros
    if args.tgt_grammar:
        from .grammar import Grammar
        tgt_m = Grammar.from_file(args.tgt_grammar).macros
    entries, _ = load_bilingual(args.bilex, src_m, tgt_m)
    return entries, src_m, tgt_m


def cmd_extract_templates(args) -> int:
    entries, src_m, tgt_m = _load_lexicon_file(args)
    db = extract_templates(entries)
    text = format_database(db, src_m, tgt_m)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    print(f"{len(db)} templates from {len(entries)} entries", file=sys.stderr)
    return EXIT_OK


def cmd_coverage(args) -> int:
    entries, _, _ = _load_lexicon_file(args)
    db = extract_templates(entries)
    text = format_coverage(coverage_report(db, len(entries)))
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_match(args) -> int:
    cfg = PipelineConfig.from_args(args)
    res = cfg.load()
    out = sys.stdout
    try:
        src_derivs, _ = parse_sentence(res.source, args.source, cfg.max_parses)
        tgt_derivs, _ = parse_sentence(res.target, args.target, cfg.max_parses)
    except (UnknownWordError, EmptyInputError) as exc:
        print(f"failure: no-parse: {exc}", file=out)
        return EXIT_NONE
    for side, derivs in (("source", src_derivs), ("target", tgt_derivs)):
        if not derivs:
            print(f"failure: no-parse({side})", file=out)
            return EXIT_NONE
    tgt_bags = [get_bag(d) for d in tgt_derivs]
    for j, bag in enumerate(tgt_bags, 1):
        print(f"== target bag (parse {j}) ==\n{format_bag(bag)}\n", file=out)
    rules = transfer_rules(res.bilex, res.templates)
    total = 0
    for i, d1 in enumerate(src_derivs, 1):
        bag1 = get_bag(d1)
        print(f"== source bag (parse {i}) ==\n{format_bag(bag1)}\n", file=out)
        try:
            tderivs = list(transfer(bag1, rules))
        except NoCoverError as exc:
            print(f"failure: no-cover: {exc}\n", file=out)
            continue
        for t, d3 in enumerate(tderivs, 1):
            names = variable_names(d3.bag)
            found = [(j, m) for j, bag2 in enumerate(tgt_bags, 1)
                     for m in match_bags(bag2, d3.bag)]
            if not found and not args.all_transfers:
                continue
            print(f"== transfer bag (source parse {i}, transfer {t}) ==\n"
                  f"{format_bag(d3.bag, names)}\n", file=out)
            for j, m in found:
                total += 1
                print(f"matching {total} (target parse {j}):\n"
                      f"{format_item_map(m)}\n{format_index_map(m, names)}\n", file=out)
    print(f"matchings: {total}", file=out)
    if total == 0:
        print("failure: no-match", file=out)
        return EXIT_NONE
    return EXIT_OK


def _resource_args(p: argparse.ArgumentParser):
    p.add_argument("--src-grammar")
    p.add_argument("--tgt-grammar")
    p.add_argument("--src-lex")
    p.add_argument("--tgt-lex")
    p.add_argument("--templates", action="append", default=[],
                   help="template file (repeatable)")
    p.add_argument("--bilex", action="append", default=[],
                   help="bilingual entry file (repeatable)")
    p.add_argument("--fixtures", action="store_true",
                   help="fill unspecified resources with the bundled English-Spanish "
                        "fixtures (closed-class entries are always added)")
    p.add_argument("--max-parses", type=int, default=16)
    p.add_argument("--max-candidates", type=int, default=64)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ppmatch", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("induce", help="induce bilingual entries from an aligned corpus")
    _resource_args(p)
    p.add_argument("--corpus", required=True, help="UTF-8 TSV: source<TAB>target")
    p.add_argument("--out", help="new entries (default: stdout)")
    p.add_argument("--review", help="blocked ambiguous candidates")
    p.add_argument("--report", help="JSON summary")
    p.add_argument("--mode", choices=("block", "rank", "interactive"), default="block")
    p.add_argument("--no-feedback", action="store_true",
                   help="run every pair against the initial lexicon")
    p.add_argument("--jobs", type=int, default=1, help="parallel pairs (with --no-feedback)")
    p.set_defaults(func=cmd_induce)

    for name, func, what in (("extract-templates", cmd_extract_templates,
                              "extract templates with counts from an entry file"),
                             ("coverage", cmd_coverage,
                              "incremental template coverage of an entry file")):
        p = sub.add_parser(name, help=what)
        p.add_argument("bilex")
        p.add_argument("--out")
        p.add_argument("--src-grammar", help="source macros for reading and writing")
        p.add_argument("--tgt-grammar", help="target macros for reading and writing")
        p.set_defaults(func=func)

    p = sub.add_parser("match", help="show bags, transfers and matchings for one pair")
    _resource_args(p)
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--all-transfers", action="store_true",
                   help="also list transfer bags that match nothing")
    p.set_defaults(func=cmd_match)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (ParseError, InputError, OSError, UnicodeDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
