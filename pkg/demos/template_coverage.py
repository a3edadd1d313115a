"""Bootstrap a lexicon from a small corpus, then measure template coverage.

Run:  python3 demos/template_coverage.py
"""
from pathlib import Path

from ppmatch.bilingual import (coverage_report, extract_templates, format_coverage,
                               format_database, load_bilingual)
from ppmatch.builder import Resources, induce_corpus
from ppmatch.cli import read_corpus
from ppmatch.data import path
from ppmatch.grammar import Language

english = Language.from_files(path("en.grammar"), path("en.lex"))
spanish = Language.from_files(path("es.grammar"), path("es.lex"))
closed, _ = load_bilingual(path("closed.bilex"), english.macros, spanish.macros)
_, templates = load_bilingual(path("templates.tpl"), english.macros, spanish.macros)

pairs = read_corpus(Path(__file__).with_name("corpus.tsv"))
run = induce_corpus(pairs, Resources(english, spanish, templates, tuple(closed)))
print("summary:", run.summary)
print(f"{len(run.new_entries)} entries induced\n")

# Entries made from a template remember it, so the extracted classes keep
# the hand-written names.  The closed-class entries form a class of their own.
lexicon = list(closed) + run.new_entries
db = extract_templates(lexicon, known=templates)
print(format_database(db, english.macros, spanish.macros))
print(format_coverage(coverage_report(db, len(lexicon))))
