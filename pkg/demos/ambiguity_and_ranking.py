"""Two kinds of ambiguity, and what the modes do with them.

Run:  python3 demos/ambiguity_and_ranking.py
"""
from ppmatch.bilingual import format_entry, load_bilingual, parse_bilingual
from ppmatch.builder import Options, Resources, make_entries
from ppmatch.data import path
from ppmatch.grammar import Language

english = Language.from_files(path("en.grammar"), path("en.lex"))
spanish = Language.from_files(path("es.grammar"), path("es.lex"))
closed, _ = load_bilingual(path("closed.bilex"), english.macros, spanish.macros)
_, templates = load_bilingual(path("templates.tpl"), english.macros, spanish.macros)
_, idiom_templates = load_bilingual(path("idiom.tpl"), english.macros, spanish.macros)


def show(result):
    for k, c in enumerate(result.candidates, 1):
        mark = "*" if c is result.chosen else " "
        score = "" if c.score is None else f" score={c.score}"
        print(f" {mark} candidate {k}{score}")
        for e in c.entries:
            print("      " + format_entry(e, english.macros, spanish.macros, False))
    print(f"   resolution: {result.resolution}\n")


# Two adjectives on one noun: either adjective could translate either one.
# Nothing in the bags decides, so by default the pair is blocked.
pair = ("the big black dog kicked out the man.", "el perro negro grande echó el hombre.")
res = Resources(english, spanish, templates, tuple(closed))
print("Two adjectives, block mode")
show(make_entries(*pair, res))

# Knowing black <-> negro already settles it under ranking.
known, _ = parse_bilingual("entry black :: @adj(A) <-> negro :: @adj(A).",
                           english.macros, spanish.macros)
print("Two adjectives, rank mode, black<->negro known")
show(make_entries(*pair, res.with_bilex(tuple(closed) + tuple(known)), Options(mode="rank")))

# An idiom against its word-by-word reading.  Which one wins depends on
# what the lexicon already says about "bucket".
idiom = ("the man kicked the bucket.", "el hombre estiró la pata.")
for target in ("balde", "pata"):
    seeded, _ = parse_bilingual(
        f"entry bucket :: @count_noun(A) <-> {target} :: @noun(A) \\\\ trans_noun.",
        english.macros, spanish.macros)
    res = Resources(english, spanish, idiom_templates, tuple(closed) + tuple(seeded))
    print(f"kick the bucket, rank mode, bucket<->{target} known")
    show(make_entries(*idiom, res, Options(mode="rank")))
