"""Walk one aligned sentence pair through parse, transfer, match and entry building.

Run:  python3 demos/worked_example.py
"""
from ppmatch.bilingual import format_entry, load_bilingual
from ppmatch.builder import be_info_to_entries, make_be_info
from ppmatch.data import path
from ppmatch.grammar import Language, get_bag
from ppmatch.items import format_bag, variable_names
from ppmatch.matching import describe, match_bags
from ppmatch.transfer import transfer, transfer_rules, used_rules

SOURCE = "the fat man kicked out the black dog."
TARGET = "el hombre gordo echó el perro negro."

english = Language.from_files(path("en.grammar"), path("en.lex"))
spanish = Language.from_files(path("es.grammar"), path("es.lex"))
closed, _ = load_bilingual(path("closed.bilex"), english.macros, spanish.macros)
_, templates = load_bilingual(path("templates.tpl"), english.macros, spanish.macros)

# 1. Both sentences are parsed independently.  Ground indices tie each
#    noun phrase's items together and link the verb to its arguments.
source_bag = get_bag(next(english.parse(SOURCE)))
target_bag = get_bag(next(spanish.parse(TARGET)))
print("Source bag\n" + format_bag(source_bag) + "\n")
print("Target bag\n" + format_bag(target_bag) + "\n")

# 2. Transfer covers the source bag with entries (only the->el here) and
#    word-free templates.  Template outputs carry placeholder words.
rules = transfer_rules(closed[:1], templates)
(derivation,) = transfer(source_bag, rules)
print("Transfer bag\n" + format_bag(derivation.bag, variable_names(derivation.bag)) + "\n")
for rec in used_rules(derivation):
    print(f"  {rec.rule.name:10} consumes {','.join(rec.consumed):5} "
          f"-> {','.join(rec.produced)}")
print()

# 3. Matching pairs transfer items with target items one to one, and the
#    variables of the transfer bag with the target's ground indices.
(matching,) = match_bags(target_bag, derivation.bag)
print("Matching\n" + describe(matching, derivation.bag) + "\n")

# 4. Each template-based cell now knows its source and target words.
triples = make_be_info(source_bag, matching, derivation)
print("Entry triples")
for t in triples:
    print(" ", t)
print()

print("New entries")
for e in be_info_to_entries(triples, templates):
    print(" ", format_entry(e, english.macros, spanish.macros))
