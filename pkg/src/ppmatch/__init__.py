"""Bilingual lexicon induction by parsing, transferring and matching
aligned sentence pairs with bilingual templates."""
from .bilingual import (BilingualEntry, BilingualTemplate, EntryTriple,
                        TemplateDatabase, coverage_report, extract_templates,
                        instantiate, load_bilingual, parse_bilingual, template_of)
from .builder import (AmbiguousResult, Bilexicon, Failure, Options, Resources,
                      UniqueResult, induce_corpus, make_entries, rank_candidates)
from .grammar import Grammar, Language, Lexicon, get_bag, parse, tokenize
from .items import Bag, LexicalItem, Placeholder, format_bag
from .matching import classify, match_bags, match_bags_oracle
from .terms import (BindingStore, Description, Ground, Var, rename_canonical,
                    unify_description, unify_index)
from .transfer import transfer, transfer_rules, used_rules

__version__ = "0.1.0"

__all__ = [
    "BilingualEntry", "BilingualTemplate", "EntryTriple", "TemplateDatabase",
    "coverage_report", "extract_templates", "instantiate", "load_bilingual",
    "parse_bilingual", "template_of",
    "AmbiguousResult", "Bilexicon", "Failure", "Options", "Resources", "UniqueResult",
    "induce_corpus", "make_entries", "rank_candidates",
    "Grammar", "Language", "Lexicon", "get_bag", "parse", "tokenize",
    "Bag", "LexicalItem", "Placeholder", "format_bag",
    "classify", "match_bags", "match_bags_oracle",
    "BindingStore", "Description", "Ground", "Var", "rename_canonical",
    "unify_description", "unify_index",
    "transfer", "transfer_rules", "used_rules",
]
