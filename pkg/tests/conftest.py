import pytest

from ppmatch.bilingual import load_bilingual
from ppmatch.builder import Resources
from ppmatch.data import path
from ppmatch.grammar import Language

SOURCE = "the fat man kicked out the black dog."
TARGET = "el hombre gordo echó el perro negro."

# published source, target and transfer bags: (id, word, category, indices)
SOURCE_ROWS = [("1", "the", "determiner", ["0"]), ("2", "fat", "adjective", ["0"]),
        ("3", "man", "noun", ["0"]), ("4", "kick", "trans_verb", ["10", "0", "9"]),
        ("5", "out", "advparticle", ["10"]), ("6", "the", "determiner", ["9"]),
        ("7", "black", "adjective", ["9"]), ("8", "dog", "noun", ["9"])]
TARGET_ROWS = [("1", "el", "d", ["0"]), ("2", "hombre", "n", ["0"]), ("3", "gordo", "adj", ["0"]),
        ("4", "echar", "v", ["1", "0", "13"]), ("5", "el", "d", ["13"]),
        ("6", "perro", "n", ["13"]), ("7", "negro", "adj", ["13"])]
TRANSFER_ROWS = [("2-1", "el", "d", ["A"]), ("3-2", "word(adj/adj,1)", "adj", ["A"]),
        ("4-3", "word(cn/n,1)", "n", ["A"]), ("1-4", "word(tv+adv/tv,1)", "v", ["B", "A", "I"]),
        ("5-6", "el", "d", ["I"]), ("6-7", "word(adj/adj,1)", "adj", ["I"]),
        ("7-8", "word(cn/n,1)", "n", ["I"])]


def relabel(rows):
    """Rename index labels by first occurrence so isomorphic tables compare equal."""
    names = {}
    out = []
    for row in rows:
        idx = [names.setdefault(i, len(names)) for i in row[-1]]
        out.append(tuple(row[:-1]) + (tuple(idx),))
    return out


def bag_rows(bag, with_ids=False):
    from ppmatch.items import variable_names
    names = variable_names(bag)
    rows = []
    for it in bag:
        idx = [names.get(a, str(a)) for a in it.desc.args]
        row = (it.word_str(), it.category, idx)
        rows.append(((it.id,) + row) if with_ids else row)
    return rows


@pytest.fixture(scope="session")
def en():
    return Language.from_files(path("en.grammar"), path("en.lex"))


@pytest.fixture(scope="session")
def es():
    return Language.from_files(path("es.grammar"), path("es.lex"))


@pytest.fixture(scope="session")
def closed(en, es):
    return tuple(load_bilingual(path("closed.bilex"), en.macros, es.macros)[0])


@pytest.fixture(scope="session")
def templates(en, es):
    return load_bilingual(path("templates.tpl"), en.macros, es.macros)[1]


@pytest.fixture(scope="session")
def idiom_templates(en, es):
    return load_bilingual(path("idiom.tpl"), en.macros, es.macros)[1]


@pytest.fixture(scope="session")
def resources(en, es, templates, closed):
    return Resources(en, es, templates, closed)


def pytest_terminal_summary(terminalreporter):
    import sys
    results = {}
    for mod in list(sys.modules.values()):
        results.update(getattr(mod, "ACCEPTANCE_RESULTS", {}) or {})
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
