import os
from pathlib import Path

import pytest

import discocat

DATA = Path(os.environ.get("DISCOCAT_TEST_DATA_DIR",
                           Path(__file__).resolve().parents[2] / "tests" / "data"))


@pytest.fixture
def toy():
    return discocat.Model(DATA / "toy.tsv", semiring="boolean")


def test_vocabulary(toy):
    assert toy.entities == ["alice", "bob", "boys", "jokes"]
    assert toy.relations == ["loves", "tell"]


def test_ask(toy):
    assert toy.ask("alice loves bob .") == 1.0
    assert toy.ask("bob loves alice .") == 0.0
    assert toy.ask("alice loves boys that tell jokes .") == 1.0


def test_rank(toy):
    ranking = toy.rank("who loves bob ?")
    assert ranking[0] == ("alice", 1.0)
    assert [score for _, score in ranking[1:]] == [0.0, 0.0, 0.0]


def test_resolve_philosophers():
    m = discocat.Model(DATA / "philosophers.tsv")
    text = "spinoza influenced him . he discovered calculus ."
    assert m.resolve(text, corefer=[[0, 1]]) == (["leibniz", "leibniz"], 1.0)
    names, score = m.resolve(text, candidates={1: ["newton"]})
    assert (names, score) == (["leibniz", "newton"], 1.0)


def test_sparql_golden():
    m = discocat.Model(DATA / "philosophers.tsv")
    text = "spinoza influenced him . he discovered calculus ."
    golden = DATA.parent / "golden" / "philosophers_coref.rq"
    assert m.sparql(text, corefer=[[0, 1]]) == golden.read_text()


def test_embeddings_similarity():
    m = discocat.Model(DATA / "pets.tsv", embeddings=DATA / "pets_embeddings.tsv")
    assert m.similarity("cat", "dog") == pytest.approx(1.02)


def test_from_text_and_errors():
    m = discocat.Model.from_text("a\tr\tb\n", semiring="fuzzy")
    assert m.ask("a r b .") == 1.0
    with pytest.raises(discocat.ParseError):
        discocat.Model.from_text("a\tb\n")
    with pytest.raises(ValueError):
        m.ask("a r him .")
    with pytest.raises(ValueError):
        discocat.Model.from_text("a\tr\tb\n", semiring="tropical")
