from pathlib import Path

import pytest

from uzopinion.dataset import read_posts
from uzopinion.emoji_lex import load_lexicon

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def lexicon():
    return load_lexicon(FIXTURES / "lexicon.csv")


@pytest.fixture(scope="session")
def posts():
    return read_posts(FIXTURES / "posts.jsonl")
