import pytest

from emosig.lexicon import Lexicon, load_lexicon
from emosig.resources import SAMPLE_LEXICON, resource_path


@pytest.fixture
def toy_lexicon() -> Lexicon:
    return Lexicon.build(
        {"Positiv": ["good", "great"], "Negativ": ["bad"]},
        negators={"not"},
        negation_window=3,
    )


@pytest.fixture(scope="session")
def sample_lexicon() -> Lexicon:
    return load_lexicon(resource_path(SAMPLE_LEXICON))
