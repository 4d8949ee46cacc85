from pathlib import Path

import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None)
settings.load_profile("default")

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

F1_PAIRS = ([("a", "a")] * 60 + [("a", "b")] * 20
            + [("b", "a")] * 10 + [("b", "b")] * 10)


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def f1_pairs():
    return list(F1_PAIRS)


@pytest.fixture
def f1_matrix():
    from classeval import ClassificationSet, build_confusion_matrix

    return build_confusion_matrix(ClassificationSet(F1_PAIRS))
