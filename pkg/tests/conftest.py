import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from leibhom.lemma1 import build_counterexample  # noqa: E402
from leibhom.lie import abelian, heisenberg, sl2, two_dim_nonabelian  # noqa: E402


def corpus():
    return {
        "abelian1": abelian(1),
        "abelian2": abelian(2),
        "abelian3": abelian(3),
        "two_dim_nonabelian": two_dim_nonabelian(),
        "heisenberg": heisenberg(),
        "sl2": sl2(),
        "counterexample": build_counterexample().total,
    }


CORPUS = corpus()


@pytest.fixture(scope="session")
def counterexample():
    return build_counterexample()
