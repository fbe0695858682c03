import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from regunify import derive_signatures, parse_typedefs, validate


@pytest.fixture
def defs():
    """Just the built-in list definition."""
    return validate(())


@pytest.fixture
def sig(defs):
    return derive_signatures(defs)


@pytest.fixture
def tree_defs():
    return validate(
        parse_typedefs("tree(A) --> leaf(A) + node(tree(A), tree(A)).")
    )
