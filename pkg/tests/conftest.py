from __future__ import annotations

import pytest

from seqtax import builtin_actions, builtin_rules, builtin_sequential_schema, golden_corpus


@pytest.fixture(scope="session")
def schema():
    return builtin_sequential_schema()


@pytest.fixture(scope="session")
def rules():
    return builtin_rules()


@pytest.fixture(scope="session")
def golden():
    return golden_corpus()


@pytest.fixture(scope="session")
def actions():
    return builtin_actions()
