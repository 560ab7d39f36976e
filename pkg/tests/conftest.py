import pytest

from presup import Context, base_signature, parse_context_text

PCTX_LINE = "p : (x : E) * (Man x * WalkedIn x)"
DONKEY_LINE = "p : (x : E) * (Farmer x * ((y : E) * (Donkey y * Owns x y)))"


@pytest.fixture(scope="session")
def sig():
    return base_signature()


@pytest.fixture(scope="session")
def empty_ctx():
    return Context()


@pytest.fixture(scope="session")
def pctx(sig):
    """Discourse context after 'A man walked in.'"""
    return parse_context_text(PCTX_LINE, sig)


@pytest.fixture(scope="session")
def donkey_ctx(sig):
    """Discourse context inside the donkey conditional's consequent."""
    return parse_context_text(DONKEY_LINE, sig)
