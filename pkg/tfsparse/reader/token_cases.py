"""Token cases of the grammar lexer.

Each case returns a compiled regex; :class:`~tfsparse.reader.core.Tokenizer`
names the token after the function. Cases are tried in list order at every
position, so more specific cases go first.
"""

import re
from .core import RegexBuilder
from . import symbols


def whitespace():
    return re.compile(r'\s+')


def punctuation():
    """Punctuation and the two arrows, longest symbol first."""

    return RegexBuilder(
        literals=sorted(symbols.PUNCTUATION, key=len, reverse=True),
        template=lambda x: x).regex


def tag():
    """Reentrancy tag: ``#`` followed by a natural number."""

    return re.compile(r'#\d+')


def feature():
    """Feature name.

    Upper case letters, digits and underscores with at least one letter and
    no lower case letter, so ``1ST`` is a feature while ``3rd`` is not.
    """

    return re.compile(r'[A-Z0-9_]*[A-Z][A-Z0-9_]*\b')


def ident():
    """Type names, words, rule names and keywords."""

    return re.compile(r"[a-z0-9_][a-z0-9_']*")


DEFAULT_CASES = [whitespace, punctuation, tag, feature, ident]
