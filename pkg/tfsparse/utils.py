import json
import re

_WHITESPACE = re.compile(r'\s+')
"""Regex that separates the words of a sentence"""


def _sentence(text):
    """Split a sentence into lexicon keys

    Args:
        text (string or list): The sentence. A list is taken as already split.

    Returns:
        list: Lower-cased words, without empty strings. An empty or blank
            sentence gives an empty list.
    """

    if isinstance(text, (list, tuple)):
        words = [w for part in text for w in _WHITESPACE.split(part)]
    else:
        words = _WHITESPACE.split(text)
    return [w.lower() for w in words if w]


def _compact_json(obj):
    """Single-line JSON with no optional whitespace, used as a sort key"""

    return json.dumps(obj, separators=(',', ':'), ensure_ascii=False)


def _dump_json(obj):
    """Indented JSON for files and terminals

    Re-loading and dumping the output again gives the same text.
    """

    return json.dumps(obj, indent=2, ensure_ascii=False)
