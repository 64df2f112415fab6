"""Grammars shipped with the package."""

import os

_HERE = os.path.dirname(os.path.abspath(__file__))

NAMES = ['example', 'olp_demo', 'cyclic_demo']


def path(name):
    """File system path of a shipped grammar, with or without ``.gr``.

    Raises:
        FileNotFoundError: No such grammar ships with the package.
    """

    if not name.endswith('.gr'):
        name += '.gr'
    full = os.path.join(_HERE, name)
    if not os.path.isfile(full):
        raise FileNotFoundError(f'no shipped grammar named {name!r}')
    return full
