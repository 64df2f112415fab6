"""Multi-rooted structures: ordered root sequences over one shared graph."""

import logging

from .afs import AFS, Structure, Workspace, morphism
from .errors import AlignmentError, IndexOutOfRange

__all__ = ['AMRS', 'LAMBDA', 'abs_mrs', 'substructure', 'concat', 'unify_in_context',
           'amrs_order']

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())


class AMRS(Structure):
    """An abstract multi-rooted structure.

    ``roots[i - 1]`` is the class of element ``i``. Two indices may share a
    class once unification has identified them; every class is reachable
    from some root. The empty sequence is ``λ``.
    """

    __slots__ = ()

    def __len__(self):
        return len(self.roots)

    @property
    def indices(self):
        return range(1, len(self.roots) + 1)

    @classmethod
    def empty(cls, signature=None):
        return cls(signature, (), (), ())

    @classmethod
    def from_afs(cls, afs):
        return cls(afs.signature, afs.types, afs.arcs, afs.roots)

    def project(self, i):
        """Element ``i`` (1-based) as an :class:`AFS`."""

        if not 1 <= i <= len(self):
            raise IndexOutOfRange(span=(i, i), length=len(self))
        return self.reroot([self.roots[i - 1]], AFS)

    def __iter__(self):
        for i in self.indices:
            yield self.project(i)

    def _avm_text(self):
        return '<' + super()._avm_text() + '>'


def abs_mrs(structures):
    """Abstract a concrete multi-rooted structure.

    Args:
        structures (list): :class:`~tfsparse.tfs.ConcreteTFS` objects, one per
            root, that may share :class:`~tfsparse.tfs.Node` objects. Shared
            nodes become cross-indexed reentrancies.

    Raises:
        ValueError: Two elements have the same root node.
    """

    structures = list(structures)
    if not structures:
        return LAMBDA
    if len({id(s.root) for s in structures}) != len(structures):
        raise ValueError('roots of a multi-rooted structure must be distinct')

    ws = Workspace(structures[0].signature)
    mapping = {}
    for s in structures:
        for q, t in s.typing.items():
            if q not in mapping:
                mapping[q] = ws.node(t)
            elif ws.types[mapping[q]] != t:
                raise ValueError(f'node {q!r} is typed differently by two elements')
    for s in structures:
        for q, out in s.arcs.items():
            for f, target in out.items():
                ws.arc(mapping[q], f, mapping[target])
    return AMRS.from_workspace(ws, [mapping[s.root] for s in structures])


def substructure(a, lo, hi):
    """``a`` restricted to elements ``lo..hi`` and re-indexed from 1.

    An empty range (``lo > hi``) gives ``λ``.

    Raises:
        IndexOutOfRange: The range is not within ``1..len(a)``.
    """

    if lo > hi:
        return AMRS.empty(a.signature)
    if lo < 1 or hi > len(a):
        raise IndexOutOfRange(span=(lo, hi), length=len(a))
    if lo == 1 and hi == len(a):
        return a
    return a.reroot(a.roots[lo - 1:hi])


def concat(a, b):
    """``a · b``: the elements of ``b`` follow those of ``a``, with nothing shared."""

    if not len(a):
        return b
    if not len(b):
        return a
    shift = len(a.types)
    arcs = a.arcs + tuple(tuple((f, t + shift) for f, t in out) for out in b.arcs)
    roots = a.roots + tuple(r + shift for r in b.roots)
    return AMRS(a.signature, a.types + b.types, arcs, roots)


def unify_in_context(a, indices, b):
    """``(a, J) ⊔ b``.

    Element ``i`` of ``a`` is unified with element ``i`` of ``b`` for every
    ``i`` in ``indices``; an :class:`AFS` counts as a single element aligned
    with the one index given. The result keeps the length of ``a``. Elements
    outside ``indices`` may still gain information through shared classes.

    Args:
        a (AMRS): The context.
        indices (iterable): The index set ``J``.
        b (AMRS or AFS): The structure unified in.

    Raises:
        AlignmentError: ``J`` is not within the indices of both operands,
            or ``b`` is an AFS and ``J`` is not a single index.
        UnificationFailure: Some merged class joins to ``TOP``.
    """

    indices = sorted(set(indices))
    if any(not 1 <= i <= len(a) for i in indices):
        raise AlignmentError(f'indices {indices} are not all within 1..{len(a)}')
    if isinstance(b, AFS):
        if len(indices) != 1:
            raise AlignmentError(f'an AFS aligns with exactly one index, got {indices}')
        pairs = [(indices[0], b.root)]
    else:
        if any(i > len(b) for i in indices):
            raise AlignmentError(f'indices {indices} are not all within 1..{len(b)}')
        pairs = [(i, b.roots[i - 1]) for i in indices]
    if not pairs:
        return a

    ws = Workspace(a.signature or b.signature)
    ma = ws.add(a)
    mb = ws.add(b)
    ws.roots = [ma[r] for r in a.roots]
    for i, rb in pairs:
        ws.unify(ws.roots[i - 1], mb[rb])
    return AMRS.from_workspace(ws, ws.roots)


def amrs_order(a, b):
    """``a ⪯ b`` for multi-rooted structures of equal length."""

    if len(a) != len(b):
        return False
    if not len(a):
        return True
    return morphism(a, b, zip(a.roots, b.roots)) is not None


LAMBDA = AMRS.empty()
