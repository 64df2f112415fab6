import logging

from collections import deque
from itertools import count
from .errors import CyclicStructure
from .signature import TOP

__all__ = ['Node', 'ConcreteTFS', 'delta', 'find_cycle', 'is_cyclic', 'paths', 'tfs_subsumes',
           'alphabetic_variant', 'rank']

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())


class Node:
    """An opaque node identity.

    Nodes compare by identity. The serial number exists only to give
    deterministic iteration and readable reprs.
    """

    __slots__ = ('serial',)
    _serials = count()

    def __init__(self):
        self.serial = next(Node._serials)

    def __repr__(self):
        return f'q{self.serial}'


class ConcreteTFS:
    """A typed feature structure as a rooted, connected, labelled graph.

    Args:
        signature (TypeHierarchy): Types and features the graph draws from.
        root (Node): The distinguished root.
        typing (dict): Total map ``Node -> type``.
        arcs (dict): ``Node -> {feature: Node}``; nodes without outgoing
            arcs may be omitted. Atoms are nodes with no outgoing arcs.

    Raises:
        ValueError: A node is typed ``TOP`` or with an unknown type, an arc
            uses an unknown feature, or some node is not reachable from the
            root.
    """

    __slots__ = ('signature', 'root', 'typing', 'arcs')

    def __init__(self, signature, root, typing, arcs=None):
        self.signature = signature
        self.root = root
        self.typing = dict(typing)
        self.arcs = {q: dict(out) for q, out in (arcs or {}).items() if out}
        self._validate()

    def _validate(self):
        for q, t in self.typing.items():
            if t is TOP or t not in self.signature:
                raise ValueError(f'node {q!r} has invalid type {t!r}')
        for q, out in self.arcs.items():
            for f, target in out.items():
                if not self.signature.has_feature(f):
                    raise ValueError(f'unknown feature {f!r}')
                if target not in self.typing:
                    raise ValueError(f'arc {q!r}.{f} leads to an untyped node')
        if set(self.reachable()) != set(self.typing):
            raise ValueError('every node must be reachable from the root')

    @property
    def nodes(self):
        return frozenset(self.typing)

    def out(self, q):
        """Outgoing arcs of ``q`` as ``(feature, node)`` in feature order."""

        arcs = self.arcs.get(q, {})
        return [(f, arcs[f]) for f in self.signature.sort_features(arcs)]

    def reachable(self, start=None):
        """Nodes reachable from ``start`` (default: the root) in BFS order."""

        start = self.root if start is None else start
        seen = {start: None}
        queue = deque([start])
        while queue:
            for _, target in self.out(queue.popleft()):
                if target not in seen:
                    seen[target] = None
                    queue.append(target)
        return list(seen)

    def __repr__(self):
        return f'<ConcreteTFS {len(self.typing)} nodes, root {self.root!r}>'


def delta(s, q, path):
    """Walk ``path`` from ``q``.

    Returns:
        Node: The node reached, or ``None`` if some arc along the way is
        missing.
    """

    for f in path:
        q = s.arcs.get(q, {}).get(f)
        if q is None:
            return None
    return q


def find_cycle(s):
    """A path from the root to a node on a cycle, plus the loop itself.

    Returns:
        tuple: ``(prefix, loop)`` feature tuples, or ``None`` if ``s`` is acyclic.
    """

    state = {}
    trail = []

    def visit(q):
        state[q] = 1
        for f, target in s.out(q):
            trail.append(f)
            mark = state.get(target, 0)
            if mark == 1:
                return target
            if mark == 0:
                found = visit(target)
                if found is not None:
                    return found
            trail.pop()
        state[q] = 2
        return None

    entry = visit(s.root)
    if entry is None:
        return None
    prefix = []
    q = s.root
    while q is not entry:
        f = trail[len(prefix)]
        prefix.append(f)
        q = s.arcs[q][f]
    return tuple(prefix), tuple(trail[len(prefix):])


def is_cyclic(s):
    """``True`` iff some node reaches itself through a non-empty path."""

    return find_cycle(s) is not None


def paths(s, max_length=None):
    """Enumerate the paths of ``s`` breadth first, features in signature order.

    Args:
        max_length (int, optional): Stop at paths of this length. Required
            for cyclic structures, whose path set is infinite.

    Raises:
        CyclicStructure: ``s`` is cyclic and no ``max_length`` was given.
    """

    if max_length is None and is_cyclic(s):
        raise CyclicStructure('path set of a cyclic structure is infinite')
    queue = deque([((), s.root)])
    while queue:
        path, q = queue.popleft()
        yield path
        if max_length is not None and len(path) >= max_length:
            continue
        for f, target in s.out(q):
            queue.append((path + (f,), target))


def tfs_subsumes(a, b):
    """Look for the subsumption morphism from ``a`` to ``b``.

    The morphism is forced along paths from the root, so it is unique when it
    exists.

    Returns:
        dict: ``Node of a -> Node of b``, or ``None`` if ``a`` does not
        subsume ``b``.
    """

    sig = a.signature
    h = {}
    stack = [(a.root, b.root)]
    while stack:
        qa, qb = stack.pop()
        if qa in h:
            if h[qa] is not qb:
                return None
            continue
        if not sig.subsumes(a.typing[qa], b.typing[qb]):
            return None
        h[qa] = qb
        out_b = b.arcs.get(qb, {})
        for f, target in a.out(qa):
            if f not in out_b:
                return None
            stack.append((target, out_b[f]))
    return h


def alphabetic_variant(a, b):
    """Mutual subsumption: ``a`` and ``b`` differ only in node identities."""

    return tfs_subsumes(a, b) is not None and tfs_subsumes(b, a) is not None


def rank(a, r=None):
    """Paths minus nodes, plus the type ranks summed over all paths.

    Args:
        a (ConcreteTFS): An acyclic structure.
        r (callable, optional): Type-rank function, strictly increasing along
            the type order and at least 1. Defaults to one more than the
            hierarchy height.

    Raises:
        CyclicStructure: ``a`` is cyclic; its path set is infinite.
    """

    if is_cyclic(a):
        raise CyclicStructure('rank is undefined for cyclic structures')
    if r is None:
        height = a.signature.height

        def r(t):
            return height(t) + 1

    # path counts per node, by DAG dynamic programming from the root
    order = _topological(a)
    reach = dict.fromkeys(order, 0)
    reach[a.root] = 1
    for q in order:
        for _, target in a.out(q):
            reach[target] += reach[q]

    n_paths = sum(reach.values())
    weight = sum(n * r(a.typing[q]) for q, n in reach.items())
    return n_paths - len(a.typing) + weight


def _topological(a):
    order = []
    seen = set()

    def visit(q):
        seen.add(q)
        for _, target in a.out(q):
            if target not in seen:
                visit(target)
        order.append(q)

    visit(a.root)
    order.reverse()
    return order
