"""Abstract feature structures.

An AFS is kept as its canonical quotient graph: one node per class of reentrant
paths, numbered in depth-first preorder from the root with features visited
in signature order. Two AFSs are equal exactly when these graphs coincide,
so ``==`` and ``hash`` decide alphabetic variance of the concrete structures
they abstract. Explicit path sets (:class:`PreAFS`) are only used for small
acyclic structures, as an independent check on the graph algorithms.
"""

import logging

from collections import deque
from .errors import UnificationFailure, CyclicStructure
from .signature import BOTTOM, TOP
from .tfs import ConcreteTFS, Node
from .utils import _compact_json

__all__ = ['AFS', 'PreAFS', 'abstract', 'concrete', 'normalize', 'afs_unify', 'afs_order',
           'path_unify']

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())


class Workspace:
    """Mutable union-find over graph nodes.

    Merging two classes joins their types and schedules the merge of their
    same-feature successors, until no merge is pending. This one loop does
    the work of fusion closure, equivalence closure and type joining at once;
    it terminates because every merge removes a class.

    Args:
        signature (TypeHierarchy): Supplies type joins and feature order.
    """

    def __init__(self, signature):
        self.signature = signature
        self.parent = []
        self.size = []
        self.types = []
        self.arcs = []
        # nodes whose paths are used to locate unification failures
        self.roots = []

    def node(self, type_=BOTTOM):
        n = len(self.parent)
        self.parent.append(n)
        self.size.append(1)
        self.types.append(type_)
        self.arcs.append({})
        return n

    def arc(self, source, feature, target):
        self.arcs[source][feature] = target

    def add(self, structure):
        """Copy a frozen structure in; returns its node -> workspace node map."""

        mapping = [self.node(t) for t in structure.types]
        for n, out in enumerate(structure.arcs):
            self.arcs[mapping[n]] = {f: mapping[target] for f, target in out}
        return mapping

    def add_concrete(self, s):
        """Copy a :class:`ConcreteTFS` in; returns its node -> workspace node map."""

        mapping = {q: self.node(t) for q, t in s.typing.items()}
        for q, out in s.arcs.items():
            self.arcs[mapping[q]] = {f: mapping[target] for f, target in out.items()}
        return mapping

    def find(self, n):
        parent = self.parent
        while parent[n] != n:
            parent[n] = parent[parent[n]]
            n = parent[n]
        return n

    def unify(self, a, b):
        """Merge the classes of ``a`` and ``b``.

        Raises:
            UnificationFailure: Some merged class would be typed ``TOP``.
        """

        pending = [(a, b)]
        while pending:
            x, y = pending.pop()
            x, y = self.find(x), self.find(y)
            if x == y:
                continue
            joined = self.signature.lub(self.types[x], self.types[y])
            if joined is TOP:
                raise UnificationFailure(types=(self.types[x], self.types[y]),
                                         **self._witness(x, y))
            if self.size[x] < self.size[y]:
                x, y = y, x
            self.parent[y] = x
            self.size[x] += self.size[y]
            self.types[x] = joined
            out_x = self.arcs[x]
            for f, target in self.arcs[y].items():
                if f in out_x:
                    pending.append((out_x[f], target))
                else:
                    out_x[f] = target
            self.arcs[y] = {}

    def _witness(self, *targets):
        targets = {self.find(t) for t in targets}
        seen = set()
        queue = deque()
        for index, r in enumerate(self.roots, 1):
            r = self.find(r)
            if r not in seen:
                seen.add(r)
                queue.append((r, index, ()))
        while queue:
            n, index, path = queue.popleft()
            if n in targets:
                return {'path': path, 'index': index if len(self.roots) > 1 else None}
            out = self.arcs[n]
            for f in self.signature.sort_features(out):
                m = self.find(out[f])
                if m not in seen:
                    seen.add(m)
                    queue.append((m, index, path + (f,)))
        return {}

    def freeze(self, roots):
        """Canonical ``(types, arcs, roots)`` of the part reachable from ``roots``."""

        sig = self.signature
        find = self.find
        reps = [find(r) for r in roots]
        number = {}
        order = []
        stack = list(reversed(reps))
        while stack:
            n = stack.pop()
            if n in number:
                continue
            number[n] = len(order)
            order.append(n)
            out = self.arcs[n]
            for f in reversed(sig.sort_features(out)):
                stack.append(find(out[f]))

        types = tuple(self.types[n] for n in order)
        arcs = tuple(
            tuple((f, number[find(self.arcs[n][f])]) for f in sig.sort_features(self.arcs[n]))
            for n in order)
        return types, arcs, tuple(number[r] for r in reps)


class Structure:
    """Frozen canonical quotient graph with an ordered sequence of roots.

    Shared by :class:`AFS` (one root) and :class:`~tfsparse.mrs.AMRS`. Node
    ``k`` has type ``types[k]`` and outgoing arcs ``arcs[k]``, a tuple of
    ``(feature, node)`` pairs in feature order.
    """

    __slots__ = ('signature', 'types', 'arcs', 'roots', '_hash', '_text', '_key')

    def __init__(self, signature, types, arcs, roots):
        self.signature = signature
        self.types = types
        self.arcs = arcs
        self.roots = roots
        self._hash = hash((type(self).__name__, types, arcs, roots))
        self._text = None
        self._key = None

    @classmethod
    def from_workspace(cls, ws, roots):
        return cls(ws.signature, *ws.freeze(roots))

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return (self._hash == other._hash and self.roots == other.roots
                and self.types == other.types and self.arcs == other.arcs)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f'<{type(self).__name__} {self.avm()}>'

    def __str__(self):
        return self.avm()

    @property
    def node_count(self):
        return len(self.types)

    def out(self, n):
        return self.arcs[n]

    def walk(self, n, path):
        """Node reached from ``n`` by ``path``, or ``None``."""

        for f in path:
            n = dict(self.arcs[n]).get(f)
            if n is None:
                return None
        return n

    def reroot(self, roots, cls=None):
        """Canonical structure over the classes reachable from ``roots``.

        Args:
            roots (list): Node numbers of this structure, in element order.
            cls (type, optional): Class of the result; defaults to ours.
        """

        cls = cls or type(self)
        number = {}
        order = []
        stack = list(reversed(roots))
        while stack:
            n = stack.pop()
            if n in number:
                continue
            number[n] = len(order)
            order.append(n)
            for _, target in reversed(self.arcs[n]):
                stack.append(target)
        types = tuple(self.types[n] for n in order)
        arcs = tuple(tuple((f, number[t]) for f, t in self.arcs[n]) for n in order)
        return cls(self.signature, types, arcs, tuple(number[r] for r in roots))

    def find_cycle(self):
        """Locate a cycle.

        Returns:
            tuple: ``(index, prefix, loop)``: a root position (1-based), a
            path from that root to a node on a cycle, and the non-empty path
            that leads from that node back to itself; ``None`` when acyclic.
        """

        state = {}
        trail = []

        def visit(n):
            state[n] = 1
            for f, target in self.arcs[n]:
                trail.append(f)
                mark = state.get(target, 0)
                if mark == 1:
                    return target
                if mark == 0:
                    found = visit(target)
                    if found is not None:
                        return found
                trail.pop()
            state[n] = 2
            return None

        for index, r in enumerate(self.roots, 1):
            if state.get(r, 0):
                continue
            entry = visit(r)
            if entry is not None:
                prefix = []
                n = r
                while n != entry:
                    f = trail[len(prefix)]
                    prefix.append(f)
                    n = dict(self.arcs[n])[f]
                return index, tuple(prefix), tuple(trail[len(prefix):])
        return None

    def is_cyclic(self):
        return self.find_cycle() is not None

    def path_classes(self, index=1):
        """Map every path of element ``index`` to its class (node number).

        Raises:
            CyclicStructure: The element reaches a cycle.
        """

        found = {}
        limit = self.node_count
        queue = deque([((), self.roots[index - 1])])
        while queue:
            path, n = queue.popleft()
            if len(path) > limit:
                raise CyclicStructure('path set of a cyclic structure is infinite')
            found[path] = n
            for f, target in self.arcs[n]:
                queue.append((path + (f,), target))
        return found

    def _refcounts(self):
        refs = [0] * self.node_count
        for r in self.roots:
            refs[r] += 1
        for out in self.arcs:
            for _, target in out:
                refs[target] += 1
        return refs

    def _render(self, leaf):
        refs = self._refcounts()
        tags = {}

        def visit(n):
            if n in tags:
                return leaf.ref(tags[n])
            tag = None
            if refs[n] > 1:
                tag = tags[n] = len(tags) + 1
            return leaf.node(self.types[n], tag, [(f, visit(target)) for f, target in self.arcs[n]])

        return [visit(r) for r in self.roots]

    def to_json(self):
        """Per-root AVM dicts sharing one tag numbering."""

        return self._render(_JsonAVM)

    @property
    def sort_key(self):
        """Compact JSON text; orders structures deterministically."""

        if self._key is None:
            self._key = _compact_json(self._render(_JsonAVM))
        return self._key

    def avm(self):
        """Canonical AVM text, valid as grammar term syntax."""

        if self._text is None:
            self._text = self._avm_text()
        return self._text

    def avm_elements(self):
        """AVM text of each root, tags numbered across all of them."""

        return [text for text, _ in self._render(_TextAVM)]

    def _avm_text(self):
        return ', '.join(self.avm_elements())


class _JsonAVM:
    @staticmethod
    def ref(tag):
        return {'ref': tag}

    @staticmethod
    def node(type_, tag, features):
        avm = {'type': type_}
        if tag is not None:
            avm['tag'] = tag
        avm['features'] = [[f, value] for f, value in features]
        return avm


class _TextAVM:
    """Renders ``(text, is_conjunction)`` pairs."""

    @staticmethod
    def ref(tag):
        return f'#{tag}', False

    @staticmethod
    def node(type_, tag, features):
        parts = [type_] if type_ != BOTTOM or not features else []
        for f, (text, conj) in features:
            parts.append(f'{f}:({text})' if conj else f'{f}:{text}')
        body = ' & '.join(parts)
        if tag is not None:
            return f'#{tag}({body})', False
        return body, len(parts) > 1


class AFS(Structure):
    """An abstract feature structure: the single-root case of :class:`Structure`."""

    __slots__ = ()

    @property
    def root(self):
        return self.roots[0]

    @property
    def type(self):
        return self.types[self.roots[0]]

    def get(self, path):
        """Type at ``path``, or ``None`` if there is no such path."""

        n = self.walk(self.root, path)
        return None if n is None else self.types[n]

    def paths(self):
        """Every path of an acyclic AFS, sorted."""

        return sorted(self.path_classes())

    def reentrant(self, p1, p2):
        """Whether ``p1`` and ``p2`` lead to the same class."""

        n1 = self.walk(self.root, p1)
        return n1 is not None and n1 == self.walk(self.root, p2)

    def to_pre(self):
        """Explicit paths, typing and reentrancies of an acyclic AFS."""

        classes = self.path_classes()
        by_class = {}
        for p, n in classes.items():
            by_class.setdefault(n, []).append(p)
        eq = {(p, q) for members in by_class.values() for p in members for q in members}
        return PreAFS(self.signature, classes, {p: self.types[n] for p, n in classes.items()}, eq)

    def to_json(self):
        return super().to_json()[0]


class PreAFS:
    """A pre-abstract feature structure given by explicit path sets.

    Args:
        signature (TypeHierarchy): The type system.
        paths (iterable): Feature tuples; must be non-empty.
        theta (dict): Total typing on ``paths``. Values may be ``TOP`` after
            :meth:`union`.
        eq (iterable): Pairs of paths that are to be reentrant.
    """

    def __init__(self, signature, paths, theta, eq=()):
        self.signature = signature
        self.paths = frozenset(tuple(p) for p in paths)
        if not self.paths:
            raise ValueError('a pre-AFS needs at least one path')
        self.theta = {tuple(p): t for p, t in theta.items()}
        self.eq = frozenset((tuple(p), tuple(q)) for p, q in eq)

    def union(self, other):
        """Componentwise union, joining types pointwise on shared paths."""

        lub = self.signature.lub
        theta = dict(self.theta)
        for p, t in other.theta.items():
            if p in theta and theta[p] is not TOP and t is not TOP:
                theta[p] = lub(theta[p], t)
            elif p in theta:
                theta[p] = TOP
            else:
                theta[p] = t
        return PreAFS(self.signature, self.paths | other.paths, theta, self.eq | other.eq)

    def is_prefix_closed(self):
        return all(p[:-1] in self.paths for p in self.paths if p)

    def is_fusion_closed(self):
        eq = self.eq
        for p, q in eq:
            for r in self.paths:
                if len(r) > len(p) and r[:len(p)] == p:
                    suffix = r[len(p):]
                    if q + suffix not in self.paths or (r, q + suffix) not in eq:
                        return False
        return True

    def is_equivalence(self):
        eq = self.eq
        if any((p, p) not in eq for p in self.paths):
            return False
        if any((q, p) not in eq for p, q in eq):
            return False
        return all((p, s) in eq for p, q in eq for r, s in eq if q == r)

    def respects_types(self):
        return all(self.theta[p] == self.theta[q] for p, q in self.eq)


def normalize(pre):
    """Close ``pre`` into an AFS, working literally on explicit path sets.

    New paths demanded by fusion closure are added one by one; the loop stops
    when nothing changes. An acyclic result has fewer classes than ``pre``
    has paths, so a path longer than that proves the result cyclic.

    Raises:
        ValueError: ``pre`` is not prefix-closed.
        UnificationFailure: Some class joins to ``TOP``.
        CyclicStructure: The closure is cyclic (its path set is infinite).
    """

    if not pre.is_prefix_closed():
        raise ValueError('path set is not prefix-closed')
    sig = pre.signature
    paths = set(pre.paths)
    theta = dict(pre.theta)
    limit = len(paths)
    parent = {p: p for p in paths}

    def find(p):
        while parent[p] != p:
            parent[p] = parent[parent[p]]
            p = parent[p]
        return p

    def union(p, q):
        p, q = find(p), find(q)
        if p == q:
            return False
        if q < p:
            p, q = q, p
        parent[q] = p
        return True

    for p, q in sorted(pre.eq):
        union(p, q)

    changed = True
    while changed:
        changed = False
        members = {}
        for p in sorted(paths):
            members.setdefault(find(p), []).append(p)
        for p in sorted(paths, key=lambda x: (len(x), x)):
            for cut in range(len(p)):
                head, tail = p[:cut], p[cut:]
                for other in members[find(head)]:
                    if other == head:
                        continue
                    fused = other + tail
                    if fused not in paths:
                        if len(fused) > limit:
                            raise CyclicStructure('closure of a pre-AFS is cyclic')
                        paths.add(fused)
                        parent[fused] = fused
                        theta[fused] = BOTTOM
                        changed = True
                    if union(fused, p):
                        changed = True
            if changed:
                break

    joined = {}
    for p in sorted(paths, key=lambda x: (len(x), x)):
        c = find(p)
        t = theta[p]
        if t is TOP:
            raise UnificationFailure(path=p)
        if c not in joined:
            joined[c] = (t, p)
            continue
        prev, witness = joined[c]
        j = sig.lub(prev, t)
        if j is TOP:
            raise UnificationFailure(types=(prev, t), path=witness)
        joined[c] = (j, witness)

    ws = Workspace(sig)
    nodes = {c: ws.node(t) for c, (t, _) in joined.items()}
    for p in paths:
        if p:
            ws.arc(nodes[find(p[:-1])], p[-1], nodes[find(p)])
    return AFS.from_workspace(ws, [nodes[find(())]])


def abstract(s):
    """``Abs``: the AFS of a concrete TFS."""

    ws = Workspace(s.signature)
    mapping = ws.add_concrete(s)
    return AFS.from_workspace(ws, [mapping[s.root]])


def concrete(a):
    """``Conc``: a concrete TFS with one fresh node per class of ``a``."""

    nodes = [Node() for _ in a.types]
    typing = {nodes[n]: t for n, t in enumerate(a.types)}
    arcs = {nodes[n]: {f: nodes[target] for f, target in out} for n, out in enumerate(a.arcs)}
    return ConcreteTFS(a.signature, nodes[a.root], typing, arcs)


def afs_unify(a, b):
    """``a ⊔ b``.

    Raises:
        UnificationFailure: The two structures are inconsistent.
    """

    ws = Workspace(a.signature)
    ra = ws.add(a)[a.root]
    rb = ws.add(b)[b.root]
    ws.roots = [ra]
    ws.unify(ra, rb)
    return AFS.from_workspace(ws, [ra])


def path_unify(a, b):
    """``a ⊔ b`` by closing the union of explicit path sets (acyclic inputs)."""

    return normalize(a.to_pre().union(b.to_pre()))


def morphism(a, b, pairs):
    """Class map from ``a`` to ``b`` that commutes with arcs and raises types.

    Args:
        pairs (iterable): Forced ``(node of a, node of b)`` pairs, normally
            the aligned roots.

    Returns:
        dict or None
    """

    subsumes = a.signature.subsumes
    h = {}
    stack = list(pairs)
    while stack:
        na, nb = stack.pop()
        if na in h:
            if h[na] != nb:
                return None
            continue
        if not subsumes(a.types[na], b.types[nb]):
            return None
        h[na] = nb
        out_b = dict(b.arcs[nb])
        for f, target in a.arcs[na]:
            if f not in out_b:
                return None
            stack.append((target, out_b[f]))
    return h


def afs_order(a, b):
    """``a ⪯ b``: ``a`` is at most as specific as ``b``."""

    return morphism(a, b, [(a.root, b.root)]) is not None


def is_closed(pre):
    """Whether explicit path sets meet all three AFS closure conditions."""

    return (pre.is_prefix_closed() and pre.is_fusion_closed()
            and pre.is_equivalence() and pre.respects_types())
