import logging

from itertools import combinations
from .errors import CycleError, NotBoundedComplete, DuplicateType

__all__ = ['TypeHierarchy', 'build_hierarchy', 'BOTTOM', 'TOP']

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())

BOTTOM = 'bot'


class _Top:
    """The inconsistent type.

    Returned by :meth:`TypeHierarchy.lub` for pairs without a common upper
    bound. It is not a member of any hierarchy and never stored in a structure.
    """

    __slots__ = ()

    def __repr__(self):
        return 'TOP'

    def __reduce__(self):
        return 'TOP'


TOP = _Top()


class TypeHierarchy:
    """A finite bounded-complete partial order over type names.

    ``t1 ⊑ t2`` reads "t1 subsumes t2" (t1 is more general). ``bot`` is the
    most general type. The order, the least-upper-bound table and the type
    heights are computed once, at construction; instances are immutable
    afterwards.

    Args:
        types (iterable): Type names, ``bot`` included.
        immediate (dict): Maps a type to the tuple of its immediate subtypes.
        features (iterable): Feature names in their total order.

    Use :func:`build_hierarchy` rather than calling this directly: it
    validates the declarations first.
    """

    def __init__(self, types, immediate, features):
        self.types = tuple(types)
        self.immediate = {t: tuple(immediate.get(t, ())) for t in self.types}
        self.features = tuple(features)
        self._feature_rank = {f: i for i, f in enumerate(self.features)}

        self._ups = {t: self._upward(t) for t in self.types}
        self._lub = self._lub_table()
        self._height = self._heights()

    def _upward(self, t):
        seen = {t}
        stack = [t]
        while stack:
            for s in self.immediate[stack.pop()]:
                if s not in seen:
                    seen.add(s)
                    stack.append(s)
        return frozenset(seen)

    def _lub_table(self):
        table = {}
        for a in self.types:
            table[a, a] = a
        for a, b in combinations(self.types, 2):
            common = self._ups[a] & self._ups[b]
            minimal = sorted(u for u in common
                             if not any(v != u and u in self._ups[v] for v in common))
            if len(minimal) > 1:
                raise NotBoundedComplete(pair=(a, b), bounds=minimal)
            table[a, b] = table[b, a] = minimal[0] if minimal else TOP
        return table

    def _heights(self):
        parents = {t: [] for t in self.types}
        for t, subs in self.immediate.items():
            for s in subs:
                parents[s].append(t)

        height = {}

        def visit(t):
            if t not in height:
                height[t] = max((visit(p) + 1 for p in parents[t]), default=0)
            return height[t]

        for t in self.types:
            visit(t)
        return height

    def __contains__(self, t):
        return t in self._ups

    def __repr__(self):
        return f'<TypeHierarchy {len(self.types)} types, {len(self.features)} features>'

    def lub(self, t1, t2):
        """Type unification.

        Returns:
            The least upper bound of ``t1`` and ``t2``, or :data:`TOP` when the
            two types have no common upper bound.
        """

        return self._lub[t1, t2]

    def subsumes(self, t1, t2):
        """``True`` iff ``t1 ⊑ t2``."""

        return t2 in self._ups[t1]

    def upward(self, t):
        """All types ``u`` with ``t ⊑ u``."""

        return self._ups[t]

    def height(self, t):
        """Length of the longest ``⊑``-chain from ``bot`` to ``t``.

        Strictly increasing along the order, hence a valid type-rank function.
        """

        return self._height[t]

    def feature_rank(self, f):
        return self._feature_rank[f]

    def has_feature(self, f):
        return f in self._feature_rank

    def sort_features(self, features):
        return sorted(features, key=self._feature_rank.__getitem__)


def _find_cycle(types, immediate):
    state = dict.fromkeys(types, 0)
    trail = []

    def visit(t):
        state[t] = 1
        trail.append(t)
        for s in immediate.get(t, ()):
            if state[s] == 1:
                return trail[trail.index(s):] + [s]
            if state[s] == 0:
                found = visit(s)
                if found:
                    return found
        trail.pop()
        state[t] = 2
        return None

    for t in types:
        if state[t] == 0:
            found = visit(t)
            if found:
                return found
    return None


def build_hierarchy(decls, features=None):
    """Build and validate a type hierarchy.

    Args:
        decls (list): ``(type, [immediate subtypes])`` pairs. A type may be
            declared as a parent only once. ``bot`` is implicit.
        features (list, optional): Feature names in declaration order. Missing
            features are not inferred here; callers pass what they collected.

    Returns:
        TypeHierarchy: with every type unreachable from ``bot`` attached as
        an immediate subtype of ``bot``.

    Raises:
        DuplicateType: A type is declared as a parent twice, or listed twice
            in one subtype list.
        CycleError: The subtype relation has a cycle.
        NotBoundedComplete: Two types have several minimal upper bounds.
    """

    immediate = {BOTTOM: []}
    order = [BOTTOM]
    declared = set()

    def note(t):
        if t not in immediate:
            immediate[t] = []
            order.append(t)

    for parent, subs in decls:
        if parent in declared:
            raise DuplicateType(type_name=parent)
        declared.add(parent)
        note(parent)
        if len(set(subs)) != len(subs):
            dup = next(s for s in subs if subs.count(s) > 1)
            raise DuplicateType(type_name=dup)
        if BOTTOM in subs:
            raise CycleError(cycle=[BOTTOM, parent, BOTTOM])
        for s in subs:
            note(s)
            immediate[parent].append(s)

    cycle = _find_cycle(order, immediate)
    if cycle:
        raise CycleError(cycle=cycle)

    reachable = {BOTTOM}
    stack = [BOTTOM]
    while stack:
        for s in immediate[stack.pop()]:
            if s not in reachable:
                reachable.add(s)
                stack.append(s)
    has_parent = {s for subs in immediate.values() for s in subs}
    for t in order:
        if t not in reachable and t not in has_parent:
            log.debug(f'attaching {t} below {BOTTOM}')
            immediate[BOTTOM].append(t)

    hierarchy = TypeHierarchy(order, immediate, features or ())
    log.debug(f'built {hierarchy!r}')
    return hierarchy
