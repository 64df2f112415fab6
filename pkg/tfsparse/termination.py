import logging

from collections import deque, namedtuple
from warnings import warn
from .errors import CyclicItemError
from .mrs import amrs_order

__all__ = ['restrict', 'guard_acyclic', 'divergence_sentinel', 'DivergenceWarning',
           'SentinelReport']

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())

SentinelReport = namedtuple('SentinelReport', 'cell count images')
"""One crowded chart cell: ``(i, j, status)``, its number of ⪯-minimal items
and how many distinct restricted images those items have."""


class DivergenceWarning(RuntimeWarning):
    """A chart cell holds more incomparable items than the configured threshold."""


def restrict(a, depth):
    """Depth-bounded restriction.

    Keeps the classes whose shortest path from some root has at most
    ``depth`` features, with every arc among them; everything else is cut
    away. The result subsumes ``a``, and over a fixed signature and length
    there are only finitely many possible results.

    Args:
        a (AFS or AMRS): The structure to restrict.
        depth (int): Non-negative bound.

    Returns:
        A structure of the same class as ``a``.

    Raises:
        ValueError: ``depth`` is negative.
    """

    if depth < 0:
        raise ValueError('depth must be non-negative')

    reach = {}
    queue = deque()
    for r in a.roots:
        if r not in reach:
            reach[r] = 0
            queue.append(r)
    while queue:
        n = queue.popleft()
        if reach[n] == depth:
            continue
        for _, target in a.arcs[n]:
            if target not in reach:
                reach[target] = reach[n] + 1
                queue.append(target)

    arcs = tuple(
        tuple((f, t) for f, t in out if t in reach) if n in reach else ()
        for n, out in enumerate(a.arcs))
    pruned = type(a)(a.signature, a.types, arcs, a.roots)
    return pruned.reroot(list(a.roots))


def guard_acyclic(item):
    """Reject an item whose structure has a cycle.

    Raises:
        CyclicItemError: Naming the item and a cycle witness.
    """

    cycle = item.amrs.find_cycle()
    if cycle is not None:
        raise CyclicItemError(item=item, cycle=cycle)


def minimal_items(items):
    """The ⪯-minimal members of one chart cell, in the given order."""

    items = list(items)
    return [x for x in items
            if not any(y is not x and amrs_order(y.amrs, x.amrs) and not amrs_order(x.amrs, y.amrs)
                       for y in items)]


def divergence_sentinel(items, threshold, depth=2):
    """Watch for cells that keep collecting incomparable items.

    Weak off-line parsability cannot be decided, so it is monitored: a
    cell whose ⪯-minimal items outnumber ``threshold`` is reported, together
    with the number of distinct :func:`restrict` images of those items at
    ``depth``. A warning is issued for each reported cell.

    Args:
        items (iterable): Chart items (anything with ``i``, ``j``,
            ``status`` and ``amrs``).
        threshold (int): At least 1.
        depth (int): Restriction depth for the image count.

    Returns:
        list: :class:`SentinelReport` per offending cell, in cell order.
    """

    if threshold < 1:
        raise ValueError('threshold must be at least 1')
    cells = {}
    for x in items:
        cells.setdefault((x.i, x.j, x.status), []).append(x)

    reports = []
    for cell in sorted(cells):
        minimal = minimal_items(cells[cell])
        log.debug(f'cell {cell}: {len(minimal)} minimal of {len(cells[cell])} items')
        if len(minimal) <= threshold:
            continue
        images = len({restrict(x.amrs, depth) for x in minimal})
        report = SentinelReport(cell, len(minimal), images)
        reports.append(report)

        msg = (f'cell [{cell[0]}, {cell[1]}, {cell[2]}] holds {len(minimal)} incomparable items '
               f'(threshold {threshold}); {images} distinct at depth {depth}')
        warn(msg, DivergenceWarning)
        log.warning(msg)
    return reports
