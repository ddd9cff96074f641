"""Persistence over simplex streams in inclusion-compatible order.

Simplices may arrive in any order whose every prefix is a complex, with
arbitrary filtration values.  The state keeps one reduced boundary
chain per killing simplex; a new arrival either starts a cycle, pairs
with an unpaired cycle, or steals a pairing from a later simplex, in
which case the displaced chain is reduced further and re-settled.  The
net effect of each insertion is reported as a barcode delta.

Filtration ties are broken by arrival order: of two simplices with the
same value, the one inserted earlier reduces the one inserted later.
"""

from __future__ import annotations

from .fields import QQ
from .presentation import INF, Bar, Barcode

__all__ = [
    "BarcodeDelta",
    "StreamState",
    "add_simplex",
    "current_barcode",
]


class BarcodeDelta:
    """Multiset difference between consecutive barcodes.

    ``added`` and ``removed`` are tuples of bars; folding every delta
    of a stream into an empty multiset reproduces the final barcode.
    """

    __slots__ = ("added", "removed")

    def __init__(self, added=(), removed=()):
        self.added = tuple(added)
        self.removed = tuple(removed)

    @property
    def is_empty(self) -> bool:
        return not self.added and not self.removed

    def __eq__(self, other):
        return (
            isinstance(other, BarcodeDelta)
            and sorted(self.added, key=Bar.key)
            == sorted(other.added, key=Bar.key)
            and sorted(self.removed, key=Bar.key)
            == sorted(other.removed, key=Bar.key)
        )

    def __hash__(self):
        return hash(
            (
                tuple(sorted(self.added, key=Bar.key)),
                tuple(sorted(self.removed, key=Bar.key)),
            )
        )

    def __repr__(self):
        return f"BarcodeDelta(added={list(self.added)}, removed={list(self.removed)})"


class StreamState:
    """Incremental persistence state for one simplex stream.

    Attributes
    ----------
    values : dict
        Simplex (sorted vertex tuple) -> filtration value.
    chains : dict
        Killing simplex -> reduced boundary chain, a mapping from
        simplices to nonzero scalars.
    pairing : dict
        Cycle-creating simplex -> the simplex that kills its class.
    cycles : set
        Creators whose class is still alive.
    """

    __slots__ = ("field", "values", "chains", "pairing", "cycles", "_seq")

    def __init__(self, field=QQ):
        self.field = field
        self.values = {}
        self.chains = {}
        self.pairing = {}
        self.cycles = set()
        self._seq = {}

    def __len__(self):
        return len(self.values)

    def key(self, simplex):
        """Filtration position: value first, arrival order on ties."""
        return (self.values[simplex], self._seq[simplex])

    def __repr__(self):
        return (
            f"StreamState({len(self.values)} simplices, "
            f"{len(self.pairing)} pairs, {len(self.cycles)} cycles)"
        )


def _boundary_chain(state: StreamState, vertices, value):
    field = state.field
    chain = {}
    if len(vertices) == 1:
        return chain
    for i in range(len(vertices)):
        face = vertices[:i] + vertices[i + 1:]
        if face not in state.values:
            raise ValueError(f"simplex {vertices} is missing face {face}")
        if state.values[face] > value:
            raise ValueError(
                f"face {face} has value {state.values[face]}, after "
                f"{vertices} at {value}"
            )
        chain[face] = field.one if i % 2 == 0 else field.neg(field.one)
    return chain


def _leading(state: StreamState, chain):
    return max(chain, key=state.key)


def _subtract_multiple(field, chain, ratio, other):
    """chain -= ratio * other, dropping entries that cancel to zero."""
    for simplex, c in other.items():
        value = field.sub(chain.get(simplex, field.zero), field.mul(ratio, c))
        if value:
            chain[simplex] = value
        else:
            chain.pop(simplex, None)


def _interval(state: StreamState, creator, killer=None) -> Bar:
    death = INF if killer is None else state.values[killer]
    return Bar(len(creator) - 1, state.values[creator], death)


def add_simplex(state: StreamState, vertices, value):
    """Insert one simplex; return the state and the barcode delta.

    The new boundary is reduced against chains earlier in filtration
    position.  If it survives with a leading simplex owned by a pair
    later in the filtration, that pair is stolen and the displaced
    chain re-settled, cascading to later and later positions.
    """
    vertices = tuple(sorted(vertices))
    if len(set(vertices)) != len(vertices):
        raise ValueError(f"repeated vertex in simplex {vertices}")
    if vertices in state.values:
        raise ValueError(f"simplex {vertices} inserted twice")
    chain = _boundary_chain(state, vertices, value)
    state._seq[vertices] = len(state._seq)
    state.values[vertices] = value

    added = []
    removed = []
    carrier = vertices
    while True:
        # reduce against chains earlier in the filtration than carrier
        while chain:
            leading = _leading(state, chain)
            owner = state.pairing.get(leading)
            if owner is None or state.key(owner) >= state.key(carrier):
                break
            ratio = state.field.div(chain[leading], state.chains[owner][leading])
            _subtract_multiple(state.field, chain, ratio, state.chains[owner])
        if not chain:
            state.cycles.add(carrier)
            added.append(_interval(state, carrier))
            break
        leading = _leading(state, chain)
        owner = state.pairing.get(leading)
        state.pairing[leading] = carrier
        state.chains[carrier] = chain
        if owner is None:
            # the leading simplex was an unpaired cycle: new pair
            state.cycles.remove(leading)
            removed.append(_interval(state, leading))
            added.append(_interval(state, leading, carrier))
            break
        # steal the pair from a later chain and re-settle that chain
        removed.append(_interval(state, leading, owner))
        added.append(_interval(state, leading, carrier))
        displaced = state.chains.pop(owner)
        ratio = state.field.div(displaced[leading], chain[leading])
        _subtract_multiple(state.field, displaced, ratio, chain)
        carrier, chain = owner, displaced
    return state, BarcodeDelta(added, removed)


def current_barcode(state: StreamState) -> Barcode:
    """Snapshot barcode: one bar per pair, one infinite bar per cycle."""
    bars = [
        _interval(state, creator, killer)
        for creator, killer in state.pairing.items()
    ]
    bars.extend(_interval(state, creator) for creator in state.cycles)
    return Barcode(bars)
