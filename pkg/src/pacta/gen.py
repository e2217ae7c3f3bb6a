"""Generated contract families for experiments and stress tests.

Currently one family: *shy dancers*.  Guests stand on an n×n grid and each
will only step onto the dance floor once at least two of their (Chebyshev)
neighbours are dancing.  A guest's willingness can be standard — the
neighbours must actually be dancing first — or circular — a promise to dance
provided two neighbours are guaranteed to dance eventually.  Each guest is
satisfied exactly when two of their neighbours end up dancing, expressed as
one offers/requests pair per neighbour pair.

Whether the party happens at all is then a question about how the circular
guests are placed; a lone circular guest can never bootstrap the floor.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable

from .model import (
    CIRCULAR,
    STANDARD,
    Clause,
    ContractSpec,
    OfferRequestPayoff,
    PreconditionError,
)

Cell = tuple[int, int]


def _event(cell: Cell) -> str:
    return f"e{cell[0]}_{cell[1]}"


def _guest(cell: Cell) -> str:
    return f"g{cell[0]}_{cell[1]}"


def _neighbours(cell: Cell, n: int) -> list[Cell]:
    i, j = cell
    out = []
    for x in range(max(1, i - 1), min(n, i + 1) + 1):
        for y in range(max(1, j - 1), min(n, j + 1) + 1):
            if (x, y) != (i, j):
                out.append((x, y))
    return out


def shy_dancers(n: int, circular: Iterable[Cell] | None = None) -> ContractSpec:
    """The n×n shy-dancers contract.

    *circular* lists the grid cells (1-based) whose guests promise on credit;
    ``None`` makes every guest circular.
    """
    if n < 2:
        raise PreconditionError("shy_dancers needs n >= 2")
    cells = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
    if circular is None:
        circular_cells = set(cells)
    else:
        circular_cells = set(circular)
        stray = sorted(c for c in circular_cells if c not in set(cells))
        if stray:
            raise PreconditionError(f"cells outside the {n}x{n} grid: {stray}")

    owner = {_event(c): _guest(c) for c in cells}
    clauses: list[Clause] = []
    payoffs: dict[str, OfferRequestPayoff] = {}
    for cell in cells:
        kind = CIRCULAR if cell in circular_cells else STANDARD
        neighbour_events = sorted(_event(nb) for nb in _neighbours(cell, n))
        for pair in combinations(neighbour_events, 2):
            clauses.append(Clause(_event(cell), frozenset(pair), kind))
        payoffs[_guest(cell)] = OfferRequestPayoff(
            tuple(
                (frozenset(pair), frozenset(pair))
                for pair in combinations(neighbour_events, 2)
            )
        )
    return ContractSpec.of(owner=owner, clauses=clauses, payoffs=payoffs)
