"""Brute-force reference implementations, kept deliberately independent.

These are the arbiters the fast algorithms in :mod:`pacta.game` and
:mod:`pacta.logic` are tested against:

* :func:`nd_provable` — natural-deduction provability, following the
  introduction/elimination rules directly (assumption sets grow for the
  premise of a circular implication);
* :func:`traces_bruteforce` — the trace semantics computed by naive
  saturation with no sharing between subtheories;
* :func:`prudence_bruteforce` — prudence read off the full game tree: an
  event is prudent when, against arbitrary opponent behaviour, its owner can
  always bring its credits back without relying on anyone else.

All three are exponential and carry small size guards; they exist to be
obviously correct, not fast.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import (
    CIRCULAR,
    STANDARD,
    Clause,
    ContractSpec,
    PreconditionError,
    check_play,
)
from .logic import HornTheory, Trace, interleave

RULES = ("Id", "AndI", "AndE1", "AndE2", "ArrowE", "CArrowE")


@dataclass(frozen=True)
class Derivation:
    """A natural-deduction proof tree.

    ``rule`` is one of :data:`RULES`.  Clause bodies are sets, so conjunction
    introduction/elimination never shows up in generated trees: a clause
    application simply carries one premise per body atom.  ``assumptions``
    records the hypotheses in scope at this node; the premise of a circular
    clause is derived under the assumptions extended with the clause's head.
    """

    goal: str
    rule: str
    assumptions: frozenset[str]
    premises: tuple["Derivation", ...] = ()
    clause: Clause | None = None


class _NdSearch:
    """Forward chaining per assumption set, recursing only into larger sets."""

    def __init__(self, theory: HornTheory):
        self.clauses = sorted(
            theory.clauses, key=lambda c: (c.head, c.kind, sorted(c.body))
        )
        self.memo: dict[frozenset[str], frozenset[str]] = {}
        # (assumptions, atom) -> clause that first derived the atom there
        self.fired_by: dict[tuple[frozenset[str], str], Clause] = {}

    def derivable(self, assumptions: frozenset[str]) -> frozenset[str]:
        hit = self.memo.get(assumptions)
        if hit is not None:
            return hit
        derived = set(assumptions)
        changed = True
        while changed:
            changed = False
            for c in self.clauses:
                if c.head in derived:
                    continue
                if c.kind == STANDARD:
                    ok = c.body <= derived
                else:
                    # c.head is not yet derived, hence not in the assumptions:
                    # the recursion strictly enlarges the set and terminates.
                    ok = c.body <= self.derivable(assumptions | {c.head})
                if ok:
                    derived.add(c.head)
                    self.fired_by.setdefault((assumptions, c.head), c)
                    changed = True
        result = frozenset(derived)
        self.memo[assumptions] = result
        return result

    def reconstruct(self, goal: str, assumptions: frozenset[str]) -> Derivation:
        if goal in assumptions:
            return Derivation(goal, "Id", assumptions)
        clause = self.fired_by[(assumptions, goal)]
        if clause.kind == STANDARD:
            scope = assumptions
            rule = "ArrowE"
        else:
            scope = assumptions | {goal}
            rule = "CArrowE"
        premises = tuple(self.reconstruct(b, scope) for b in sorted(clause.body))
        return Derivation(goal, rule, assumptions, premises, clause)


def nd_provable(
    theory: HornTheory, atom: str, assumptions: frozenset[str] = frozenset()
) -> bool:
    """Is *atom* derivable from the theory under the given assumptions?"""
    search = _NdSearch(theory)
    return atom in search.derivable(frozenset(assumptions))


def nd_derivation(
    theory: HornTheory, atom: str, assumptions: frozenset[str] = frozenset()
) -> Derivation | None:
    """A proof tree for *atom*, or None when it is not derivable."""
    search = _NdSearch(theory)
    scope = frozenset(assumptions)
    if atom not in search.derivable(scope):
        return None
    return search.reconstruct(atom, scope)


def check_derivation(theory: HornTheory, deriv: Derivation) -> bool:
    """Audit a proof tree rule by rule against the theory."""
    if deriv.rule == "Id":
        return (
            deriv.goal in deriv.assumptions
            and not deriv.premises
            and deriv.clause is None
        )
    if deriv.rule in ("ArrowE", "CArrowE"):
        c = deriv.clause
        if c is None or c not in theory.clauses or c.head != deriv.goal:
            return False
        wanted_kind = STANDARD if deriv.rule == "ArrowE" else CIRCULAR
        if c.kind != wanted_kind:
            return False
        scope = (
            deriv.assumptions
            if deriv.rule == "ArrowE"
            else deriv.assumptions | {deriv.goal}
        )
        if tuple(p.goal for p in deriv.premises) != tuple(sorted(c.body)):
            return False
        return all(
            p.assumptions == scope and check_derivation(theory, p)
            for p in deriv.premises
        )
    # AndI/AndE1/AndE2 belong to the rule vocabulary but generated trees
    # fold conjunctions into premise tuples, so there is nothing to audit.
    return False


def traces_bruteforce(theory: HornTheory) -> frozenset[Trace]:
    """Trace semantics by plain saturation; subtheories are recomputed on
    every pass rather than shared.  Guarded at 8 atoms."""
    if len(theory.atoms) > 8:
        raise PreconditionError("traces_bruteforce supports at most 8 atoms")
    std_flat = [(c.body, c.head) for c in theory.clauses if c.kind == STANDARD]
    circ_flat = [(c.body, c.head) for c in theory.clauses if c.kind == CIRCULAR]

    def saturate(facts: frozenset[str]) -> set[Trace]:
        rules = std_flat + [(frozenset(), a) for a in facts]
        traces: set[Trace] = {()}
        changed = True
        while changed:
            changed = False
            for sigma in list(traces):
                have = set(sigma)
                for body, head in rules:
                    if head not in have and body <= have:
                        grown = sigma + (head,)
                        if grown not in traces:
                            traces.add(grown)
                            changed = True
            for body, head in circ_flat:
                # Adding an already-present fact changes nothing, so the
                # subtheory is this one; otherwise recompute it from scratch.
                sub = traces if head in facts else saturate(facts | {head})
                for tau in list(sub):
                    if body <= set(tau):
                        for merged in interleave(tau, (head,)):
                            if merged not in traces:
                                traces.add(merged)
                                changed = True
        return traces

    return frozenset(saturate(frozenset()))


# ---------------------------------------------------------------------------
# prudence from the game tree


def _final_credits(spec: ContractSpec, seq: tuple[str, ...]) -> frozenset[str]:
    whole = frozenset(seq)
    pending: set[str] = set()
    for j, e in enumerate(seq):
        past = frozenset(seq[:j])
        justified = any(
            c.body <= past
            for c in spec.clauses
            if c.head == e and c.kind == STANDARD
        ) or any(
            c.body <= whole
            for c in spec.clauses
            if c.head == e and c.kind == CIRCULAR
        )
        if not justified:
            pending.add(e)
    return frozenset(pending)


def prudence_table(
    spec: ContractSpec,
) -> dict[tuple[str, ...], frozenset[str]]:
    """Prudent events after every play of the spec, by game-tree analysis.

    Starts from "everything fireable is prudent" and prunes until stable.
    Pruning is monotone — declaring fewer events prudent makes more stopped
    plays count as innocent, which can only prune further — so the loop lands
    on the greatest fixpoint.  Conflicts are fully supported.  Guarded at 6
    events.
    """
    if len(spec.events) > 6:
        raise PreconditionError("prudence_table supports at most 6 events")
    events = sorted(spec.events)

    plays: list[tuple[str, ...]] = []

    def grow(prefix: tuple[str, ...], used: frozenset[str]) -> None:
        plays.append(prefix)
        for e in events:
            if e not in used and spec.compatible(used | {e}):
                grow(prefix + (e,), used | {e})

    grow((), frozenset())

    gamma = {p: _final_credits(spec, p) for p in plays}
    fireable = {
        p: tuple(
            e
            for e in events
            if e not in p and spec.compatible(frozenset(p) | {e})
        )
        for p in plays
    }
    owned = {a: spec.owned_by(a) for a in spec.participants}

    table: dict[tuple[str, ...], frozenset[str]] = {
        p: frozenset(fireable[p]) for p in plays
    }

    def prudent_here(
        base: tuple[str, ...],
        event: str,
        cur: dict[tuple[str, ...], frozenset[str]],
    ) -> bool:
        actor = spec.owner[event]
        mine = owned[actor]
        budget = gamma[base]

        def recovered(play: tuple[str, ...]) -> bool:
            return gamma[play] & mine <= budget

        def others_done(play: tuple[str, ...]) -> bool:
            return not any(spec.owner[x] != actor for x in cur[play])

        def safe(play: tuple[str, ...], ok: bool) -> bool:
            ok = ok or recovered(play)
            for nxt in fireable[play]:
                if spec.owner[nxt] != actor and not safe(play + (nxt,), ok):
                    return False
            if not ok and others_done(play):
                # A fair stop here would leave the actor exposed: it must be
                # able to keep the play alive safely on its own.
                return any(
                    safe(play + (nxt,), ok)
                    for nxt in fireable[play]
                    if spec.owner[nxt] == actor
                )
            return True

        return safe(base + (event,), False)

    while True:
        new_table = {
            p: frozenset(e for e in table[p] if prudent_here(p, e, table))
            for p in plays
        }
        if new_table == table:
            return new_table
        table = new_table


def prudence_bruteforce(
    spec: ContractSpec, play: tuple[str, ...] | list[str]
) -> frozenset[str]:
    """Prudent events right after *play*, from the game tree (≤ 6 events)."""
    seq = check_play(spec, play)
    return prudence_table(spec)[seq]
