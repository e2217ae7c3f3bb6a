"""Game semantics of contracts: credits, prudence, winning, agreement.

The polynomial core is :class:`RuleIndex`, a clause table with three fixpoint
routines:

* ``closure`` — ordinary forward chaining over standard clauses;
* ``credit_closure`` — the largest consistent "credit grant": start by
  granting every circular head, close under standard clauses, and withdraw
  any grant whose circular justification is not contained in the closure,
  until stable;
* ``next_events`` — events that can be performed *prudently* after a set of
  done events: enabled outright by a standard clause, or backed by a circular
  clause whose body the rest of the play can still honour.

Iterating ``next_events`` from the empty set yields exactly the events of the
contract that can be brought about by prudent cooperation, which is what the
agreement check is built on.  All operations in this module work on finite
plays.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .model import (
    CIRCULAR,
    STANDARD,
    Clause,
    ContractSpec,
    GoalPayoff,
    InvalidPlayError,
    OfferRequestPayoff,
    PreconditionError,
    Strategy,
    check_event_set,
    check_play,
)


class RuleIndex:
    """Clause tables keyed by head, shared by the game and logic layers."""

    __slots__ = ("universe", "std_bodies", "circ_bodies", "_flat_std", "_heads")

    def __init__(self, universe: Iterable[str], clauses: Iterable[Clause]):
        self.universe = frozenset(universe)
        std: dict[str, list[frozenset[str]]] = {}
        circ: dict[str, list[frozenset[str]]] = {}
        for c in clauses:
            table = std if c.kind == STANDARD else circ
            table.setdefault(c.head, []).append(c.body)
        self.std_bodies = std
        self.circ_bodies = circ
        self._flat_std = [(body, head) for head, bodies in std.items() for body in bodies]
        self._heads = frozenset(std) | frozenset(circ)

    def closure(self, seed: Iterable[str]) -> set[str]:
        """Least set containing *seed* and closed under standard clauses."""
        done = set(seed)
        by_atom: dict[str, list[int]] = {}
        need: list[int] = []
        heads: list[str] = []
        queue = list(done)
        for idx, (body, head) in enumerate(self._flat_std):
            need.append(len(body))
            heads.append(head)
            if not body and head not in done:
                done.add(head)
                queue.append(head)
            for a in body:
                by_atom.setdefault(a, []).append(idx)
        while queue:
            a = queue.pop()
            for idx in by_atom.get(a, ()):
                need[idx] -= 1
                if need[idx] == 0:
                    h = heads[idx]
                    if h not in done:
                        done.add(h)
                        queue.append(h)
        return done

    def credit_closure(self, done: Iterable[str]) -> set[str]:
        """Everything obtainable from *done* when credit is granted soundly.

        Grants shrink monotonically, so the loop runs at most one pass per
        circular head.
        """
        base = set(done)
        grant = set(self.circ_bodies)
        while True:
            closed = self.closure(base | grant)
            kept = {
                e for e in grant if any(b <= closed for b in self.circ_bodies[e])
            }
            if kept == grant:
                return closed
            grant = kept

    def next_events(self, done: frozenset[str]) -> frozenset[str]:
        """Events not yet in *done* that can be performed prudently now."""
        closed = self.credit_closure(done)
        out: set[str] = set()
        for e in self._heads:
            if e in done:
                continue
            if any(b <= done for b in self.std_bodies.get(e, ())):
                out.add(e)
            elif any(b <= closed for b in self.circ_bodies.get(e, ())):
                out.add(e)
        return frozenset(out)

    def provable(self) -> frozenset[str]:
        """Least fixpoint of ``X ∪ next_events(X)`` from the empty set."""
        done: frozenset[str] = frozenset()
        while True:
            step = self.next_events(done)
            if not step:
                return done
            done |= step


def _rules(spec: ContractSpec) -> RuleIndex:
    return RuleIndex(spec.events, spec.clauses)


def _require_conflict_free(spec: ContractSpec, op: str) -> None:
    if spec.conflicts:
        raise PreconditionError(f"{op} requires a conflict-free specification")


def _require_participant(spec: ContractSpec, participant: str) -> None:
    if participant not in spec.participants:
        raise PreconditionError(f"unknown participant: {participant!r}")


def enables(spec: ContractSpec, done: Iterable[str], event: str, kind: str) -> bool:
    """Does some clause of *kind* with head *event* have its body inside *done*?"""
    if kind not in (STANDARD, CIRCULAR):
        raise PreconditionError(f"unknown clause kind: {kind!r}")
    if event not in spec.events:
        raise PreconditionError(f"unknown event: {event!r}")
    X = check_event_set(spec, done)
    return any(
        c.body <= X for c in spec.clauses if c.head == event and c.kind == kind
    )


def reachable(spec: ContractSpec, done: Iterable[str]) -> frozenset[str]:
    """Events obtainable on credit from *done* (excluding *done* itself)."""
    _require_conflict_free(spec, "reachable")
    X = check_event_set(spec, done)
    return frozenset(_rules(spec).credit_closure(X)) - X


def prudent_events(spec: ContractSpec, done: Iterable[str]) -> frozenset[str]:
    """Events that can be prudently performed right after the events in *done*."""
    _require_conflict_free(spec, "prudent_events")
    X = check_event_set(spec, done)
    return _rules(spec).next_events(X)


def is_prudent_play(spec: ContractSpec, play: Sequence[str]) -> bool:
    """True when every step of *play* is prudent at the moment it is taken."""
    _require_conflict_free(spec, "is_prudent_play")
    seq = check_play(spec, play)
    rules = _rules(spec)
    done: frozenset[str] = frozenset()
    for e in seq:
        if e not in rules.next_events(done):
            return False
        done |= {e}
    return True


def provable_events(spec: ContractSpec) -> frozenset[str]:
    """All events prudent cooperation can bring about from scratch."""
    _require_conflict_free(spec, "provable_events")
    return _rules(spec).provable()


@dataclass(frozen=True)
class CreditLedger:
    """Credits after each prefix of a play.

    ``per_prefix[i]`` holds the events of the first ``i`` moves that are, at
    that point, neither enabled by their own past (standard clauses) nor
    backed for the whole prefix (circular clauses).  ``per_prefix[0]`` is
    always empty; ``final`` is the ledger after the complete play.
    """

    per_prefix: tuple[frozenset[str], ...]

    @property
    def final(self) -> frozenset[str]:
        return self.per_prefix[-1]


def credits(spec: ContractSpec, play: Sequence[str]) -> CreditLedger:
    """Compute the credit ledger of *play* (conflicting specs are fine here)."""
    seq = check_play(spec, play)
    rules = _rules(spec)
    out: list[frozenset[str]] = []
    for i in range(len(seq) + 1):
        whole = frozenset(seq[:i])
        pending: set[str] = set()
        for j in range(i):
            e = seq[j]
            past = frozenset(seq[:j])
            justified = any(
                b <= past for b in rules.std_bodies.get(e, ())
            ) or any(b <= whole for b in rules.circ_bodies.get(e, ()))
            if not justified:
                pending.add(e)
        out.append(frozenset(pending))
    return CreditLedger(tuple(out))


def innocent(spec: ContractSpec, participant: str, play: Sequence[str]) -> bool:
    """No urgent event of *participant* is left undone at the end of *play*."""
    _require_conflict_free(spec, "innocent")
    _require_participant(spec, participant)
    seq = check_play(spec, play)
    pending = _rules(spec).next_events(frozenset(seq))
    return not (pending & spec.owned_by(participant))


def credit_free(spec: ContractSpec, participant: str, play: Sequence[str]) -> bool:
    """None of *participant*'s events remain on credit after *play*."""
    _require_participant(spec, participant)
    return not (credits(spec, play).final & spec.owned_by(participant))


@dataclass(frozen=True)
class ParticipantVerdict:
    innocent: bool
    credit_free: bool
    wins: bool


@dataclass(frozen=True)
class GameVerdict:
    """Outcome of a finished play, one row per participant."""

    play: tuple[str, ...]
    participants: Mapping[str, ParticipantVerdict]


def _verdict_rows(
    spec: ContractSpec, seq: tuple[str, ...]
) -> dict[str, ParticipantVerdict]:
    rules = _rules(spec)
    done = frozenset(seq)
    pending = rules.next_events(done)
    final_credits = credits(spec, seq).final
    inn = {p: not (pending & spec.owned_by(p)) for p in spec.participants}
    rows: dict[str, ParticipantVerdict] = {}
    for p in sorted(spec.participants):
        cf = not (final_credits & spec.owned_by(p))
        others_culpable = any(not inn[q] for q in spec.participants if q != p)
        won = inn[p] and (
            others_culpable or (spec.payoffs[p].holds(done) and cf)
        )
        rows[p] = ParticipantVerdict(innocent=inn[p], credit_free=cf, wins=won)
    return rows


def _require_total_payoffs(spec: ContractSpec, op: str) -> None:
    missing = sorted(spec.participants - set(spec.payoffs))
    if missing:
        raise PreconditionError(
            f"{op} needs a payoff for every participant; missing: {', '.join(missing)}"
        )


def verdict(spec: ContractSpec, play: Sequence[str]) -> GameVerdict:
    """Judge a finished play: innocence, credits, and winners."""
    _require_conflict_free(spec, "verdict")
    _require_total_payoffs(spec, "verdict")
    seq = check_play(spec, play)
    return GameVerdict(play=seq, participants=_verdict_rows(spec, seq))


def wins(spec: ContractSpec, participant: str, play: Sequence[str]) -> bool:
    """Does *participant* win the finished *play*?

    A participant wins positively (their payoff holds, they are innocent and
    credit-free) or by default (they are innocent while someone else is not).
    """
    _require_conflict_free(spec, "wins")
    _require_participant(spec, participant)
    if participant not in spec.payoffs:
        raise PreconditionError(f"participant {participant!r} has no payoff")
    seq = check_play(spec, play)
    rules = _rules(spec)
    done = frozenset(seq)
    pending = rules.next_events(done)
    if pending & spec.owned_by(participant):
        return False
    others_culpable = any(
        pending & spec.owned_by(q) for q in spec.participants if q != participant
    )
    if others_culpable:
        return True
    cf = not (credits(spec, seq).final & spec.owned_by(participant))
    return cf and spec.payoffs[participant].holds(done)


def agreement(spec: ContractSpec) -> bool:
    """Can every participant's payoff be met by prudent cooperation?

    Requires a conflict-free spec whose payoffs are total and depend only on
    the set of performed events (both built-in payoff forms qualify).
    """
    _require_conflict_free(spec, "agreement")
    _require_total_payoffs(spec, "agreement")
    for p, payoff in spec.payoffs.items():
        if not isinstance(payoff, (GoalPayoff, OfferRequestPayoff)):
            raise PreconditionError(
                f"payoff for {p!r} is not a reachability payoff"
            )
    done = _rules(spec).provable()
    return all(spec.payoffs[p].holds(done) for p in spec.participants)


def synthesize_strategy(spec: ContractSpec, participant: str) -> Strategy:
    """The prudent strategy: always offer every prudent owned event."""
    _require_conflict_free(spec, "synthesize_strategy")
    _require_participant(spec, participant)
    rules = _rules(spec)
    owned = spec.owned_by(participant)

    def choose(play: tuple[str, ...]) -> frozenset[str]:
        seq = check_play(spec, play)
        return rules.next_events(frozenset(seq)) & owned

    return Strategy(participant=participant, choose=choose)


def simulate(
    spec: ContractSpec,
    strategies: Sequence[Strategy],
    seed: int = 0,
) -> tuple[tuple[str, ...], GameVerdict]:
    """Run the strategies to quiescence under a fair scheduler.

    Exactly one strategy per participant is required.  At every step each
    strategy is asked for offers (which must be owned, fresh, and playable);
    the scheduler fires the event whose uninterrupted offer streak started
    earliest, breaking ties uniformly at random with the given seed.  The loop
    stops when nobody offers, which makes the resulting finite play fair with
    respect to all the strategies.
    """
    _require_conflict_free(spec, "simulate")
    _require_total_payoffs(spec, "simulate")
    by_part: dict[str, Strategy] = {}
    for s in strategies:
        if s.participant in by_part:
            raise PreconditionError(f"duplicate strategy for {s.participant!r}")
        _require_participant(spec, s.participant)
        by_part[s.participant] = s
    missing = sorted(spec.participants - set(by_part))
    if missing:
        raise PreconditionError(f"no strategy for: {', '.join(missing)}")

    rng = random.Random(seed)
    play: list[str] = []
    streak_start: dict[str, int] = {}
    step = 0
    while True:
        snapshot = tuple(play)
        played = set(play)
        offered: set[str] = set()
        for p in sorted(by_part):
            strat = by_part[p]
            for e in sorted(strat.offers(snapshot)):
                if e not in spec.events or spec.owner.get(e) != p:
                    raise InvalidPlayError(
                        f"strategy for {p!r} offered {e!r}, which it does not own"
                    )
                if e in played or not spec.compatible(played | {e}):
                    raise InvalidPlayError(
                        f"strategy for {p!r} offered unplayable {e!r} after "
                        f"<{','.join(snapshot) or 'empty'}>"
                    )
                offered.add(e)
        streak_start = {e: t for e, t in streak_start.items() if e in offered}
        for e in sorted(offered):
            streak_start.setdefault(e, step)
        if not offered:
            break
        oldest = min(streak_start.values())
        candidates = sorted(e for e, t in streak_start.items() if t == oldest)
        chosen = candidates[0] if len(candidates) == 1 else rng.choice(candidates)
        play.append(chosen)
        del streak_start[chosen]
        step += 1

    seq = tuple(play)
    return seq, GameVerdict(play=seq, participants=_verdict_rows(spec, seq))
