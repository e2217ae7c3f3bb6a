"""Horn contract logic: provability, proof traces, and the urgency encoding.

A :class:`HornTheory` is a set of definite clauses over atoms, in the same
two kinds as contract clauses: ``standard`` (``α → a``: conclude *a* once the
whole body is derived) and ``circular`` (``α ↠ a``: conclude *a* if the body
is derivable while assuming *a*).  Facts are empty-body standard clauses.

*Proof traces* refine provability with an order of performance: a trace is a
duplicate-free sequence of atoms witnessing in what order they can be
honoured.  Standard steps append on the right; a circular step for ``α ↠ a``
takes a trace of the theory extended with the fact ``a``, checks the body is
in it, and re-inserts ``a`` via interleaving — which is what lets ``a`` occur
*before* its justification.

The urgency encoding compiles the question "which atom may be performed
next?" into plain provability over a tagged alphabet: ``!a`` ("a was already
performed"), ``R$a`` ("a is still obtainable"), ``U$a`` ("a can be performed
now").  The tag spellings are outside the identifier grammar of the DSL, so
encoded theories can never collide with user input.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .game import RuleIndex
from .model import (
    CIRCULAR,
    STANDARD,
    Clause,
    ContractSpec,
    PreconditionError,
    is_reserved_name,
)

Trace = tuple[str, ...]


@dataclass(frozen=True)
class HornTheory:
    """An immutable Horn theory; hashable, so it can key caches in tests."""

    atoms: frozenset[str]
    clauses: frozenset[Clause]

    @classmethod
    def of(cls, clauses: Iterable[Clause], atoms: Iterable[str] = ()) -> "HornTheory":
        """Build a theory, deriving the alphabet from the clauses.

        Extra isolated atoms may be supplied via *atoms*.
        """
        cs = frozenset(clauses)
        alphabet = set(atoms)
        for c in cs:
            alphabet.add(c.head)
            alphabet |= c.body
        return cls(frozenset(alphabet), cs)


def theory_of(spec: ContractSpec) -> HornTheory:
    """View a conflict-free contract as a Horn theory (owners are dropped)."""
    if spec.conflicts:
        raise PreconditionError(
            "only conflict-free specifications have a Horn theory reading"
        )
    return HornTheory(atoms=spec.events, clauses=spec.clauses)


def spec_of(theory: HornTheory, participant: str = "T") -> ContractSpec:
    """Wrap a theory as a single-participant contract (for printing and play)."""
    return ContractSpec.of(
        owner={a: participant for a in theory.atoms}, clauses=theory.clauses
    )


def provable_atoms(theory: HornTheory) -> frozenset[str]:
    """All atoms provable from the theory (circular clauses discharge their head)."""
    return RuleIndex(theory.atoms, theory.clauses).provable()


# ---------------------------------------------------------------------------
# proof traces


def _squeeze(seq: Iterable[str]) -> Trace:
    """Drop repeated elements, keeping the leftmost occurrence of each."""
    seen: set[str] = set()
    out: list[str] = []
    for x in seq:
        if x not in seen:
            seen.add(x)
            out.append(x)
    return tuple(out)


def interleave(left: Sequence[str], right: Sequence[str]) -> frozenset[Trace]:
    """All order-preserving merges of the two sequences, duplicates squeezed.

    Both operands are squeezed first; shared elements may therefore migrate
    leftward in the result (the leftmost copy survives).  Strings work too,
    treated as sequences of single-character events.
    """
    a = _squeeze(left)
    b = _squeeze(right)
    out: set[Trace] = set()

    def merge(i: int, j: int, acc: tuple[str, ...]) -> None:
        if i == len(a) and j == len(b):
            out.add(_squeeze(acc))
            return
        if i < len(a):
            merge(i + 1, j, acc + (a[i],))
        if j < len(b):
            merge(i, j + 1, acc + (b[j],))

    merge(0, 0, ())
    return frozenset(out)


def _saturate_traces(theory: HornTheory) -> set[Trace]:
    """Full trace set of the theory, memoizing each fact-extension once."""
    std_flat = [(c.body, c.head) for c in theory.clauses if c.kind == STANDARD]
    circ_flat = [(c.body, c.head) for c in theory.clauses if c.kind == CIRCULAR]
    cache: dict[frozenset[str], set[Trace]] = {}

    def traces_for(facts: frozenset[str]) -> set[Trace]:
        hit = cache.get(facts)
        if hit is not None:
            return hit
        traces: set[Trace] = {()}
        # Installing the live set up front makes the self-extension case
        # (a circular head that is already a fact) iterate to a joint
        # fixpoint instead of recursing forever; genuine extensions only
        # ever look upward, at strictly larger fact sets.
        cache[facts] = traces
        rules = std_flat + [(frozenset(), a) for a in facts]
        changed = True
        while changed:
            changed = False
            for sigma in list(traces):
                have = set(sigma)
                for body, head in rules:
                    if head not in have and body <= have:
                        extended = sigma + (head,)
                        if extended not in traces:
                            traces.add(extended)
                            changed = True
            for body, head in circ_flat:
                for tau in list(traces_for(facts | {head})):
                    if body <= set(tau):
                        for merged in interleave(tau, (head,)):
                            if merged not in traces:
                                traces.add(merged)
                                changed = True
        return traces

    return traces_for(frozenset())


def _shortlex(trace: Trace) -> tuple[int, Trace]:
    return (len(trace), trace)


def proof_traces(theory: HornTheory, max_count: int | None = None) -> frozenset[Trace]:
    """The set of proof traces of the theory.

    With *max_count*, only the first that many traces in shortlex order are
    returned.
    """
    if max_count is not None and max_count < 0:
        raise PreconditionError("max_count must be non-negative")
    all_traces = _saturate_traces(theory)
    if max_count is None:
        return frozenset(all_traces)
    return frozenset(sorted(all_traces, key=_shortlex)[:max_count])


def iter_proof_traces(theory: HornTheory) -> Iterator[Trace]:
    """Yield all proof traces in shortlex order (saturates up front)."""
    yield from sorted(_saturate_traces(theory), key=_shortlex)


def is_proof_trace(theory: HornTheory, trace: Sequence[str]) -> bool:
    """Membership in the trace set; unknown atoms are a precondition error."""
    seq = tuple(trace)
    unknown = frozenset(seq) - theory.atoms
    if unknown:
        raise PreconditionError(f"unknown atoms: {', '.join(sorted(unknown))}")
    return seq in _saturate_traces(theory)


# ---------------------------------------------------------------------------
# urgency encoding


def mark_done(atom: str) -> str:
    """Tag: the atom has already been performed."""
    return "!" + atom


def mark_reachable(atom: str) -> str:
    """Tag: the atom can still be obtained."""
    return "R$" + atom


def mark_urgent(atom: str) -> str:
    """Tag: the atom can be performed right now."""
    return "U$" + atom


def encode_urgency(theory: HornTheory) -> HornTheory:
    """Compile the theory into one whose provable ``U$``/``R$`` tags answer
    urgency and reachability questions.

    Each standard clause ``α → a`` becomes ``!α → U$a`` (once the body is
    performed, *a* is immediately performable) and ``R$α → R$a``; each
    circular clause ``α ↠ a`` becomes ``R$α ↠ U$a`` (it suffices that the
    body stays obtainable).  Every atom also gets ``!a → U$a`` (a performed
    atom counts as performable) and ``U$a → R$a``.
    """
    offenders = sorted(a for a in theory.atoms if is_reserved_name(a))
    if offenders:
        raise PreconditionError(
            f"atoms collide with the tag namespace: {', '.join(offenders)}"
        )
    clauses: set[Clause] = set()
    for c in theory.clauses:
        if c.kind == STANDARD:
            clauses.add(
                Clause(mark_urgent(c.head), frozenset(map(mark_done, c.body)), STANDARD)
            )
            clauses.add(
                Clause(
                    mark_reachable(c.head),
                    frozenset(map(mark_reachable, c.body)),
                    STANDARD,
                )
            )
        else:
            clauses.add(
                Clause(
                    mark_urgent(c.head),
                    frozenset(map(mark_reachable, c.body)),
                    CIRCULAR,
                )
            )
    for a in theory.atoms:
        clauses.add(Clause(mark_urgent(a), frozenset({mark_done(a)}), STANDARD))
        clauses.add(Clause(mark_reachable(a), frozenset({mark_urgent(a)}), STANDARD))
    alphabet = frozenset(
        tag(a) for a in theory.atoms for tag in (mark_done, mark_reachable, mark_urgent)
    )
    return HornTheory(atoms=alphabet, clauses=frozenset(clauses))


def urgent_atoms(theory: HornTheory, done: Iterable[str]) -> frozenset[str]:
    """Atoms performable right after the atoms in *done*, via the encoding."""
    performed = frozenset(done)
    unknown = performed - theory.atoms
    if unknown:
        raise PreconditionError(f"unknown atoms: {', '.join(sorted(unknown))}")
    enc = encode_urgency(theory)
    facts = frozenset(
        Clause(mark_done(a), frozenset(), STANDARD) for a in performed
    )
    provable = RuleIndex(enc.atoms, enc.clauses | facts).provable()
    return frozenset(
        a for a in theory.atoms - performed if mark_urgent(a) in provable
    )


def reach_atoms(theory: HornTheory) -> frozenset[str]:
    """Atoms that occur in at least one proof trace, via the encoding."""
    enc = encode_urgency(theory)
    provable = RuleIndex(enc.atoms, enc.clauses).provable()
    return frozenset(a for a in theory.atoms if mark_reachable(a) in provable)
