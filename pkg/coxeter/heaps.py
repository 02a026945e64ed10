"""Heaps of reduced words: commutation classes and braid-move closure.

A heap is the partial order on letter occurrences generated by
``i < j`` whenever the two labels are equal or do not commute. Its linear
extensions are exactly the commutation class of the word.
"""

import logging
from collections import Counter, deque
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field

from core.config import application_config
from core.exceptions import ClosureLimitError, MalformedWitnessError
from coxeter.diagram import INF, CoxeterDiagram, Node
from coxeter.group import CoxeterGroup

logger = logging.getLogger(__name__)

Word = tuple[Node, ...]


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Heap:
    """Occurrence poset of a word, stored as transitive-closure bitsets."""

    def __init__(self, diagram: CoxeterDiagram, word: Sequence[Node]) -> None:
        self.diagram = diagram
        self.letters: Word = tuple(word)
        n = len(self.letters)
        below = [0] * n
        for j in range(n):
            t = self.letters[j]
            mask = 0
            for i in range(j):
                s = self.letters[i]
                if s == t or diagram.m(s, t) != 2:
                    mask |= below[i] | (1 << i)
            below[j] = mask
        above = [0] * n
        for j in range(n):
            for i in _bits(below[j]):
                above[i] |= 1 << j
        self.below = below
        self.above = above

    def __len__(self) -> int:
        return len(self.letters)

    def less(self, i: int, j: int) -> bool:
        return bool(self.below[j] >> i & 1)

    def positions(self, label: Node) -> list[int]:
        return [p for p, s in enumerate(self.letters) if s == label]

    def canonical_order(self) -> list[int]:
        """Greedy lex-least linear extension: always take the smallest minimal label."""
        index = self.diagram.index
        placed = 0
        order = []
        remaining = set(range(len(self.letters)))
        while remaining:
            best = min(
                (p for p in remaining if self.below[p] & ~placed == 0),
                key=lambda p: index[self.letters[p]],
            )
            order.append(best)
            placed |= 1 << best
            remaining.discard(best)
        return order

    def linear_extensions(self, limit: int | None = None) -> Iterator[Word]:
        n = len(self.letters)
        produced = 0

        def extend(placed: int, prefix: list[Node]) -> Iterator[Word]:
            nonlocal produced
            if len(prefix) == n:
                produced += 1
                yield tuple(prefix)
                return
            for p in range(n):
                if placed >> p & 1 or self.below[p] & ~placed:
                    continue
                prefix.append(self.letters[p])
                yield from extend(placed | 1 << p, prefix)
                prefix.pop()
                if limit is not None and produced >= limit:
                    return

        yield from extend(0, [])


@dataclass(frozen=True)
class CommutationClass:
    canonical_word: Word
    heap: Heap = field(compare=False, repr=False)
    letter_counts: dict[Node, int] = field(compare=False, repr=False)

    def count(self, label: Node) -> int:
        return self.letter_counts.get(label, 0)

    def sort_key(self) -> tuple[int, ...]:
        index = self.heap.diagram.index
        return tuple(index[s] for s in self.canonical_word)

    def __str__(self) -> str:
        return self.heap.diagram.format_word(self.canonical_word)


def _canonical_class(d: CoxeterDiagram, word: Sequence[Node]) -> CommutationClass:
    heap = Heap(d, word)
    canonical = tuple(heap.letters[p] for p in heap.canonical_order())
    if canonical != heap.letters:
        heap = Heap(d, canonical)
    return CommutationClass(canonical, heap, dict(Counter(canonical)))


def _require_reduced(d: CoxeterDiagram, word: Sequence[Node], group: CoxeterGroup | None) -> Word:
    group = group or CoxeterGroup(d)
    letters = d.parse_word(word)
    _, reduced = group.normal_form(letters)
    if not reduced:
        raise MalformedWitnessError(
            f"{d.format_word(letters)} is not a reduced word of {d}", word=d.format_word(letters)
        )
    return letters


def commutation_canonical(
    d: CoxeterDiagram, word: Sequence[Node] | str, group: CoxeterGroup | None = None
) -> CommutationClass:
    return _canonical_class(d, _require_reduced(d, word, group))


def braid_moves(c: CommutationClass) -> Iterator[Word]:
    """Words obtained by one braid move applicable somewhere in the class."""
    heap = c.heap
    d = heap.diagram
    letters = heap.letters
    present = sorted(set(letters), key=d.index.__getitem__)
    for a_pos, s in enumerate(present):
        for t in present[a_pos + 1 :]:
            m = d.m(s, t)
            if m == 2 or m == INF:
                continue
            m = int(m)
            chain = [p for p, x in enumerate(letters) if x in (s, t)]
            for start in range(len(chain) - m + 1):
                window = chain[start : start + m]
                if any(letters[window[j]] == letters[window[j + 1]] for j in range(m - 1)):
                    continue
                first, last = window[0], window[-1]
                window_mask = sum(1 << p for p in window)
                if heap.above[first] & heap.below[last] & ~window_mask:
                    continue
                before = [p for p in _bits(heap.below[last] & ~window_mask)]
                after = [
                    p
                    for p in range(len(letters))
                    if not (window_mask >> p & 1) and not (heap.below[last] >> p & 1)
                ]
                swap = {s: t, t: s}
                yield (
                    tuple(letters[p] for p in before)
                    + tuple(swap[letters[p]] for p in window)
                    + tuple(letters[p] for p in after)
                )


def braid_closure(
    d: CoxeterDiagram,
    word: Sequence[Node] | str,
    max_classes: int | None = None,
    max_steps: int | None = None,
    group: CoxeterGroup | None = None,
) -> list[CommutationClass]:
    """Every commutation class of reduced words for the element of ``word``."""
    max_classes = max_classes or application_config.MAX_CLASSES
    max_steps = max_steps or application_config.MAX_STEPS
    start = commutation_canonical(d, word, group)
    found = {start.canonical_word: start}
    queue = deque([start])
    steps = 0
    while queue:
        current = queue.popleft()
        for moved in braid_moves(current):
            steps += 1
            if steps > max_steps:
                raise _limit(found, f"braid closure exceeded {max_steps} steps", max_steps=max_steps)
            candidate = _canonical_class(d, moved)
            if candidate.canonical_word in found:
                continue
            found[candidate.canonical_word] = candidate
            if len(found) > max_classes:
                raise _limit(found, f"braid closure exceeded {max_classes} classes", max_classes=max_classes)
            queue.append(candidate)
    classes = sorted(found.values(), key=CommutationClass.sort_key)
    logger.debug(f"Braid closure of {d.format_word(start.canonical_word)}: {len(classes)} classes")
    return classes


def _limit(found: dict[Word, CommutationClass], message: str, **details: int) -> ClosureLimitError:
    logger.warning(message)
    partial = sorted(found.values(), key=CommutationClass.sort_key)
    return ClosureLimitError(message, partial=partial, classes=len(partial), **details)


def anchor_pair(c: CommutationClass, anchor: Node, which: str) -> tuple[int, int]:
    occurrences = c.heap.positions(anchor)
    if len(occurrences) < 2:
        raise MalformedWitnessError(
            f"{anchor.display} occurs fewer than twice in {c}", anchor=anchor.display
        )
    if which == "first-two":
        return occurrences[0], occurrences[1]
    if which == "last-two":
        return occurrences[-2], occurrences[-1]
    raise ValueError(f"Unknown anchor selection {which!r}")


def between_counts(c: CommutationClass, anchor: Node, which: str, k: Node) -> dict[str, int]:
    """Least and greatest number of ``k`` letters between two anchor letters over the class."""
    heap = c.heap
    a, b = anchor_pair(c, anchor, which)
    forced = possible = 0
    for x in heap.positions(k):
        if heap.less(a, x) and heap.less(x, b):
            forced += 1
        if not (x == a or heap.less(x, a)) and not (x == b or heap.less(b, x)):
            possible += 1
    return {"forced": forced, "possible": possible}


def closure_oracle(
    d: CoxeterDiagram,
    word: Sequence[Node] | str,
    max_steps: int | None = None,
    group: CoxeterGroup | None = None,
) -> set[Word]:
    """Every reduced expression reachable by raw commutations and braid substitutions."""
    max_steps = max_steps or application_config.MAX_STEPS
    start = _require_reduced(d, word, group)
    seen = {start}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        n = len(current)
        for p in range(n - 1):
            s, t = current[p], current[p + 1]
            if s == t:
                continue
            m = d.m(s, t)
            if m == INF or p + int(m) > n:
                continue
            m = int(m)
            segment = current[p : p + m]
            if any(segment[j] != (s if j % 2 == 0 else t) for j in range(m)):
                continue
            swapped = tuple(t if j % 2 == 0 else s for j in range(m))
            candidate = current[:p] + swapped + current[p + m :]
            if candidate not in seen:
                seen.add(candidate)
                if len(seen) > max_steps:
                    raise ClosureLimitError(
                        f"closure oracle exceeded {max_steps} words",
                        partial=sorted(seen),
                        max_steps=max_steps,
                    )
                queue.append(candidate)
    return seen
