"""Coxeter systems, reduced words and ShortLex normal forms.

Generators are indexed ``1..rank`` everywhere in the public API, words are
tuples of generator indices and the identity is the empty word.

The word problem is solved with a memoized descent-set recursion.  Every
element is stored under its *right-canonical* word (the reduced word whose
reversal is lexicographically least), together with its right descent set.
The descent set of ``x*s`` is derived from those of shorter elements using
the exchange condition, so no reduced-word closure ever has to be stored.
``braid_closure`` implements the naive Tits search and is kept as an
independent check.
"""

from __future__ import annotations

import math
import threading
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

INF = math.inf

Word = Tuple[int, ...]

DEFAULT_NODE_BUDGET = 2_000_000


class CoxeterInputError(ValueError):
    """Malformed Coxeter system description."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ResourceLimitError(RuntimeError):
    """A combinatorial search exceeded its configured budget."""


def _format_label(m) -> str:
    return "inf" if m == INF else str(int(m))


def _parse_label(token: str, line: Optional[int] = None):
    if token.lower() in ("inf", "oo", "infinity"):
        return INF
    try:
        m = int(token)
    except ValueError:
        raise CoxeterInputError(f"bad label {token!r}", line) from None
    if m < 2:
        raise CoxeterInputError(f"label must be >= 2 or inf, got {m}", line)
    return m


@dataclass(frozen=True)
class CoxeterSystem:
    """A Coxeter matrix together with generator names.

    ``labels`` is the full symmetric matrix as a tuple of rows (0-based storage,
    diagonal entries 1).  Use :meth:`from_labels` to build one from a pair map.
    """

    rank: int
    labels: Tuple[Tuple[float, ...], ...]
    names: Tuple[str, ...] = ()
    node_budget: int = field(default=DEFAULT_NODE_BUDGET, compare=False, repr=False)
    _table: "_WordTable" = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if self.rank < 1:
            raise CoxeterInputError(f"rank must be >= 1, got {self.rank}")
        if len(self.labels) != self.rank or any(len(row) != self.rank for row in self.labels):
            raise CoxeterInputError("label matrix has wrong shape")
        for i in range(self.rank):
            if self.labels[i][i] != 1:
                raise CoxeterInputError("diagonal labels must be 1")
            for j in range(i + 1, self.rank):
                m = self.labels[i][j]
                if m != self.labels[j][i]:
                    raise CoxeterInputError(f"labels not symmetric at ({i + 1},{j + 1})")
                if m != INF and (m != int(m) or m < 2):
                    raise CoxeterInputError(f"label at ({i + 1},{j + 1}) must be >= 2 or inf")
        if not self.names:
            object.__setattr__(self, "names", tuple(f"s{i}" for i in range(1, self.rank + 1)))
        elif len(self.names) != self.rank or len(set(self.names)) != self.rank:
            raise CoxeterInputError("generator names must be distinct, one per generator")
        object.__setattr__(self, "_table", _WordTable(self))

    @classmethod
    def from_labels(
        cls,
        rank: int,
        labels: Mapping[Tuple[int, int], float],
        default=None,
        names: Sequence[str] = (),
        node_budget: int = DEFAULT_NODE_BUDGET,
    ) -> "CoxeterSystem":
        """Build from a map ``{(i, j): m}`` over 1-based pairs; missing pairs get ``default``."""
        if rank < 1:
            raise CoxeterInputError(f"rank must be >= 1, got {rank}")
        matrix = [[1 if i == j else None for j in range(rank)] for i in range(rank)]
        for (i, j), m in labels.items():
            if not (1 <= i <= rank and 1 <= j <= rank) or i == j:
                raise CoxeterInputError(f"bad generator pair ({i},{j})")
            if m != INF:
                m = int(m)
            matrix[i - 1][j - 1] = matrix[j - 1][i - 1] = m
        for i in range(rank):
            for j in range(i + 1, rank):
                if matrix[i][j] is None:
                    if default is None:
                        raise CoxeterInputError(f"no label for pair ({i + 1},{j + 1}) and no default")
                    matrix[i][j] = matrix[j][i] = default
        return cls(rank, tuple(tuple(row) for row in matrix), tuple(names), node_budget)

    def m(self, i: int, j: int):
        """Order of ``s_i s_j`` (1-based indices); ``INF`` for infinite order."""
        return self.labels[i - 1][j - 1]

    def pairs(self) -> Iterable[Tuple[int, int]]:
        for i in range(1, self.rank + 1):
            for j in range(i + 1, self.rank + 1):
                yield i, j

    @property
    def generators(self) -> range:
        return range(1, self.rank + 1)

    def with_budget(self, node_budget: int) -> "CoxeterSystem":
        return CoxeterSystem(self.rank, self.labels, self.names, node_budget)

    def format_word(self, word: Sequence[int]) -> str:
        return " ".join(self.names[i - 1] for i in word) if word else "e"


@dataclass(frozen=True)
class Element:
    """A group element carried by its ShortLex normal form."""

    nf: Word = ()

    @property
    def length(self) -> int:
        return len(self.nf)

    def shortlex_key(self):
        return (len(self.nf), self.nf)

    def __str__(self):
        return "[" + ",".join(map(str, self.nf)) + "]"


IDENTITY = Element(())


def _alternating(length: int, last: int, other: int) -> Word:
    """Alternating word in two letters of the given length ending in ``last``."""
    out = []
    letter = last
    for _ in range(length):
        out.append(letter)
        letter = other if letter == last else last
    return tuple(reversed(out))


class _WordTable:
    """Memo of right descent sets keyed by right-canonical words.

    Behaves as a pure function of its inputs; concurrent fills store equal
    values so readers never observe inconsistent entries.
    """

    def __init__(self, system: CoxeterSystem):
        self.rank = system.rank
        self.labels = system.labels
        self.budget = system.node_budget
        self.desc: Dict[Word, frozenset] = {(): frozenset()}
        self.nbr: Dict[Word, Dict[int, Word]] = {(): {}}
        self.nf_of: Dict[Word, Word] = {(): ()}
        self.key_of: Dict[Word, Word] = {(): ()}
        self._local = threading.local()

    def _tick(self):
        n = getattr(self._local, "work", 0) + 1
        self._local.work = n
        if n > self.budget:
            raise ResourceLimitError(
                f"word problem exceeded node budget of {self.budget}"
            )

    def step(self, x: Word, s: int) -> Word:
        nb = self.nbr[x]
        y = nb.get(s)
        if y is None:
            self._tick()
            y = self._down(x, s) if s in self.desc[x] else self._up(x, s)
            nb[s] = y
        return y

    def _down(self, x: Word, s: int) -> Word:
        d = x[-1]  # least right descent
        if s == d:
            return x[:-1]
        # both s and d are descents: x = x'' * w0(s, d) with a finite dihedral tail
        m = int(self.labels[s - 1][d - 1])
        z = x
        for k in range(m):
            z = self.step(z, d if k % 2 == 0 else s)
        for letter in _alternating(m - 1, d, s):
            z = self.step(z, letter)
        return z

    def _up(self, x: Word, s: int) -> Word:
        desc = {s}
        tails = {}
        for u in range(1, self.rank + 1):
            if u == s:
                continue
            m = self.labels[s - 1][u - 1]
            if m == INF:
                continue
            # u is a descent of xs iff x has a reduced tail (..., s, u) of length m-1
            z = x
            for k in range(int(m) - 1):
                letter = u if k % 2 == 0 else s
                if letter not in self.desc[z]:
                    break
                z = self.step(z, letter)
            else:
                desc.add(u)
                tails[u] = z
        d = min(desc)
        if d == s:
            y = x + (s,)
            yd = x
        else:
            z = tails[d]
            for letter in _alternating(int(self.labels[s - 1][d - 1]) - 1, s, d):
                z = self.step(z, letter)
            yd = z
            y = z + (d,)
        if y not in self.desc:
            self.nbr[y] = {s: x, d: yd}
            self.desc[y] = frozenset(desc)
        return y

    def walk(self, key: Word, letters: Iterable[int]) -> Word:
        for s in letters:
            key = self.step(key, s)
        return key

    def begin(self):
        self._local.work = 0

    def nf(self, key: Word) -> Word:
        nf = self.nf_of.get(key)
        if nf is None:
            inv = self.walk((), reversed(key))
            nf = tuple(reversed(inv))
            self.nf_of[key] = nf
            self.key_of[nf] = key
        return nf

    def key(self, nf: Word) -> Word:
        key = self.key_of.get(nf)
        if key is None:
            key = self.walk((), nf)
            self.key_of[nf] = key
            self.nf_of[key] = nf
        return key


def _check_word(system: CoxeterSystem, word: Iterable[int]) -> Word:
    w = tuple(word)
    for s in w:
        if not (isinstance(s, int) and 1 <= s <= system.rank):
            raise CoxeterInputError(f"generator index {s!r} out of range 1..{system.rank}")
    return w


def reduce(system: CoxeterSystem, word: Iterable[int]) -> Element:
    """ShortLex normal form of the element represented by ``word``."""
    w = _check_word(system, word)
    table = system._table
    table.begin()
    return Element(table.nf(table.walk((), w)))


def multiply(system: CoxeterSystem, *elements: Element) -> Element:
    table = system._table
    table.begin()
    if not elements:
        return IDENTITY
    key = table.key(elements[0].nf)
    for e in elements[1:]:
        key = table.walk(key, e.nf)
    return Element(table.nf(key))


def product_length(system: CoxeterSystem, *elements: Element) -> int:
    """Length of a product without materialising its normal form."""
    table = system._table
    table.begin()
    key = ()
    for e in elements:
        key = table.walk(key, e.nf)
    return len(key)


def right_multiply(system: CoxeterSystem, a: Element, s: int) -> Element:
    table = system._table
    table.begin()
    return Element(table.nf(table.step(table.key(a.nf), s)))


def inverse(system: CoxeterSystem, a: Element) -> Element:
    return reduce(system, reversed(a.nf))


def generator(system: CoxeterSystem, i: int) -> Element:
    _check_word(system, (i,))
    return Element((i,))


def right_descents(system: CoxeterSystem, a: Element) -> frozenset:
    table = system._table
    table.begin()
    return table.desc[table.key(a.nf)]


def conjugate_reflection(system: CoxeterSystem, g: Element, i: int) -> Element:
    """The reflection ``g s_i g^-1``."""
    _check_word(system, (i,))
    return reduce(system, g.nf + (i,) + tuple(reversed(g.nf)))


def is_in_centralizer(system: CoxeterSystem, g: Element, i: int) -> bool:
    return conjugate_reflection(system, g, i).nf == (i,)


def is_reflection(system: CoxeterSystem, t: Element) -> bool:
    """True iff ``t`` is conjugate to a generator.

    Peels a left descent from both sides; for a reflection the length drops
    by exactly two each time until a generator remains.
    """
    while t.length > 1:
        s = t.nf[0]
        u = reduce(system, (s,) + t.nf + (s,))
        if u.length != t.length - 2:
            return False
        t = u
    return t.length == 1


def elements_by_length(system: CoxeterSystem, radius: int):
    """All elements of length <= radius, in ShortLex order."""
    layer = [IDENTITY]
    seen = {IDENTITY.nf}
    out = [IDENTITY]
    for _ in range(radius):
        nxt = []
        for a in layer:
            for s in system.generators:
                b = right_multiply(system, a, s)
                if b.length > a.length and b.nf not in seen:
                    seen.add(b.nf)
                    nxt.append(b)
        nxt.sort(key=Element.shortlex_key)
        out.extend(nxt)
        layer = nxt
        if not layer:
            break
    return out


# --- Tits' braid-closure search (independent oracle) -----------------------


def _braid_moves(system: CoxeterSystem, w: Word):
    n = len(w)
    for i in range(n - 1):
        a, b = w[i], w[i + 1]
        if a == b:
            continue
        m = system.m(a, b)
        if m == INF or i + m > n:
            continue
        m = int(m)
        if all(w[i + k] == (a if k % 2 == 0 else b) for k in range(m)):
            swapped = tuple(b if k % 2 == 0 else a for k in range(m))
            yield w[:i] + swapped + w[i + m:]


def braid_closure(
    system: CoxeterSystem,
    word: Iterable[int],
    deletions: bool = True,
    budget: Optional[int] = None,
) -> set:
    """All words reachable from ``word`` by braid moves (and ``ss`` deletions).

    By Tits' theorem the shortest words in the closure with deletions are
    exactly the reduced words of the element.
    """
    w = _check_word(system, word)
    budget = system.node_budget if budget is None else budget
    seen = {w}
    queue = deque([w])
    while queue:
        u = queue.popleft()
        nxt = list(_braid_moves(system, u))
        if deletions:
            nxt.extend(u[:i] + u[i + 2:] for i in range(len(u) - 1) if u[i] == u[i + 1])
        for v in nxt:
            if v not in seen:
                seen.add(v)
                if len(seen) > budget:
                    raise ResourceLimitError(f"braid closure exceeded {budget} nodes")
                queue.append(v)
    return seen


def tits_normal_form(system: CoxeterSystem, word: Iterable[int], budget: Optional[int] = None) -> Word:
    """ShortLex normal form by exhaustive braid-closure search."""
    closure = braid_closure(system, word, deletions=True, budget=budget)
    shortest = min(map(len, closure))
    return min(w for w in closure if len(w) == shortest)


# --- text format -------------------------------------------------------------


def parse_system(text: str, default_label=None, node_budget: int = DEFAULT_NODE_BUDGET) -> CoxeterSystem:
    """Parse the line-oriented ``.cox`` format.

    ``default_label`` overrides any ``default`` line in the text.
    """
    rank = None
    default = None
    names: Tuple[str, ...] = ()
    labels: Dict[Tuple[int, int], float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        head = tokens[0].lower()
        if head == "rank":
            if rank is not None:
                raise CoxeterInputError("rank declared twice", lineno)
            if len(tokens) != 2:
                raise CoxeterInputError("expected 'rank N'", lineno)
            try:
                rank = int(tokens[1])
            except ValueError:
                raise CoxeterInputError(f"bad rank {tokens[1]!r}", lineno) from None
            if rank < 1:
                raise CoxeterInputError(f"rank must be >= 1, got {rank}", lineno)
        elif head == "default":
            if len(tokens) != 2:
                raise CoxeterInputError("expected 'default <m|inf>'", lineno)
            if default is not None:
                raise CoxeterInputError("default declared twice", lineno)
            default = _parse_label(tokens[1], lineno)
        elif head == "names":
            if rank is None:
                raise CoxeterInputError("'names' before 'rank'", lineno)
            names = tuple(tokens[1:])
            if len(names) != rank or len(set(names)) != rank:
                raise CoxeterInputError("expected one distinct name per generator", lineno)
        elif head == "m":
            if rank is None:
                raise CoxeterInputError("'m' before 'rank'", lineno)
            if len(tokens) != 4:
                raise CoxeterInputError("expected 'm i j <m|inf>'", lineno)
            try:
                i, j = int(tokens[1]), int(tokens[2])
            except ValueError:
                raise CoxeterInputError("generator indices must be integers", lineno) from None
            if not (1 <= i < j <= rank):
                raise CoxeterInputError(f"need 1 <= i < j <= {rank}, got {i} {j}", lineno)
            if (i, j) in labels:
                raise CoxeterInputError(f"duplicate declaration of pair ({i},{j})", lineno)
            labels[(i, j)] = _parse_label(tokens[3], lineno)
        else:
            raise CoxeterInputError(f"unknown directive {tokens[0]!r}", lineno)
    if rank is None:
        raise CoxeterInputError("missing 'rank' line")
    if default_label is not None:
        default = default_label
    return CoxeterSystem.from_labels(rank, labels, default, names, node_budget)


def render_system(system: CoxeterSystem) -> str:
    """Inverse of :func:`parse_system`; every pair is written explicitly."""
    lines = [f"rank {system.rank}"]
    if system.names != tuple(f"s{i}" for i in system.generators):
        lines.append("names " + " ".join(system.names))
    for i, j in system.pairs():
        lines.append(f"m {i} {j} {_format_label(system.m(i, j))}")
    return "\n".join(lines) + "\n"


# --- small catalogue used by tests, presets and the CLI ------------------------


def dihedral(m) -> CoxeterSystem:
    return CoxeterSystem.from_labels(2, {(1, 2): m})


def type_a(n: int) -> CoxeterSystem:
    return CoxeterSystem.from_labels(n, {(i, i + 1): 3 for i in range(1, n)}, default=2)


def free_product(rank: int) -> CoxeterSystem:
    """Free product of ``rank`` copies of Z/2 (every label infinite)."""
    return CoxeterSystem.from_labels(rank, {}, default=INF)


def triangle_system(p: int, q: int, r: int) -> CoxeterSystem:
    return CoxeterSystem.from_labels(3, {(1, 2): p, (1, 3): q, (2, 3): r})


def racg_cycle(k: int) -> CoxeterSystem:
    """Right-angled Coxeter group on a k-cycle: adjacent generators commute, others free."""
    labels = {}
    for i in range(1, k + 1):
        j = i % k + 1
        labels[(min(i, j), max(i, j))] = 2
    return CoxeterSystem.from_labels(k, labels, default=INF)
