"""Prefix-free codes and the compression proxy for algorithmic information.

All code lengths are in bits, logs are base 2, and every encoder here is
self-delimiting: within one family no codeword is a prefix of another, so
Kraft sums stay below one and concatenations decode unambiguously.

The default word compressor hedges between three models behind a short
selector, the way block compressors switch between stored, static and
dynamic blocks:

* an enumerative branch: symbol counts followed by the exact
  combinatorial rank of the word within its type class, which costs the
  empirical entropy plus a few bits and so stays within a hair of n bits
  on incompressible words, where dictionary codes pay a visible premium;
* a dictionary branch: Welch-style LZ78 parse (dictionary seeded with
  the alphabet, one index per phrase, no explicit literals), with indices
  economy-coded behind a two-entry cache of recent back-reference
  distances, so constant and periodic inputs settle into two bits per
  growing phrase;
* a copy branch: LZ77 tokens (literal, or copy at delta-coded offset and
  length, overlap allowed), which captures long-range recurrence: words
  with slowly growing factor complexity collapse to a handful of copies.

The emitted stream is elias_delta(length+1), an economy-coded selector,
then the shortest payload.  The enumerative and dictionary branches also
support exact incremental per-prefix costs, used by the deficiency
screen.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

F = Fraction

Word = Tuple[int, ...]


class UnknownSymbol(ValueError):
    """Word contains an unresolved symbol and cannot be encoded."""


class CodeError(ValueError):
    """Bit stream does not decode under this family."""


def _check_word(word: Sequence[int], alphabet: int) -> Word:
    w = tuple(word)
    for c in w:
        if c is None:
            raise UnknownSymbol("word contains an unresolved symbol")
        if not 0 <= c < alphabet:
            raise ValueError(f"symbol {c} outside alphabet of size {alphabet}")
    return w


# ---------------------------------------------------------------------------
# Elias gamma / delta
# ---------------------------------------------------------------------------


def elias_gamma(n: int) -> str:
    if n < 1:
        raise ValueError("gamma code needs n >= 1")
    binary = bin(n)[2:]
    return "0" * (len(binary) - 1) + binary


def elias_gamma_len(n: int) -> int:
    return 2 * (n.bit_length() - 1) + 1


def elias_gamma_decode(bits: str, pos: int = 0) -> Tuple[int, int]:
    zeros = 0
    while pos + zeros < len(bits) and bits[pos + zeros] == "0":
        zeros += 1
    end = pos + 2 * zeros + 1
    if end > len(bits):
        raise CodeError("truncated gamma code")
    return int(bits[pos + zeros : end], 2), end


def elias_encode(n: int) -> str:
    """Elias delta code: |code| <= J(log2 n) + 1, prefix-free over n >= 1."""
    if n < 1:
        raise ValueError("delta code needs n >= 1")
    binary = bin(n)[2:]
    return elias_gamma(len(binary)) + binary[1:]


def elias_len(n: int) -> int:
    nbits = n.bit_length()
    return elias_gamma_len(nbits) + nbits - 1


def elias_decode(bits: str, pos: int = 0) -> Tuple[int, int]:
    nbits, pos = elias_gamma_decode(bits, pos)
    end = pos + nbits - 1
    if end > len(bits):
        raise CodeError("truncated delta code")
    return int("1" + bits[pos:end], 2), end


# ---------------------------------------------------------------------------
# Economy (phased-in) code for a value with a known range
# ---------------------------------------------------------------------------


def phased_len(value: int, size: int) -> int:
    if size <= 1:
        return 0
    k = (size - 1).bit_length()
    short = (1 << k) - size
    return k - 1 if value < short else k


def phased_encode(value: int, size: int) -> str:
    if not 0 <= value < size:
        raise ValueError(f"value {value} outside range {size}")
    if size <= 1:
        return ""
    k = (size - 1).bit_length()
    short = (1 << k) - size
    if value < short:
        return format(value, f"0{k - 1}b") if k > 1 else ""
    return format(value + short, f"0{k}b")


def phased_decode(bits: str, pos: int, size: int) -> Tuple[int, int]:
    if size <= 1:
        return 0, pos
    k = (size - 1).bit_length()
    short = (1 << k) - size
    head = bits[pos : pos + k - 1]
    if len(head) < k - 1:
        raise CodeError("truncated economy code")
    value = int(head, 2) if head else 0
    if value < short:
        return value, pos + k - 1
    if pos + k > len(bits):
        raise CodeError("truncated economy code")
    return int(bits[pos : pos + k], 2) - short, pos + k


# ---------------------------------------------------------------------------
# LZ branch
# ---------------------------------------------------------------------------


class _DiffCache:
    """Two most recent distinct back-reference distances.

    Hit on the first entry costs "10", on the second "11" (which then
    moves to front); a miss costs the escape bit "0" plus the index.
    """

    __slots__ = ("first", "second")

    def __init__(self):
        self.first = 0
        self.second = 1

    def cost(self, diff: int, index: int, size: int) -> int:
        if diff == self.first or diff == self.second:
            return 2
        return 1 + phased_len(index, size)

    def emit(self, diff: int, index: int, size: int) -> str:
        if diff == self.first:
            return "10"
        if diff == self.second:
            self.first, self.second = self.second, self.first
            return "11"
        out = "0" + phased_encode(index, size)
        self.first, self.second = diff, self.first
        return out

    def absorb(self, diff: int):
        if diff == self.first:
            return
        if diff == self.second:
            self.first, self.second = self.second, self.first
        else:
            self.first, self.second = diff, self.first

    def read(self, bits: str, pos: int, size: int) -> Tuple[int, int]:
        if pos >= len(bits):
            raise CodeError("truncated token")
        if bits[pos] == "1":
            if pos + 1 >= len(bits):
                raise CodeError("truncated cache flag")
            hit_second = bits[pos + 1] == "1"
            diff = self.second if hit_second else self.first
            if hit_second:
                self.first, self.second = self.second, self.first
            index = (size - 1) - diff
            if index < 0:
                raise CodeError("cache distance outside the dictionary")
            return index, pos + 2
        index, pos = phased_decode(bits, pos + 1, size)
        self.first, self.second = (size - 1) - index, self.first
        return index, pos


def _lz_tokens(word: Word, alphabet: int):
    """(t, index) phrases of the seeded-dictionary longest-match parse."""
    trie = {(-1, c): c for c in range(alphabet)}
    next_id = alphabet
    node = -1
    t = 1
    for c in word:
        child = trie.get((node, c))
        if child is not None:
            node = child
            continue
        yield t, node
        trie[(node, c)] = next_id
        next_id += 1
        t += 1
        node = trie[(-1, c)]
    if node != -1:
        yield t, node


def _lz_payload(word: Word, alphabet: int) -> str:
    parts = []
    cache = _DiffCache()
    for t, index in _lz_tokens(word, alphabet):
        size = alphabet + t - 1
        parts.append(cache.emit((size - 1) - index, index, size))
    return "".join(parts)


def _lz_payload_len(word: Word, alphabet: int) -> int:
    total = 0
    cache = _DiffCache()
    for t, index in _lz_tokens(word, alphabet):
        size = alphabet + t - 1
        total += cache.cost((size - 1) - index, index, size)
        cache.absorb((size - 1) - index)
    return total


def _lz_prefix_lens(word: Word, alphabet: int) -> List[int]:
    """Payload cost of every prefix; the parse of a prefix shares all
    complete phrases with the full parse, so only the pending match is
    re-costed at each step."""
    out = [0]
    trie = {(-1, c): c for c in range(alphabet)}
    next_id = alphabet
    node = -1
    t = 1
    complete = 0
    cache = _DiffCache()
    for c in word:
        child = trie.get((node, c))
        if child is None:
            size = alphabet + t - 1
            complete += cache.cost((size - 1) - node, node, size)
            cache.absorb((size - 1) - node)
            trie[(node, c)] = next_id
            next_id += 1
            t += 1
            child = trie[(-1, c)]
        node = child
        size = alphabet + t - 1
        out.append(complete + cache.cost((size - 1) - node, node, size))
    return out


def _lz_decode_payload(bits: str, pos: int, n: int, alphabet: int) -> Tuple[Word, int]:
    words: List[Word] = [(c,) for c in range(alphabet)]
    out: List[int] = []
    cache = _DiffCache()
    prev: Optional[Word] = None
    t = 1
    while len(out) < n:
        size = alphabet + t - 1
        index, pos = cache.read(bits, pos, size)
        if index < len(words):
            phrase = words[index]
        elif index == len(words) and prev is not None:
            phrase = prev + (prev[0],)
        else:
            raise CodeError(f"dictionary index {index} out of range")
        if len(out) + len(phrase) > n:
            raise CodeError("phrase overruns the declared length")
        out.extend(phrase)
        if prev is not None:
            words.append(prev + (phrase[0],))
        prev = phrase
        t += 1
    return tuple(out), pos


# ---------------------------------------------------------------------------
# Enumerative branch: counts, then layered combinadic ranks
# ---------------------------------------------------------------------------


class _CombinadicLayer:
    """Rank of a growing binary sequence within its weight class.

    Append-friendly combinatorial number system: with ones at 0-based
    positions p_1 < ... < p_r the rank is sum C(p_t, t), a bijection onto
    [0, C(m, r)).  Appending a bit updates rank and class size with O(1)
    big-integer operations.
    """

    __slots__ = ("length", "ones", "rank", "size")

    def __init__(self):
        self.length = 0
        self.ones = 0
        self.rank = 0
        self.size = 1  # C(length, ones)

    def append(self, bit: int):
        m, r = self.length, self.ones
        if bit:
            # C(m, r+1) from C(m, r)
            self.rank += self.size * (m - r) // (r + 1)
            self.size = self.size * (m + 1) // (r + 1)
            self.ones += 1
        else:
            self.size = self.size * (m + 1) // (m + 1 - r)
        self.length += 1


def _combinadic_unrank(rank: int, m: int, r: int) -> List[int]:
    """Positions of the r ones, from rank in [0, C(m, r))."""
    if r == 0:
        if rank != 0:
            raise CodeError("combinadic rank out of range")
        return []
    positions = []
    p = m - 1
    c = math.comb(m - 1, r)
    for t in range(r, 0, -1):
        while c > rank:
            c = c * (p - t) // p  # C(p-1, t) from C(p, t)
            p -= 1
        rank -= c
        positions.append(p)
        if t > 1:
            c = c * t // p  # C(p-1, t-1) from C(p, t)
            p -= 1
    if rank != 0:
        raise CodeError("combinadic rank out of range")
    return positions[::-1]


def _enum_counts(word: Word, alphabet: int) -> List[int]:
    counts = [0] * alphabet
    for c in word:
        counts[c] += 1
    return counts


def _enum_payload(word: Word, alphabet: int) -> str:
    n = len(word)
    counts = _enum_counts(word, alphabet)
    parts = []
    rem = n
    for j in range(alphabet - 1, 0, -1):
        parts.append(phased_encode(counts[j], rem + 1))
        rem -= counts[j]
    layers = [_CombinadicLayer() for _ in range(alphabet)]
    for c in word:
        for j in range(c, alphabet):
            if j >= 1:
                layers[j].append(1 if c == j else 0)
    # layer j sees positions with symbol <= j; encode j = k-1 .. 1
    for j in range(alphabet - 1, 0, -1):
        parts.append(phased_encode(layers[j].rank, layers[j].size))
    return "".join(parts)


def _enum_payload_len(word: Word, alphabet: int) -> int:
    n = len(word)
    counts = _enum_counts(word, alphabet)
    total = 0
    rem = n
    for j in range(alphabet - 1, 0, -1):
        total += phased_len(counts[j], rem + 1)
        rem -= counts[j]
    layers = [_CombinadicLayer() for _ in range(alphabet)]
    for c in word:
        for j in range(max(c, 1), alphabet):
            layers[j].append(1 if c == j else 0)
    for j in range(alphabet - 1, 0, -1):
        total += phased_len(layers[j].rank, layers[j].size)
    return total


def _enum_prefix_lens(word: Word, alphabet: int) -> List[int]:
    layers = [_CombinadicLayer() for _ in range(alphabet)]
    counts = [0] * alphabet
    out = [0]
    m = 0
    for c in word:
        counts[c] += 1
        m += 1
        for j in range(max(c, 1), alphabet):
            layers[j].append(1 if c == j else 0)
        total = 0
        rem = m
        for j in range(alphabet - 1, 0, -1):
            total += phased_len(counts[j], rem + 1)
            rem -= counts[j]
            total += phased_len(layers[j].rank, layers[j].size)
        out.append(total)
    return out


def _enum_decode_payload(bits: str, pos: int, n: int, alphabet: int) -> Tuple[Word, int]:
    counts = [0] * alphabet
    rem = n
    for j in range(alphabet - 1, 0, -1):
        counts[j], pos = phased_decode(bits, pos, rem + 1)
        rem -= counts[j]
    counts[0] = rem
    if counts[0] < 0:
        raise CodeError("counts exceed the declared length")
    # positions are filled top layer down: layer j distributes symbol j
    # over the slots not yet claimed by higher symbols
    slots = list(range(n))
    symbols = [0] * n
    for j in range(alphabet - 1, 0, -1):
        m = sum(counts[: j + 1])
        r = counts[j]
        size = 1
        for i in range(r):
            size = size * (m - i) // (i + 1)
        rank, pos = phased_decode(bits, pos, size)
        ones = set(_combinadic_unrank(rank, m, r)) if r else set()
        kept = []
        for local, slot in enumerate(slots):
            if local in ones:
                symbols[slot] = j
            else:
                kept.append(slot)
        slots = kept
    return tuple(symbols), pos


# ---------------------------------------------------------------------------
# Copy branch (LZ77 with a hash-chain greedy parse)
# ---------------------------------------------------------------------------

_LZ77_MIN_MATCH = 3


class _SuffixAutomaton:
    """Online suffix automaton over the consumed history.

    Supports exact longest-match queries: the longest prefix of the
    lookahead occurring anywhere in the history, with one occurrence's end
    position.  Construction is the standard online algorithm, amortized
    linear.
    """

    __slots__ = ("nexts", "links", "lens", "firstpos", "last")

    def __init__(self):
        self.nexts = [{}]
        self.links = [-1]
        self.lens = [0]
        self.firstpos = [-1]
        self.last = 0

    def extend(self, c: int, position: int):
        cur = len(self.lens)
        self.nexts.append({})
        self.links.append(-1)
        self.lens.append(self.lens[self.last] + 1)
        self.firstpos.append(position)
        p = self.last
        while p >= 0 and c not in self.nexts[p]:
            self.nexts[p][c] = cur
            p = self.links[p]
        if p == -1:
            self.links[cur] = 0
        else:
            q = self.nexts[p][c]
            if self.lens[p] + 1 == self.lens[q]:
                self.links[cur] = q
            else:
                clone = len(self.lens)
                self.nexts.append(dict(self.nexts[q]))
                self.links.append(self.links[q])
                self.lens.append(self.lens[p] + 1)
                self.firstpos.append(self.firstpos[q])
                while p >= 0 and self.nexts[p].get(c) == q:
                    self.nexts[p][c] = clone
                    p = self.links[p]
                self.links[q] = clone
                self.links[cur] = clone
        self.last = cur

    def longest_match(self, text: Word, start: int):
        """(length, source_start) of the longest in-history match."""
        state = 0
        length = 0
        for i in range(start, len(text)):
            nxt = self.nexts[state].get(text[i])
            if nxt is None:
                break
            state = nxt
            length += 1
        if length == 0:
            return 0, -1
        return length, self.firstpos[state] - length + 1


def _lz77_tokens(word: Word):
    """Exact-greedy (literal | copy) parse; copies may overlap onward."""
    n = len(word)
    sam = _SuffixAutomaton()
    pos = 0
    while pos < n:
        length, src = sam.longest_match(word, pos)
        if length:
            # overlap extension: once the in-history match is maximal the
            # copy may keep reading its own output periodically
            while pos + length < n and word[src + length] == word[pos + length]:
                length += 1
        if length >= _LZ77_MIN_MATCH:
            yield ("copy", pos - src, length)
            step = length
        else:
            yield ("lit", word[pos], 1)
            step = 1
        for i in range(pos, pos + step):
            sam.extend(word[i], i)
        pos += step


def _lz77_payload_len(word: Word, alphabet: int) -> int:
    total = 0
    for kind, a, b in _lz77_tokens(word):
        if kind == "lit":
            total += 1 + phased_len(a, alphabet)
        else:
            total += 1 + elias_len(a) + elias_len(b - _LZ77_MIN_MATCH + 1)
    return total


def _lz77_payload(word: Word, alphabet: int) -> str:
    parts = []
    for kind, a, b in _lz77_tokens(word):
        if kind == "lit":
            parts.append("0" + phased_encode(a, alphabet))
        else:
            parts.append("1" + elias_encode(a) + elias_encode(b - _LZ77_MIN_MATCH + 1))
    return "".join(parts)


def _lz77_decode_payload(bits: str, pos: int, n: int, alphabet: int) -> Tuple[Word, int]:
    out: List[int] = []
    while len(out) < n:
        if pos >= len(bits):
            raise CodeError("truncated copy-branch token")
        flag = bits[pos]
        pos += 1
        if flag == "0":
            symbol, pos = phased_decode(bits, pos, alphabet)
            out.append(symbol)
        else:
            offset, pos = elias_decode(bits, pos)
            length, pos = elias_decode(bits, pos)
            length += _LZ77_MIN_MATCH - 1
            if offset < 1 or offset > len(out):
                raise CodeError("copy offset outside the produced prefix")
            if len(out) + length > n:
                raise CodeError("copy overruns the declared length")
            src = len(out) - offset
            for i in range(length):
                out.append(out[src + i])
    return tuple(out), pos


# ---------------------------------------------------------------------------
# Compressor families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LZCompressor:
    """Self-delimiting LZ code: delta length header plus the token stream."""

    alphabet: int = 2
    family: str = "lz-cache-v1"

    def encode(self, word: Sequence[int]) -> str:
        word = _check_word(word, self.alphabet)
        return elias_encode(len(word) + 1) + _lz_payload(word, self.alphabet)

    def bits_len(self, word: Sequence[int]) -> int:
        word = _check_word(word, self.alphabet)
        return elias_len(len(word) + 1) + _lz_payload_len(word, self.alphabet)

    def prefix_bits(self, word: Sequence[int]) -> List[int]:
        word = _check_word(word, self.alphabet)
        payload = _lz_prefix_lens(word, self.alphabet)
        return [elias_len(m + 1) + payload[m] for m in range(len(word) + 1)]

    def decode_stream(self, bits: str, pos: int = 0) -> Tuple[Word, int]:
        header, pos = elias_decode(bits, pos)
        return _lz_decode_payload(bits, pos, header - 1, self.alphabet)

    def decode(self, bits: str) -> Word:
        word, pos = self.decode_stream(bits)
        if pos != len(bits):
            raise CodeError(f"{len(bits) - pos} trailing bits")
        return word

    def rate(self, word: Sequence[int]) -> F:
        word = _check_word(word, self.alphabet)
        if not word:
            raise ValueError("rate needs a nonempty word")
        return F(self.bits_len(word), len(word))


_BRANCHES = (
    ("enum", _enum_payload_len, _enum_payload, _enum_decode_payload),
    ("lz78", _lz_payload_len, _lz_payload, _lz_decode_payload),
    ("lz77", _lz77_payload_len, _lz77_payload, _lz77_decode_payload),
)


@dataclass(frozen=True)
class PrefixFreeCompressor:
    """Default proxy: delta header, economy selector, shortest branch.

    Branch 0 (enumerative) pays a one-bit selector, the dictionary and
    copy branches two bits; ties resolve to the lowest branch index.
    """

    alphabet: int = 2
    family: str = "enum-lz78-lz77-v1"

    def _costs(self, word: Word) -> List[int]:
        return [
            phased_len(i, 3) + fn(word, self.alphabet)
            for i, (_, fn, _, _) in enumerate(_BRANCHES)
        ]

    def _best(self, word: Word) -> int:
        costs = self._costs(word)
        return min(range(3), key=lambda i: (costs[i], i))

    def encode(self, word: Sequence[int]) -> str:
        word = _check_word(word, self.alphabet)
        header = elias_encode(len(word) + 1)
        if not word:
            return header + phased_encode(0, 3)
        best = self._best(word)
        return header + phased_encode(best, 3) + _BRANCHES[best][2](word, self.alphabet)

    def bits_len(self, word: Sequence[int]) -> int:
        word = _check_word(word, self.alphabet)
        if not word:
            return elias_len(1) + phased_len(0, 3)
        return elias_len(len(word) + 1) + min(self._costs(word))

    def screen_bits(self, word: Sequence[int]) -> List[int]:
        """Per-prefix code lengths from the enumerative and dictionary
        branches, computed incrementally in one pass.

        Valid self-delimiting lengths for every prefix, equal to bits_len
        except on strongly quasi-periodic words where the copy branch
        undercuts them; the deficiency screen uses this table.
        """
        word = _check_word(word, self.alphabet)
        lz = _lz_prefix_lens(word, self.alphabet)
        enum = _enum_prefix_lens(word, self.alphabet)
        return [
            elias_len(m + 1)
            + min(enum[m] + phased_len(0, 3), lz[m] + phased_len(1, 3))
            for m in range(len(word) + 1)
        ]

    def decode_stream(self, bits: str, pos: int = 0) -> Tuple[Word, int]:
        header, pos = elias_decode(bits, pos)
        n = header - 1
        selector, pos = phased_decode(bits, pos, 3)
        if n == 0:
            return (), pos
        return _BRANCHES[selector][3](bits, pos, n, self.alphabet)

    def decode(self, bits: str) -> Word:
        word, pos = self.decode_stream(bits)
        if pos != len(bits):
            raise CodeError(f"{len(bits) - pos} trailing bits")
        return word

    def rate(self, word: Sequence[int]) -> F:
        word = _check_word(word, self.alphabet)
        if not word:
            raise ValueError("rate needs a nonempty word")
        return F(self.bits_len(word), len(word))


def lz_rate(word: Sequence[int], alphabet: int = 2) -> F:
    """Bits per symbol under the default prefix-free compressor."""
    return PrefixFreeCompressor(alphabet).rate(word)


# ---------------------------------------------------------------------------
# Gap coding: reconstruct u from v plus the positions where they differ
# ---------------------------------------------------------------------------


def gap_encode(v: Sequence[int], diffs, alphabet: int = 2) -> str:
    """Patch turning v into u.

    `diffs` lists the differing positions in increasing order; for
    alphabets beyond binary each entry is (position, replacement symbol).
    Cost: delta(p+1) header plus one delta-coded gap per difference (each
    at most f(gap) bits), plus economy-coded replacements when flipping is
    ambiguous.
    """
    v = tuple(v)
    entries = []
    for item in diffs:
        pos, sym = item if isinstance(item, tuple) else (item, None)
        if not 0 <= pos < len(v):
            raise ValueError(f"diff position {pos} out of range")
        if alphabet > 2:
            if sym is None:
                raise ValueError("replacement symbols required beyond binary")
            if sym == v[pos] or not 0 <= sym < alphabet:
                raise ValueError(f"invalid replacement {sym} at {pos}")
        entries.append((pos, sym))
    if any(b <= a for (a, _), (b, _) in zip(entries, entries[1:])):
        raise ValueError("diff positions must be strictly increasing")
    parts = [elias_encode(len(entries) + 1)]
    last = -1
    for pos, sym in entries:
        parts.append(elias_encode(pos - last))
        last = pos
        if alphabet > 2:
            rank = sym - (sym > v[pos])
            parts.append(phased_encode(rank, alphabet - 1))
    return "".join(parts)


def gap_apply(v: Sequence[int], patch: str, alphabet: int = 2) -> Word:
    v = list(v)
    count, pos = elias_decode(patch, 0)
    last = -1
    for _ in range(count - 1):
        gap, pos = elias_decode(patch, pos)
        last += gap
        if last >= len(v):
            raise ValueError(f"diff position {last} out of range")
        if alphabet > 2:
            rank, pos = phased_decode(patch, pos, alphabet - 1)
            v[last] = rank + (rank >= v[last])
        else:
            v[last] = 1 - v[last]
    if pos != len(patch):
        raise CodeError(f"{len(patch) - pos} trailing patch bits")
    return tuple(v)


# ---------------------------------------------------------------------------
# Rank code for elements of listed finite sets
# ---------------------------------------------------------------------------


def rank_encode(n: int, rank: int) -> str:
    """Element of the n-th listed finite set, by enumeration rank.

    Length <= J(log2 |set|) + |elias(n)| + 1 whenever rank < |set|.
    """
    return elias_encode(n) + elias_encode(rank + 1)


def rank_decode(bits: str, pos: int = 0) -> Tuple[int, int, int]:
    n, pos = elias_decode(bits, pos)
    rank, pos = elias_decode(bits, pos)
    return n, rank - 1, pos


# ---------------------------------------------------------------------------
# Deficiency proxy and Kraft utilities
# ---------------------------------------------------------------------------


def neg_log2(q) -> float:
    """-log2 of a positive rational, safe for astronomically small values."""
    q = F(q)
    if q <= 0:
        raise ValueError("needs a positive rational")
    num, den = q.numerator, q.denominator
    shift = num.bit_length() - den.bit_length()
    scaled = float(F(num, den * (1 << shift)) if shift >= 0 else F(num * (1 << -shift), den))
    return -(shift + math.log2(scaled))


def deficiency_proxy(word: Sequence[int], cylinder_measure, alphabet: int = 2) -> float:
    """Screening statistic: max over prefixes of -log2(mu[prefix]) - bits(prefix).

    Large values flag compressible (hence measure-atypical) words; this is
    a code-length surrogate, not a true universal deficiency.  Returns
    +inf when some prefix has measure zero.
    """
    compressor = PrefixFreeCompressor(alphabet)
    bits = compressor.screen_bits(word)
    worst = -math.inf
    word = tuple(word)
    for m in range(1, len(word) + 1):
        p = cylinder_measure(word[:m])
        if p == 0:
            return math.inf
        worst = max(worst, neg_log2(p) - bits[m])
    return worst


def kraft_sum(codes: Iterable[str]) -> F:
    return sum((F(1, 1 << len(c)) for c in codes), F(0))


def prefix_violations(codes: Iterable[str]) -> List[Tuple[str, str]]:
    """All adjacent (prefix, extension) pairs among sorted distinct codewords.

    Sorting makes any prefix relation appear between lexicographic
    neighbors, so the scan is exhaustive; [] means prefix-free.
    """
    ordered = sorted(set(codes))
    bad = []
    for a, b in zip(ordered, ordered[1:]):
        if b.startswith(a):
            bad.append((a, b))
    return bad
