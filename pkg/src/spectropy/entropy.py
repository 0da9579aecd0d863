"""The three entropy measures over quantized level sequences.

``random_entropy`` and ``shannon_entropy`` ignore temporal order; the
match-length estimator (``lz_parse``, ``lz_parse_fast``,
``lz_entropy_estimate``) captures it.  ``lz_parse`` is the deliberately
naive quadratic reference and ``lz_parse_fast`` must return bit-identical
output, so the whole correctness burden sits on the simple code and the
fast path is validated purely by differential testing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BlockTooLongError,
    EmptySequenceError,
    EmptyTraceError,
    SequenceTooShortError,
)
from .quantize import level_distribution
from .trace import EntropyReport, LevelDistribution, QuantizedTrace


@dataclass(frozen=True)
class LzParse:
    """Per-position match-length statistics of a level sequence.

    ``lambdas[i]`` is one more than the length of the longest prefix of
    the suffix starting at position i that occurs as a contiguous run
    fully inside the strict past (positions before i).  Equivalently it
    is the length of the shortest string starting at i never seen before,
    read as "whole suffix plus one" when even the full suffix occurred.
    """

    lambdas: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.lambdas)
        if n == 0:
            raise ValueError("parse of an empty sequence is undefined")
        arr = np.asarray(self.lambdas, dtype=np.int64)
        if self.lambdas[0] != 1:
            raise ValueError("first match length must be 1 (empty past)")
        if (arr < 1).any() or (arr + np.arange(n) > n + 1).any():
            raise ValueError("match lengths violate their positional bounds")

    def total(self) -> int:
        return int(sum(self.lambdas))


def _symbol_ids(levels) -> list[int]:
    # Match lengths depend only on the equality structure, so any symbols
    # can be relabeled by first occurrence.
    ids: dict = {}
    out = []
    for v in levels:
        out.append(ids.setdefault(v, len(ids)))
    return out


def lz_parse(levels) -> LzParse:
    """Reference match-length parse (quadratic; prefer lz_parse_fast for
    long traces).

    For each position the candidate prefix is grown one symbol at a time
    and searched for in the strict past, which is as close to the
    definition as code gets.
    """
    seq = _symbol_ids(levels)
    n = len(seq)
    if n == 0:
        raise EmptySequenceError("cannot parse an empty sequence")

    lambdas = []
    if max(seq) < 256:
        buf = bytes(seq)
        for i in range(n):
            past = buf[:i]
            length = 0
            while i + length < n and past.find(buf[i : i + length + 1]) != -1:
                length += 1
            lambdas.append(length + 1)
    else:
        for i in range(n):
            length = 0
            while i + length < n and _occurs(seq, i, length + 1):
                length += 1
            lambdas.append(length + 1)
    return LzParse(tuple(lambdas))


def _occurs(seq: list[int], start: int, length: int) -> bool:
    needle = seq[start : start + length]
    for j in range(start - length + 1):
        if seq[j : j + length] == needle:
            return True
    return False


class _State:
    """Node of the suffix automaton indexing the growing past window."""

    __slots__ = ("transitions", "suffix", "max_len")

    def __init__(self, max_len: int, suffix: "_State | None"):
        self.transitions: dict = {}
        self.suffix = suffix
        self.max_len = max_len


def lz_parse_fast(levels) -> LzParse:
    """Match-length parse via an online suffix automaton.

    Bit-identical to ``lz_parse`` for every input.  At position i the
    automaton indexes exactly the factors of the strict past, so walking
    it from the root along the suffix yields the longest past match with
    no overlap bookkeeping; afterwards the automaton is extended by one
    symbol.  Expected cost is O(n log n) on stationary random sources;
    highly repetitive inputs cost O(sum of match lengths).
    """
    seq = list(levels)
    n = len(seq)
    if n == 0:
        raise EmptySequenceError("cannot parse an empty sequence")

    root = _State(0, None)
    last = root
    lambdas = [0] * n
    for i in range(n):
        node = root
        length = 0
        while i + length < n:
            nxt = node.transitions.get(seq[i + length])
            if nxt is None:
                break
            node = nxt
            length += 1
        lambdas[i] = length + 1

        c = seq[i]
        cur = _State(last.max_len + 1, None)
        p = last
        while p is not None and c not in p.transitions:
            p.transitions[c] = cur
            p = p.suffix
        if p is None:
            cur.suffix = root
        else:
            q = p.transitions[c]
            if q.max_len == p.max_len + 1:
                cur.suffix = q
            else:
                clone = _State(p.max_len + 1, q.suffix)
                clone.transitions = dict(q.transitions)
                while p is not None and p.transitions.get(c) is q:
                    p.transitions[c] = clone
                    p = p.suffix
                q.suffix = clone
                cur.suffix = clone
        last = cur
    return LzParse(tuple(lambdas))


def random_entropy(q: int) -> float:
    """Entropy in bits if all q levels were equiprobable and independent."""
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    return math.log2(q)


def shannon_entropy(dist: LevelDistribution) -> float:
    """Entropy in bits of a level distribution, with 0*log(0) read as 0."""
    p = np.asarray(dist.probabilities, dtype=np.float64)
    nz = p[p > 0]
    h = float(-(nz * np.log2(nz)).sum())
    # A uniform distribution can land a few ulp past log2(q); the true
    # value never does, so cap it rather than leak an impossible report.
    return min(h, math.log2(dist.q))


def lz_entropy_estimate(levels) -> float:
    """Entropy-rate estimate in bits per symbol from match lengths.

    Converges to the source entropy rate for long stationary ergodic
    sequences; on short traces it can undershoot noticeably (the mean
    match length carries an O(1) additive term against a log(n) signal)
    and can exceed log2(q) on noisy ones, which downstream clamps.
    """
    n = len(levels)
    if n < 2:
        raise SequenceTooShortError(f"need at least 2 symbols, got {n}")
    return n * math.log2(n) / lz_parse_fast(levels).total()


def block_entropy_rate(levels, k: int) -> float:
    """Entropy of overlapping length-k windows divided by k (bits/symbol).

    A plug-in cross-check for the match-length estimator at small k;
    meaningful only while the window alphabet stays well below n.  k=1
    reproduces the Shannon entropy of the level distribution.
    """
    n = len(levels)
    if n == 0:
        raise EmptySequenceError("cannot compute block entropy of an empty sequence")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if k > n:
        raise BlockTooLongError(f"window length {k} exceeds sequence length {n}")

    arr = np.asarray(_symbol_ids(levels), dtype=np.int64)
    base = int(arr.max()) + 1
    m = n - k + 1
    if base == 1:
        return 0.0
    if k * math.log2(base) < 62:
        codes = np.zeros(m, dtype=np.int64)
        for j in range(k):
            codes = codes * base + arr[j : j + m]
        _, counts = np.unique(codes, return_counts=True)
    else:
        seen: dict = {}
        for i in range(m):
            w = tuple(arr[i : i + k])
            seen[w] = seen.get(w, 0) + 1
        counts = np.asarray(list(seen.values()), dtype=np.int64)
    p = counts / m
    return float(-(p * np.log2(p)).sum()) / k


def entropy_report(qt: QuantizedTrace) -> EntropyReport:
    """Bundle the random, Shannon and estimated actual entropies."""
    n = len(qt.levels)
    if n == 0:
        raise EmptyTraceError("cannot analyze an empty trace")
    return EntropyReport(
        e_rand=random_entropy(qt.q),
        e_unc=shannon_entropy(level_distribution(qt)),
        e_actual=lz_entropy_estimate(qt.levels),
        n=n,
        q=qt.q,
    )
