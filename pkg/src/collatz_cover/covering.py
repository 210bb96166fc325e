"""Residue classes mod 18 and the covering system derived from them.

Every odd integer lies in exactly one class of the reordered residue sequence
S = (1, 5, 3, 13, 17, 15, 7, 11, 9); the step d -> 4d+1 advances the class
index cyclically through S. Pairing the class with the 2-adic valuation m of
3d+1 pins d into a single arithmetic progression

    d = 18*2^m * n + offset,   n >= 0,

whose image under the compressed Collatz step is the progression 54n + a with
a odd. Rather than hard-coding the 162 progressions for m <= 18, this module
derives each one by the Chinese Remainder Theorem, for any m.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from functools import lru_cache
from time import perf_counter

import numpy as np

from .arith import _require_odd, two_adic_valuation
from .reports import Counterexample, Deferred, VerifyReport, build_report

#: The reordering of the odd residues mod 18 that makes d -> 4d+1 advance the
#: class index by one (wrapping 9 -> 1).
RESIDUE_ORDER = (1, 5, 3, 13, 17, 15, 7, 11, 9)

_CLASS_OF = {r: i for i, r in enumerate(RESIDUE_ORDER, start=1)}

#: Largest modulus cover_audit will push through the vectorized path; beyond
#: this, int64 would overflow and the pure-Python scan takes over.
_VECTOR_LIMIT = 1 << 62

CSV_HEADER = ("i", "r", "m", "v_offset", "d_offset", "d_modulus",
              "even_offset", "even_modulus", "next_offset")


def residue_class(d: int) -> int:
    """Class index i in 1..9 with d congruent to RESIDUE_ORDER[i-1] mod 18."""
    _require_odd(d)
    return _CLASS_OF[d % 18]


@dataclass(frozen=True)
class Profile:
    """One (class, valuation) progression triple.

    Members are d_modulus*n + d_offset; tripling-plus-one lands them on
    even_modulus*n + even_offset, and dividing out 2^m lands on
    54n + next_offset.
    """

    class_index: int
    residue: int
    m: int
    v_offset: int
    d_offset: int
    d_modulus: int
    even_offset: int
    even_modulus: int
    next_offset: int
    next_modulus: int = 54

    def member(self, n: int) -> int:
        return self.d_modulus * n + self.d_offset

    def next_value(self, n: int) -> int:
        return self.next_modulus * n + self.next_offset

    def contains(self, d: int) -> bool:
        return d % self.d_modulus == self.d_offset

    def row_dict(self) -> dict:
        return {
            "i": self.class_index,
            "r": self.residue,
            "m": self.m,
            "v_offset": self.v_offset,
            "d_offset": self.d_offset,
            "d_modulus": self.d_modulus,
            "even_offset": self.even_offset,
            "even_modulus": self.even_modulus,
            "next_offset": self.next_offset,
        }


@lru_cache(maxsize=None)
def derive_profile(i: int, m: int) -> Profile:
    """Construct the unique progression of class i needing exactly m halvings.

    Solves x = S[i] (mod 18) together with 3x+1 = 2^m (mod 2^(m+1)); both
    congruences already force x odd, so they reduce to the coprime pair
    x = S[i] (mod 9), x = (2^m - 1)/3 (mod 2^(m+1)) and CRT gives one
    solution in [0, 18*2^m).
    """
    if not 1 <= i <= 9:
        raise ValueError(f"class index must be in 1..9, got {i}")
    if m < 1:
        raise ValueError(f"exponent must be >= 1, got {m}")
    r = RESIDUE_ORDER[i - 1]
    two = 1 << (m + 1)
    t = ((1 << m) - 1) * pow(3, -1, two) % two
    k = (r - t) * pow(two, -1, 9) % 9
    d_offset = t + two * k
    d_modulus = 9 * two  # 18 * 2^m
    assert 0 <= d_offset < d_modulus and d_offset % 18 == r
    next_offset, rem = divmod(3 * d_offset + 1, 1 << m)
    assert rem == 0 and next_offset & 1 and next_offset < 54
    return Profile(
        class_index=i,
        residue=r,
        m=m,
        v_offset=(d_offset - r) // 18,
        d_offset=d_offset,
        d_modulus=d_modulus,
        even_offset=3 * d_offset + 1,
        even_modulus=3 * d_modulus,
        next_offset=next_offset,
    )


def classify(d: int) -> tuple[Profile, int]:
    """Locate odd d in its unique progression: returns (profile, n) with
    d == profile.d_modulus * n + profile.d_offset exactly."""
    i = residue_class(d)
    m = two_adic_valuation(3 * d + 1)[0]
    profile = derive_profile(i, m)
    n, rem = divmod(d - profile.d_offset, profile.d_modulus)
    assert rem == 0 and n >= 0
    return profile, n


@dataclass(frozen=True)
class ProfileTable:
    """All 9*max_m progressions, ordered by class then exponent. Immutable."""

    max_m: int
    rows: tuple[Profile, ...]

    @classmethod
    def build(cls, max_m: int) -> "ProfileTable":
        if max_m < 1:
            raise ValueError(f"max_m must be >= 1, got {max_m}")
        rows = tuple(derive_profile(i, m)
                     for i in range(1, 10) for m in range(1, max_m + 1))
        return cls(max_m, rows)

    def row(self, i: int, m: int) -> Profile:
        if not (1 <= i <= 9 and 1 <= m <= self.max_m):
            raise KeyError((i, m))
        return self.rows[(i - 1) * self.max_m + (m - 1)]

    def column(self, i: int) -> tuple[Profile, ...]:
        return self.rows[(i - 1) * self.max_m: i * self.max_m]

    def to_csv(self, sink) -> None:
        writer = csv.writer(sink, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for p in self.rows:
            row = p.row_dict()
            writer.writerow([row[field] for field in CSV_HEADER])

    def to_json(self) -> str:
        return json.dumps([p.row_dict() for p in self.rows], indent=2) + "\n"


def cyclic_recurrence_check(i: int, d: int) -> bool:
    """Does 4d+1 fall in the class that follows i in the cycle S?

    d must actually lie in class i; a violated precondition is an error,
    not a False result.
    """
    if not 1 <= i <= 9:
        raise ValueError(f"class index must be in 1..9, got {i}")
    _require_odd(d)
    if d % 18 != RESIDUE_ORDER[i - 1]:
        raise ValueError(
            f"{d} is not in residue class [{RESIDUE_ORDER[i - 1]}] mod 18")
    successor = RESIDUE_ORDER[i % 9]
    return (4 * d + 1) % 18 == successor


def digital_root(x: int) -> int:
    """Iterated decimal digit sum of x >= 1 (computed by actually summing
    digits, not by reduction mod 9)."""
    if x < 1:
        raise ValueError(f"need a positive integer, got {x}")
    while x > 9:
        x = sum(int(c) for c in str(x))
    return x


def digit_root_class(d: int) -> int:
    """Classify odd d by digit sums alone.

    The digital root determines d mod 9; of the two lifts {root, root + 9}
    mod 18, exactly one is odd, and its index in S is the class. Agrees with
    residue_class on every odd integer.
    """
    _require_odd(d)
    root = digital_root(d)
    residue = root if root & 1 else root + 9
    return _CLASS_OF[residue]


def _membership_counts_vector(bound: int, profiles) -> "np.ndarray":
    odds = np.arange(1, bound + 1, 2, dtype=np.int64)
    counts = np.zeros(odds.shape, dtype=np.int32)
    for p in profiles:
        counts += odds % p.d_modulus == p.d_offset
    return counts


def _membership_counts_python(bound: int, profiles) -> list[int]:
    mods = [(p.d_modulus, p.d_offset) for p in profiles]
    return [sum(d % modulus == offset for modulus, offset in mods)
            for d in range(1, bound + 1, 2)]


def cover_audit(bound: int, max_m: int) -> VerifyReport:
    """Check the exactly-once cover over all odd d <= bound.

    Counts, for each odd d, how many of the 9*max_m progressions contain it.
    Multiple matches are failures. Zero matches are legitimate only when the
    valuation of 3d+1 exceeds max_m (the progression exists in a deeper row);
    those are reported as deferred, anything else as a failure.
    """
    start = perf_counter()
    if bound < 3:
        raise ValueError(f"bound must be >= 3, got {bound}")
    if max_m < 1:
        raise ValueError(f"max_m must be >= 1, got {max_m}")
    profiles = [derive_profile(i, m)
                for i in range(1, 10) for m in range(1, max_m + 1)]
    if bound < _VECTOR_LIMIT and profiles[-1].d_modulus < _VECTOR_LIMIT:
        counts = _membership_counts_vector(bound, profiles)
    else:
        counts = _membership_counts_python(bound, profiles)

    counterexamples = []
    deferred = []
    matched_once = 0
    multiply_matched = []
    unmatched = []
    for index, count in enumerate(counts):
        if count == 1:
            matched_once += 1
            continue
        d = 2 * index + 1
        if count > 1:
            multiply_matched.append(d)
            counterexamples.append(Counterexample(
                d, "membership in exactly one progression",
                f"{int(count)} progressions"))
        else:
            unmatched.append(d)
            m = two_adic_valuation(3 * d + 1)[0]
            if m <= max_m:
                counterexamples.append(Counterexample(
                    d, f"membership in the class row for m={m}",
                    "no progression matched"))
            else:
                deferred.append(Deferred(
                    d, f"valuation {m} exceeds max_m {max_m}"))
    return build_report(
        "cover-audit",
        {"bound": bound, "max_m": max_m},
        counterexamples=counterexamples,
        deferred=deferred,
        items_checked=(bound + 1) // 2,
        elapsed_s=perf_counter() - start,
        details={
            "matched_once": matched_once,
            "multiply_matched": multiply_matched,
            "unmatched": unmatched,
        },
    )
