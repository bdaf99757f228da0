"""Lower-half sequences and the color bounds they induce.

The lower half of an odd integer o = 2k+1 is k; for an even integer it is
the ordinary half.  Iterating the lower half from an odd n > 4 until the
first value in {2, 3, 4} gives the sequence of lower halves of n; its
length l_n and tail t_n control how far a colored twist region can be
compressed.  For a prime p > 7 the resulting bound on the number of colors
needed for a nontrivial p-coloring of the (2,p) torus knot is t_p + 2*l_p - 1,
which never exceeds 2*log2(p-1) - 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

TERMINAL = frozenset({2, 3, 4})

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; exact for n < 3.3e24 with these witnesses."""
    if n < 2:
        return False
    for w in _MR_WITNESSES:
        if n % w == 0:
            return n == w
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for w in _MR_WITNESSES:
        x = pow(w, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_in_range(lo: int, hi: int) -> list[int]:
    """Primes p with lo <= p <= hi, by sieve."""
    if hi < 2:
        return []
    import numpy as np

    sieve = np.ones(hi + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(hi**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return [int(p) for p in np.nonzero(sieve)[0] if p >= lo]


def lower_half(o: int) -> int:
    """lh(2k+1) = k; lh(2k) = k.  Defined for o >= 2."""
    if o < 2:
        raise ValueError(f"lower half needs an integer >= 2, got {o}")
    return o // 2


@dataclass(frozen=True)
class LowerHalfSequence:
    """Iterates of the lower half of ``source``, stopping in {2, 3, 4}."""

    source: int
    terms: tuple[int, ...]
    length: int
    tail: int

    def __post_init__(self) -> None:
        assert self.length == len(self.terms)
        assert self.tail == self.terms[-1]
        assert self.tail in TERMINAL
        assert all(t not in TERMINAL for t in self.terms[:-1])


def lh_sequence(n: int) -> LowerHalfSequence:
    """Sequence of lower halves of an odd integer n > 4."""
    if n <= 4:
        raise ValueError(f"sequence of lower halves needs n > 4, got {n}")
    if n % 2 == 0:
        raise ValueError(f"sequence of lower halves is defined for odd n, got {n}")
    terms = [lower_half(n)]
    while terms[-1] not in TERMINAL:
        terms.append(lower_half(terms[-1]))
    return LowerHalfSequence(n, tuple(terms), len(terms), terms[-1])


@dataclass(frozen=True)
class TwoAdicExpansion:
    """Binary expansion n = 2^e1 + ... + 2^eN + 1 with e1 > ... > eN > 0.

    ``gaps`` holds s_i = e_i - e_{i+1} (and s_N = e_N), so the exponents are
    recovered as suffix sums of the gaps.
    """

    source: int
    exponents: tuple[int, ...]
    term_count: int
    gaps: tuple[int, ...]

    def __post_init__(self) -> None:
        assert self.term_count == len(self.exponents)
        assert sum(1 << e for e in self.exponents) + 1 == self.source
        assert all(a > b for a, b in zip(self.exponents, self.exponents[1:]))
        suffix = 0
        for e, s in zip(reversed(self.exponents), reversed(self.gaps)):
            suffix += s
            assert e == suffix


def two_adic_expansion(n: int) -> TwoAdicExpansion:
    """Decreasing binary exponents of n - 1, for odd n >= 3."""
    if n < 3 or n % 2 == 0:
        raise ValueError(f"expansion needs an odd integer >= 3, got {n}")
    m = n - 1
    exponents = []
    while m:
        e = m.bit_length() - 1
        exponents.append(e)
        m -= 1 << e
    exps = tuple(exponents)
    gaps = tuple(
        exps[i] - exps[i + 1] if i + 1 < len(exps) else exps[i]
        for i in range(len(exps))
    )
    return TwoAdicExpansion(n, exps, len(exps), gaps)


def fast_length_tail(n: int) -> tuple[int, int]:
    """(l_n, t_n) from the two largest binary exponents of n - 1.

    With n - 1 = 2^e1 + 2^e2 + ... (e1 > e2): gap e1 - e2 = 1 gives
    (e1 - 1, 3); gap 2 gives (e1 - 1, 2); a larger gap, or a single term,
    gives (e1 - 2, 4).  Agrees with lh_sequence for every odd n >= 9; for
    n in {5, 7} the case analysis breaks down, so iterate instead.
    """
    if n < 9 or n % 2 == 0:
        raise ValueError(f"fast length/tail needs an odd integer >= 9, got {n}")
    m = n - 1
    e1 = m.bit_length() - 1
    rest = m - (1 << e1)
    if rest == 0:
        return e1 - 2, 4
    e2 = rest.bit_length() - 1
    gap = e1 - e2
    if gap == 1:
        return e1 - 1, 3
    if gap == 2:
        return e1 - 1, 2
    return e1 - 2, 4


def _require_bound_prime(p: int) -> None:
    if p <= 7:
        raise ValueError(
            f"the twist-compression bound applies to primes > 7; "
            f"minimum-color values for p = {p} are tabulated, not bounded"
        )
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


def teneva_bound(p: int) -> int:
    """Upper bound t_p + 2*l_p - 1 on colors needed for T(2,p) mod p, p > 7."""
    _require_bound_prime(p)
    l, t = fast_length_tail(p)
    return t + 2 * l - 1


def log_bound(p: int) -> float:
    """The weaker closed-form bound 2*log2(p-1) - 1, for primes p > 7."""
    _require_bound_prime(p)
    value = 2 * math.log2(p - 1) - 1
    l, t = fast_length_tail(p)
    # Integer-exact form of t + 2l - 1 <= 2*log2(p-1) - 1.
    assert (1 << (t + 2 * l)) <= (p - 1) ** 2
    return value


@dataclass(frozen=True)
class BoundReport:
    """Both bounds for one prime, with exact rational ratio bookkeeping."""

    p: int
    length: int
    tail: int
    teneva_bound: int
    log_bound: float
    exact_ratio: Fraction
    ratio_envelope: Fraction

    def __post_init__(self) -> None:
        assert self.teneva_bound <= self.log_bound + 1e-12
        assert self.exact_ratio < self.ratio_envelope


def envelope(length: int) -> Fraction:
    """f(l) = (1 + l) / 2^l, strictly decreasing for l > 1."""
    return Fraction(1 + length, 1 << length)


def ratio_report(p: int) -> BoundReport:
    """Bound report for a prime p > 7.

    Certifies the case-wise rational bracket around (t_p + 2 l_p - 1)/p: with
    g = e1 - e2 the bracket is

        g = 1:  (2+2l)/2^(2+l) < ratio < (2+2l)/2^(1+l)
        g = 2:  (1+2l)/2^(2+l) < ratio < (1+2l)/2^(1+l)
        else:   (3+2l)/2^(3+l) < ratio < (3+2l)/2^(2+l)

    and each upper end is below the envelope (1+l)/2^l.
    """
    _require_bound_prime(p)
    l, t = fast_length_tail(p)
    bound = t + 2 * l - 1
    ratio = Fraction(bound, p)
    if t == 3:
        lo, hi = Fraction(2 + 2 * l, 1 << (l + 2)), Fraction(2 + 2 * l, 1 << (l + 1))
    elif t == 2:
        lo, hi = Fraction(1 + 2 * l, 1 << (l + 2)), Fraction(1 + 2 * l, 1 << (l + 1))
    else:
        lo, hi = Fraction(3 + 2 * l, 1 << (l + 3)), Fraction(3 + 2 * l, 1 << (l + 2))
    env = envelope(l)
    assert lo < ratio < hi <= env
    return BoundReport(p, l, t, bound, log_bound(p), ratio, env)
