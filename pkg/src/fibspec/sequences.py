"""Exact generalized Fibonacci sequences f^(n) and their norm identities.

f_1 = ... = f_{n+1} = 1 and f_k = f_{k-1} + f_{k-n-1} for k > n + 1.
"""
from __future__ import annotations

import math
from functools import lru_cache

from .errors import DomainError


class GenFibSequence:
    """Memoized f^(n); indices are 1-based.

    The prefix cache grows on demand, so share an instance across threads
    only behind a lock.
    """

    def __init__(self, n: int):
        if n < 1:
            raise DomainError(f"order n must be >= 1, got {n}")
        self.n = n
        self._terms = [1] * (n + 1)

    def __len__(self):
        return len(self._terms)

    def __getitem__(self, k: int) -> int:
        return self.term(k)

    def term(self, k: int) -> int:
        if k < 1:
            raise DomainError(f"index k must be >= 1, got {k}")
        terms, lag = self._terms, self.n + 1
        while len(terms) < k:
            terms.append(terms[-1] + terms[-lag])
        return terms[k - 1]

    def terms(self, k: int) -> list[int]:
        """f_1 .. f_k."""
        self.term(k)
        return self._terms[:k]


@lru_cache(maxsize=64)
def sequence(n: int) -> GenFibSequence:
    return GenFibSequence(n)


def term(n: int, k: int) -> int:
    return sequence(n).term(k)


def prefix_sum_identity(seq: GenFibSequence, k: int) -> tuple[int, int]:
    """(f_1 + ... + f_k, f_{k+n+1} - 1); the two are always equal."""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    return sum(seq.terms(k)), seq.term(k + seq.n + 1) - 1


def norm_of_power(n: int, k: int) -> int:
    """Exact l1 norm of F_n^k, i.e. f_{k+n+1}.

    Only for k > n, where the block form of F_n^k holds; smaller powers
    go through operators.exact_power_norm.
    """
    if k <= n:
        raise DomainError(f"closed form needs k > n (got n={n}, k={k})")
    return term(n, k + n + 1)


def ratio_limit_estimate(n: int, m: int) -> float:
    """f_{m+1} / f_m, correctly rounded from the exact integers."""
    if m < 2:
        raise DomainError(f"m must be >= 2, got {m}")
    seq = sequence(n)
    return seq.term(m + 1) / seq.term(m)


def growth_root_estimate(n: int, k: int) -> float:
    """(f_{k+n+1})^(1/k), i.e. ||F_n^k||_1^(1/k), evaluated in the log domain."""
    if k <= n:
        raise DomainError(f"needs k > n (got n={n}, k={k})")
    return math.exp(math.log(term(n, k + n + 1)) / k)
