"""Small integer helpers shared across the package."""

from __future__ import annotations

import math
from functools import reduce

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for b in _MR_BASES:
        if n % b == 0:
            return n == b
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorint(n: int) -> dict[int, int]:
    """Prime factorization by trial division (inputs here stay small)."""
    if n < 1:
        raise ValueError("factorint needs a positive integer")
    out: dict[int, int] = {}
    for d in (2, 3):
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
    d = 5
    while d * d <= n:
        for e in (d, d + 2):
            while n % e == 0:
                out[e] = out.get(e, 0) + 1
                n //= e
        d += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_factors(n: int) -> list[int]:
    return sorted(factorint(n))


def divisors(n: int) -> list[int]:
    divs = [1]
    for prime, e in factorint(n).items():
        divs = [d * prime**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def lcm(*args: int) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), args, 1)


def totient(n: int) -> int:
    out = n
    for prime in factorint(n):
        out = out // prime * (prime - 1)
    return out
