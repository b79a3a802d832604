"""Numeric pair, tuple and finite-sequence codes.

The pairing function is the diagonal bijection N x N -> N,

    pair(m, n) = (m + n)(m + n + 1) / 2 + m,

so every natural number decodes to exactly one pair.  Tuples are
right-nested pairs with the singleton convention tuple([a]) = a, and
sequences are length-prefixed tuples.  All arithmetic is arbitrary
precision: codes grow quadratically and must never wrap.
"""

from math import isqrt


def pair(m: int, n: int) -> int:
    if m < 0 or n < 0:
        raise ValueError("pair is defined on naturals only")
    s = m + n
    return s * (s + 1) // 2 + m


def unpair(k: int) -> tuple[int, int]:
    if k < 0:
        raise ValueError("unpair is defined on naturals only")
    # largest diagonal s with s(s+1)/2 <= k
    s = (isqrt(8 * k + 1) - 1) // 2
    m = k - s * (s + 1) // 2
    return m, s - m


def tuple_code(xs: list[int]) -> int:
    """Right-nested pair code of a non-empty list; a singleton codes itself."""
    if not xs:
        raise ValueError("tuple_code requires a non-empty list")
    code = xs[-1]
    for x in reversed(xs[:-1]):
        code = pair(x, code)
    return code


def tuple_decode(k: int, arity: int) -> list[int]:
    """Inverse of tuple_code at a known arity."""
    if arity < 1:
        raise ValueError("arity must be positive")
    out = []
    for _ in range(arity - 1):
        x, k = unpair(k)
        out.append(x)
    out.append(k)
    return out


def seq_encode(xs: list[int]) -> int:
    """Length-prefixed sequence code; seq_encode([]) = pair(0, 0) = 0."""
    if not xs:
        return pair(0, 0)
    return pair(len(xs), tuple_code(xs))


def seq_decode(k: int) -> list[int]:
    """Total inverse: every natural decodes to some finite sequence.

    The claimed length is the first pair component, which is O(sqrt(k)),
    so decoding always terminates.
    """
    n, body = unpair(k)
    if n == 0:
        return []
    return tuple_decode(body, n)
