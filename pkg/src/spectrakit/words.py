"""Words in free and surface-group generators.

Generators are single upper-case letters; the lower-case letter is the
inverse. ``"ABab"`` is the commutator ``A B A^-1 B^-1``.
"""

from __future__ import annotations

from .exceptions import DomainError


def invert_letter(ch):
    return ch.lower() if ch.isupper() else ch.upper()


def inverse(word):
    return "".join(invert_letter(ch) for ch in reversed(word))


def free_reduce(word):
    out = []
    for ch in word:
        if out and out[-1] == invert_letter(ch):
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


def cyclic_reduce(word):
    w = free_reduce(word)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == invert_letter(w[j - 1]):
        i += 1
        j -= 1
    return w[i:j]


def rotations(word):
    return [word[i:] + word[:i] for i in range(len(word))] or [""]


def canonical_cyclic(word):
    """Lexicographically least rotation of the cyclic reduction or its inverse.

    Two words in a free group are conjugate up to inversion exactly when
    their canonical forms agree.
    """
    w = cyclic_reduce(word)
    if not w:
        return ""
    return min(rotations(w) + rotations(inverse(w)))


def primitive_root(word):
    """Return ``(root, n)`` with ``word == root * n`` and ``n`` maximal."""
    size = len(word)
    for period in range(1, size + 1):
        if size % period == 0 and word[:period] * (size // period) == word:
            return word[:period], size // period
    return word, 1


def is_proper_power(word):
    w = cyclic_reduce(word)
    return bool(w) and primitive_root(w)[1] > 1


def parse(word, alphabet):
    """Validate ``word`` against generator names; return (index, sign) pairs."""
    index = {name: i for i, name in enumerate(alphabet)}
    out = []
    for ch in word:
        if ch in index:
            out.append((index[ch], 1))
        elif ch.upper() in index and ch.islower():
            out.append((index[ch.upper()], -1))
        else:
            raise DomainError(f"letter {ch!r} not in generators {''.join(alphabet)}")
    return out


def christoffel_word(p, q, a="A", b="B"):
    """Primitive word in ``a``, ``b`` of slope ``(p, q)`` for coprime integers.

    Negative components use inverse letters; ``(1, 0) -> a`` and ``(0, 1) -> b``.
    """
    if p < 0:
        p, q = -p, -q
    if p == 0:
        q = abs(q)
    if p == 0 and q == 0:
        raise DomainError("slope (0, 0) is not a curve")
    bb = b if q >= 0 else invert_letter(b)
    q = abs(q)
    n = p + q
    letters = []
    for i in range(1, n + 1):
        letters.append(bb if (i * q) // n != ((i - 1) * q) // n else a)
    return "".join(letters)
