"""Goldwasser-Micali cryptosystem: probabilistic bitwise encryption.

Bit 0 encrypts to a random quadratic residue mod n, bit 1 to a
pseudosquare multiple, and multiplying ciphertexts XORs the bits.  A
message is carried as one ciphertext per bit, most significant first.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import DecryptionFailure, MessageOutOfRange
from ..numtheory import RandomSource, gen_prime, jacobi, rand_coprime

DEFAULT_WIDTH = 32


@dataclass(frozen=True)
class GoldwasserMicaliPublicKey:
    n: int
    a: int


@dataclass(frozen=True)
class GoldwasserMicaliKeyPair:
    public: GoldwasserMicaliPublicKey
    p: int
    q: int


def keygen(bits: int, rng: RandomSource, p: int | None = None,
           q: int | None = None) -> GoldwasserMicaliKeyPair:
    if p is None or q is None:
        half = bits // 2
        while True:
            p = gen_prime(half, rng)
            q = gen_prime(bits - half, rng)
            if p != q:
                break
    n = p * q
    while True:
        a = rng.randrange(2, n)
        if jacobi(a % p, p) == -1 and jacobi(a % q, q) == -1:
            break
    return GoldwasserMicaliKeyPair(GoldwasserMicaliPublicKey(n, a), p, q)


def encrypt(pub: GoldwasserMicaliPublicKey, m: int, rng: RandomSource,
            width: int = DEFAULT_WIDTH) -> tuple[int, ...]:
    if width < 1:
        raise MessageOutOfRange(f"width must be >= 1, got {width}")
    if not 0 <= m < (1 << width):
        raise MessageOutOfRange(f"message must fit in {width} bits, got {m}")
    out = []
    for i in reversed(range(width)):
        r = rand_coprime(pub.n, rng)
        c = r * r % pub.n
        if (m >> i) & 1:
            c = c * pub.a % pub.n
        out.append(c)
    return tuple(out)


def _decrypt_bit(keys: GoldwasserMicaliKeyPair, c: int) -> int:
    sym = jacobi(c % keys.p, keys.p)
    if sym == 0:
        raise DecryptionFailure("ciphertext shares a factor with the modulus")
    return 0 if sym == 1 else 1


def decrypt(keys: GoldwasserMicaliKeyPair, payload: tuple[int, ...]) -> int:
    m = 0
    for c in payload:
        m = (m << 1) | _decrypt_bit(keys, c)
    return m


def combine(pub: GoldwasserMicaliPublicKey, a: tuple[int, ...],
            b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x * y % pub.n for x, y in zip(a, b))


def is_zero(keys: GoldwasserMicaliKeyPair, payload: tuple[int, ...]) -> bool:
    return all(_decrypt_bit(keys, c) == 0 for c in payload)


def message_modulus(keys) -> None:
    return None
