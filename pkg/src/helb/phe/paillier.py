"""Paillier cryptosystem: additive homomorphism in Z*_{n^2}.

The generator is fixed at g = n + 1, which keeps mu well-defined and lets
encryption of the g^m factor collapse to (1 + m*n) mod n^2.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import DecryptionFailure, MessageOutOfRange
from ..numtheory import RandomSource, gen_prime, lcm, mod_inv, rand_coprime


@dataclass(frozen=True)
class PaillierPublicKey:
    n: int
    g: int

    @property
    def nsquare(self) -> int:
        return self.n * self.n


@dataclass(frozen=True)
class PaillierKeyPair:
    public: PaillierPublicKey
    lam: int
    mu: int


def _l(x: int, n: int) -> int:
    if (x - 1) % n:
        raise DecryptionFailure("value is not congruent to 1 modulo n")
    return (x - 1) // n


def keygen(bits: int, rng: RandomSource, p: int | None = None,
           q: int | None = None) -> PaillierKeyPair:
    if p is None or q is None:
        half = bits // 2
        while True:
            p = gen_prime(half, rng)
            q = gen_prime(bits - half, rng)
            if p != q and (p * q).bit_length() == bits:
                break
    n = p * q
    g = n + 1
    lam = lcm(p - 1, q - 1)
    mu = mod_inv(_l(pow(g, lam, n * n), n), n)
    return PaillierKeyPair(PaillierPublicKey(n, g), lam, mu)


def encrypt(pub: PaillierPublicKey, m: int, rng: RandomSource) -> int:
    if not 0 <= m < pub.n:
        raise MessageOutOfRange(f"message must lie in [0, n), got {m}")
    nsq = pub.nsquare
    if pub.g == pub.n + 1:
        gm = (1 + m * pub.n) % nsq
    else:
        gm = pow(pub.g, m, nsq)
    r = rand_coprime(pub.n, rng)
    return gm * pow(r, pub.n, nsq) % nsq


def decrypt(keys: PaillierKeyPair, c: int) -> int:
    n = keys.public.n
    if not 0 < c < keys.public.nsquare:
        raise DecryptionFailure("ciphertext outside Z*_{n^2}")
    return _l(pow(c, keys.lam, keys.public.nsquare), n) * keys.mu % n


def combine(pub: PaillierPublicKey, a: int, b: int) -> int:
    return a * b % pub.nsquare


def invert(pub: PaillierPublicKey, a: int) -> int:
    return mod_inv(a, pub.nsquare)


def scale(pub: PaillierPublicKey, a: int, k: int) -> int:
    return pow(a, k, pub.nsquare)


def is_zero(keys: PaillierKeyPair, c: int) -> bool:
    return decrypt(keys, c) == 0


def message_modulus(keys) -> int:
    pub = getattr(keys, "public", keys)
    return pub.n
