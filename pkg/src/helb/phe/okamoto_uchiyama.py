"""Okamoto-Uchiyama cryptosystem over n = p^2 * q.

Messages must stay below 2^(k-1) where 2^(k-1) < p, so the message width
k is published with the key.  Homomorphic results decrypt modulo p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import DecryptionFailure, InvalidOptions, MessageOutOfRange
from ..numtheory import RandomSource, gen_prime, mod_inv

# 32-bit payloads need headroom below p regardless of key size.
MIN_P_BITS = 40


@dataclass(frozen=True)
class OkamotoUchiyamaPublicKey:
    n: int
    g: int
    h: int
    msg_bits: int

    @property
    def message_space(self) -> int:
        return 1 << self.msg_bits


@dataclass(frozen=True)
class OkamotoUchiyamaKeyPair:
    public: OkamotoUchiyamaPublicKey
    p: int
    q: int


def keygen(bits: int, rng: RandomSource, p: int | None = None,
           q: int | None = None) -> OkamotoUchiyamaKeyPair:
    if p is None or q is None:
        p_bits = max(bits // 3, MIN_P_BITS)
        q_bits = max(bits - 2 * p_bits, MIN_P_BITS)
        while True:
            p = gen_prime(p_bits, rng)
            q = gen_prime(q_bits, rng)
            if p != q:
                break
    n = p * p * q
    psq = p * p
    while True:
        g = rng.randrange(2, n)
        if math.gcd(g, n) == 1 and pow(g, p - 1, psq) != 1:
            break
    h = pow(g, n, n)
    # message space [0, 2^(k-1)) with 2^(k-1) < p
    msg_bits = p.bit_length() - 1
    if (1 << msg_bits) >= p:
        msg_bits -= 1
    if msg_bits < 1:
        raise InvalidOptions(f"prime p = {p} leaves no message space")
    return OkamotoUchiyamaKeyPair(
        OkamotoUchiyamaPublicKey(n, g, h, msg_bits), p, q)


def encrypt(pub: OkamotoUchiyamaPublicKey, m: int, rng: RandomSource) -> int:
    if not 0 <= m < pub.message_space:
        raise MessageOutOfRange(
            f"message must lie in [0, 2^{pub.msg_bits}), got {m}")
    r = rng.randrange(1, pub.n)
    return pow(pub.g, m, pub.n) * pow(pub.h, r, pub.n) % pub.n


def _l(x: int, p: int) -> int:
    if (x - 1) % p:
        raise DecryptionFailure("value is not congruent to 1 modulo p")
    return (x - 1) // p


def decrypt(keys: OkamotoUchiyamaKeyPair, c: int) -> int:
    p = keys.p
    psq = p * p
    if not 0 < c < keys.public.n:
        raise DecryptionFailure("ciphertext outside Z*_n")
    num = _l(pow(c, p - 1, psq), p)
    den = _l(pow(keys.public.g, p - 1, psq), p)
    return num * mod_inv(den, p) % p


def combine(pub: OkamotoUchiyamaPublicKey, a: int, b: int) -> int:
    return a * b % pub.n


def invert(pub: OkamotoUchiyamaPublicKey, a: int) -> int:
    return mod_inv(a, pub.n)


def scale(pub: OkamotoUchiyamaPublicKey, a: int, k: int) -> int:
    return pow(a, k, pub.n)


def is_zero(keys: OkamotoUchiyamaKeyPair, c: int) -> bool:
    return decrypt(keys, c) == 0


def message_modulus(keys) -> int:
    # homomorphic arithmetic wraps modulo p, which only the key holder knows
    if not isinstance(keys, OkamotoUchiyamaKeyPair):
        raise DecryptionFailure("message modulus requires the private key")
    return keys.p
