"""Partially homomorphic schemes behind one capability interface.

Five additive schemes (add, subtract, scalar multiply) and one bitwise-XOR
scheme are dispatched by :class:`SchemeId`.  Keys are immutable dataclasses
with a ``public`` part; ciphertexts are :class:`PheCiphertext` values whose
payload is a single group element, or a tuple of per-bit elements for
Goldwasser-Micali.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from ..errors import CapabilityUnsupported, InvalidOptions, SchemeMismatch, WidthMismatch
from ..numtheory import RandomSource, rand_coprime
from . import (
    benaloh,
    damgard_jurik,
    goldwasser_micali,
    naccache_stern,
    okamoto_uchiyama,
    paillier,
)
from .benaloh import BenalohKeyPair, BenalohPublicKey
from .damgard_jurik import DamgardJurikKeyPair, DamgardJurikPublicKey
from .goldwasser_micali import GoldwasserMicaliKeyPair, GoldwasserMicaliPublicKey
from .naccache_stern import NaccacheSternKeyPair, NaccacheSternPublicKey
from .okamoto_uchiyama import OkamotoUchiyamaKeyPair, OkamotoUchiyamaPublicKey
from .paillier import PaillierKeyPair, PaillierPublicKey


class SchemeId(str, enum.Enum):
    PAILLIER = "paillier"
    DAMGARD_JURIK = "damgard_jurik"
    OKAMOTO_UCHIYAMA = "okamoto_uchiyama"
    BENALOH = "benaloh"
    NACCACHE_STERN = "naccache_stern"
    GOLDWASSER_MICALI = "goldwasser_micali"

    def __str__(self) -> str:  # pragma: no cover
        return self.value


ADDITIVE_CAPS = frozenset({"add", "sub", "scalar_mul"})
XOR_CAPS = frozenset({"xor"})

CAPABILITIES: dict[SchemeId, frozenset[str]] = {
    SchemeId.PAILLIER: ADDITIVE_CAPS,
    SchemeId.DAMGARD_JURIK: ADDITIVE_CAPS,
    SchemeId.OKAMOTO_UCHIYAMA: ADDITIVE_CAPS,
    SchemeId.BENALOH: ADDITIVE_CAPS,
    SchemeId.NACCACHE_STERN: ADDITIVE_CAPS,
    SchemeId.GOLDWASSER_MICALI: XOR_CAPS,
}

_MODULES = {
    SchemeId.PAILLIER: paillier,
    SchemeId.DAMGARD_JURIK: damgard_jurik,
    SchemeId.OKAMOTO_UCHIYAMA: okamoto_uchiyama,
    SchemeId.BENALOH: benaloh,
    SchemeId.NACCACHE_STERN: naccache_stern,
    SchemeId.GOLDWASSER_MICALI: goldwasser_micali,
}

_SCHEME_OF_TYPE = {
    PaillierPublicKey: SchemeId.PAILLIER,
    PaillierKeyPair: SchemeId.PAILLIER,
    DamgardJurikPublicKey: SchemeId.DAMGARD_JURIK,
    DamgardJurikKeyPair: SchemeId.DAMGARD_JURIK,
    OkamotoUchiyamaPublicKey: SchemeId.OKAMOTO_UCHIYAMA,
    OkamotoUchiyamaKeyPair: SchemeId.OKAMOTO_UCHIYAMA,
    BenalohPublicKey: SchemeId.BENALOH,
    BenalohKeyPair: SchemeId.BENALOH,
    NaccacheSternPublicKey: SchemeId.NACCACHE_STERN,
    NaccacheSternKeyPair: SchemeId.NACCACHE_STERN,
    GoldwasserMicaliPublicKey: SchemeId.GOLDWASSER_MICALI,
    GoldwasserMicaliKeyPair: SchemeId.GOLDWASSER_MICALI,
}

MIN_CRYPTO_BITS = 512
MIN_TEST_BITS = 16


@dataclass(frozen=True)
class PheCiphertext:
    scheme: SchemeId
    payload: int | tuple[int, ...]

    @property
    def width(self) -> int | None:
        """Bit width for bitwise payloads, None for single-element ones."""
        if isinstance(self.payload, tuple):
            return len(self.payload)
        return None


def scheme_of(keys) -> SchemeId:
    """SchemeId of a key pair or public key object."""
    try:
        return _SCHEME_OF_TYPE[type(keys)]
    except KeyError:
        raise SchemeMismatch(f"not a scheme key object: {type(keys).__name__}") from None


def public_part(keys):
    return getattr(keys, "public", keys)


def keygen(scheme: SchemeId, security_bits: int, rng: RandomSource, *,
           test_mode: bool = False, **opts):
    """Generate a key pair for `scheme`.

    Production keys need at least 512-bit moduli and a cryptographic rng;
    `test_mode` lowers the floor to 16 bits and permits seeded rngs (and
    scheme-specific overrides such as forced primes).
    """
    scheme = SchemeId(scheme)
    if test_mode:
        if security_bits < MIN_TEST_BITS:
            raise InvalidOptions(
                f"security_bits must be >= {MIN_TEST_BITS} in test mode")
    else:
        if security_bits < MIN_CRYPTO_BITS:
            raise InvalidOptions(
                f"security_bits must be >= {MIN_CRYPTO_BITS}; "
                "pass test_mode=True for toy keys")
        if rng.is_seeded:
            raise InvalidOptions(
                "seeded randomness is refused for key generation "
                "unless test_mode is set")
    return _MODULES[scheme].keygen(security_bits, rng, **opts)


def encrypt(keys, m: int, rng: RandomSource, *, width: int | None = None) -> PheCiphertext:
    """Encrypt `m` under the public part of `keys`."""
    scheme = scheme_of(keys)
    pub = public_part(keys)
    mod = _MODULES[scheme]
    if scheme is SchemeId.GOLDWASSER_MICALI:
        if width is None:
            width = goldwasser_micali.DEFAULT_WIDTH
        payload = mod.encrypt(pub, m, rng, width)
    else:
        if width is not None:
            raise InvalidOptions("width applies only to Goldwasser-Micali")
        payload = mod.encrypt(pub, m, rng)
    return PheCiphertext(scheme, payload)


def _require_pair(keys) -> None:
    if not hasattr(keys, "public"):
        raise SchemeMismatch("this operation needs the full key pair, "
                             "not just the public key")


def decrypt(keys, ct: PheCiphertext) -> int:
    scheme = scheme_of(keys)
    _require_pair(keys)
    if scheme is not ct.scheme:
        raise SchemeMismatch(f"{scheme} keys cannot decrypt a {ct.scheme} ciphertext")
    return _MODULES[scheme].decrypt(keys, ct.payload)


def _require(scheme: SchemeId, cap: str) -> None:
    if cap not in CAPABILITIES[scheme]:
        raise CapabilityUnsupported(f"{scheme} does not support {cap}")


def _check_pair(keys, ct1: PheCiphertext, ct2: PheCiphertext) -> SchemeId:
    scheme = scheme_of(keys)
    if ct1.scheme is not scheme or ct2.scheme is not scheme:
        raise SchemeMismatch("ciphertexts do not match the key scheme")
    return scheme


def add_encrypted(keys, ct1: PheCiphertext, ct2: PheCiphertext) -> PheCiphertext:
    """Ciphertext of m1 + m2 (mod the scheme's message modulus)."""
    scheme = _check_pair(keys, ct1, ct2)
    _require(scheme, "add")
    pub = public_part(keys)
    return PheCiphertext(scheme, _MODULES[scheme].combine(pub, ct1.payload, ct2.payload))


def sub_encrypted(keys, ct1: PheCiphertext, ct2: PheCiphertext) -> PheCiphertext:
    """Ciphertext of m1 - m2, via the group inverse of ct2."""
    scheme = _check_pair(keys, ct1, ct2)
    _require(scheme, "sub")
    pub = public_part(keys)
    mod = _MODULES[scheme]
    return PheCiphertext(
        scheme, mod.combine(pub, ct1.payload, mod.invert(pub, ct2.payload)))


def scalar_mul(keys, ct: PheCiphertext, k: int) -> PheCiphertext:
    """Ciphertext of k * m."""
    scheme = scheme_of(keys)
    if ct.scheme is not scheme:
        raise SchemeMismatch("ciphertext does not match the key scheme")
    _require(scheme, "scalar_mul")
    return PheCiphertext(
        scheme, _MODULES[scheme].scale(public_part(keys), ct.payload, k))


def xor_encrypted(keys, ct1: PheCiphertext, ct2: PheCiphertext) -> PheCiphertext:
    """Bitwise XOR of two equal-width Goldwasser-Micali ciphertexts."""
    scheme = _check_pair(keys, ct1, ct2)
    _require(scheme, "xor")
    if ct1.width != ct2.width:
        raise WidthMismatch(f"widths differ: {ct1.width} vs {ct2.width}")
    pub = public_part(keys)
    return PheCiphertext(scheme, goldwasser_micali.combine(pub, ct1.payload, ct2.payload))


def is_zero(keys, ct: PheCiphertext) -> bool:
    """True iff the ciphertext decrypts to zero.

    Uses per-scheme shortcuts where full decryption would be wasteful or
    infeasible (Benaloh order test, Goldwasser-Micali residue test).
    """
    scheme = scheme_of(keys)
    _require_pair(keys)
    if ct.scheme is not scheme:
        raise SchemeMismatch("ciphertext does not match the key scheme")
    return _MODULES[scheme].is_zero(keys, ct.payload)


def message_modulus(keys) -> int | None:
    """Modulus of the additive message space, or None when not a single value."""
    return _MODULES[scheme_of(keys)].message_modulus(keys)


def blinding_factor(keys, rng: RandomSource) -> int:
    """Fresh unit of the message space, suitable for :func:`blind`.

    Only sound for schemes whose message space is a single modulus, since
    multiplying by a unit must map zero, and only zero, to zero.
    """
    scheme = scheme_of(keys)
    _require(scheme, "scalar_mul")
    modulus = _MODULES[scheme].message_modulus(keys)
    if modulus is None:
        raise CapabilityUnsupported(
            f"{scheme} has no single message modulus; blinding would not "
            "preserve the zero test")
    return rand_coprime(modulus, rng)


def blind(keys, ct: PheCiphertext, rng: RandomSource) -> PheCiphertext:
    """Randomize a difference ciphertext before a zero test.

    Multiplies the plaintext by a fresh unit, so a zero stays zero while a
    non-zero difference decrypts to an unrelated value.
    """
    return scalar_mul(keys, ct, blinding_factor(keys, rng))
