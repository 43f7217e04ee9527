"""IPv4/CIDR handling, encrypted blacklist stores, and the match protocols.

Addresses are plain 32-bit integers (big-endian octet packing, validated
at parse time).  A store groups ciphertexts of masked network addresses by
prefix length; matching masks the target with each group's subnet mask,
encrypts it once per group, and runs either the subtraction protocol
(additive schemes and the lattice backend) or the XOR protocol
(Goldwasser-Micali), deciding membership with a zero test per entry.
"""

from __future__ import annotations

import ipaddress
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import bfv, phe
from .errors import (
    DecryptionFailure,
    HelbError,
    InvalidAddress,
    InvalidOptions,
    InvalidPrefix,
    MessageOutOfRange,
    SchemeMismatch,
)
from .numtheory import RandomSource
from .phe import SchemeId

BFV_SCHEME = "bfv"
GM_WIDTH = 32
_MAX_ADDR = 0xFFFFFFFF


def parse_ipv4(text: str) -> int:
    """Dotted-quad string to a 32-bit integer, first octet most significant."""
    try:
        return int(ipaddress.IPv4Address(text))
    except ipaddress.AddressValueError as exc:
        raise InvalidAddress(f"invalid IPv4 address {text!r}: {exc}") from None


def format_ipv4(value: int) -> str:
    if not 0 <= value <= _MAX_ADDR:
        raise InvalidAddress(f"address value out of range: {value}")
    return str(ipaddress.IPv4Address(value))


def prefix_to_mask(prefix_len: int) -> int:
    """Subnet mask with the top `prefix_len` bits set."""
    if not 0 <= prefix_len <= 32:
        raise InvalidPrefix(f"prefix length must be in [0, 32], got {prefix_len}")
    return (_MAX_ADDR << (32 - prefix_len)) & _MAX_ADDR


@dataclass(frozen=True)
class CidrEntry:
    """A network in CIDR form, normalized so host bits are clear."""

    network: int
    prefix_len: int
    host_bits_cleared: bool = field(default=False, compare=False)


def parse_cidr(text: str) -> CidrEntry:
    """Parse "a.b.c.d/p", masking away any set host bits (flagged, not fatal)."""
    addr, sep, prefix = text.strip().partition("/")
    if not sep:
        raise InvalidPrefix(f"missing '/prefix' in {text!r}")
    value = parse_ipv4(addr)
    try:
        prefix_len = int(prefix)
    except ValueError:
        raise InvalidPrefix(f"prefix is not an integer in {text!r}") from None
    masked = value & prefix_to_mask(prefix_len)
    return CidrEntry(masked, prefix_len, masked != value)


def load_cidr_file(path) -> list[CidrEntry]:
    """Read one CIDR per line; '#' starts a comment, blank lines are skipped."""
    entries = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                entries.append(parse_cidr(line))
            except HelbError as exc:
                raise type(exc)(f"{path}: line {lineno}: {exc}") from None
    return entries


@dataclass
class EncryptedStore:
    """Encrypted blacklist grouped by prefix length.

    Unpacked groups hold (entry_id, ciphertext) pairs; packed groups hold
    (start_id, fill_count, ciphertext) with up to ring_dim networks in one
    ciphertext's coefficients.  Prefix lengths and group sizes are public.
    `pub` is the public key the store was built under; it is not part of
    the serialized form (stores and keys travel in separate files).
    """

    scheme: str
    groups: dict[int, list]
    packed: bool = False
    meta: dict = field(default_factory=dict)
    pub: object | None = None

    @property
    def entry_count(self) -> int:
        if self.packed:
            return sum(fill for g in self.groups.values() for _, fill, _ in g)
        return sum(len(g) for g in self.groups.values())


@dataclass
class MatchResult:
    matched: bool
    entry_id: int | None = None
    differences: dict[int, int | None] | None = None
    stats: dict = field(default_factory=dict)


# packed coefficients that carry no entry hold this plaintext value, which
# no masked 32-bit address can collide with
def _pad_value(params: bfv.BfvParams) -> int:
    return params.plaintext_mod - 1


def _store_scheme_of(keys) -> str:
    if isinstance(keys, (bfv.BfvKeyPair, bfv.BfvPublicKey)):
        return BFV_SCHEME
    return phe.scheme_of(keys).value


def _require_bfv_fits_addresses(params: bfv.BfvParams) -> None:
    if params.plaintext_mod <= _MAX_ADDR + 1:
        raise MessageOutOfRange(
            "plaintext modulus must exceed 2^32 so masked addresses and the "
            "padding value are distinct residues")


def build_store(entries, keys, rng: RandomSource, *, packed: bool = False,
                gm_width: int = GM_WIDTH) -> EncryptedStore:
    """Mask, deduplicate, group and encrypt a CIDR list under `keys`."""
    if not entries:
        raise InvalidOptions("cannot build a store from an empty blacklist")
    scheme = _store_scheme_of(keys)
    if packed and scheme != BFV_SCHEME:
        raise InvalidOptions("packed stores require the lattice backend")

    seen = set()
    cleaned: dict[int, list[int]] = {}
    duplicates = 0
    normalized = 0
    for entry in entries:
        masked = entry.network & prefix_to_mask(entry.prefix_len)
        if masked != entry.network or entry.host_bits_cleared:
            normalized += 1
        key = (masked, entry.prefix_len)
        if key in seen:
            duplicates += 1
            continue
        seen.add(key)
        cleaned.setdefault(entry.prefix_len, []).append(masked)

    groups: dict[int, list] = {}
    next_id = 0
    if scheme == BFV_SCHEME:
        params = keys.params
        _require_bfv_fits_addresses(params)
        n = params.ring_dim
        pad = _pad_value(params)
        for prefix_len, values in cleaned.items():
            group = []
            if packed:
                for i in range(0, len(values), n):
                    chunk = values[i:i + n]
                    coeffs = chunk + [pad] * (n - len(chunk))
                    ct = bfv.encrypt(keys, bfv.encode(coeffs, params), params, rng)
                    group.append((next_id, len(chunk), ct))
                    next_id += len(chunk)
            else:
                for value in values:
                    ct = bfv.encrypt(keys, bfv.encode([value], params), params, rng)
                    group.append((next_id, ct))
                    next_id += 1
            groups[prefix_len] = group
    else:
        is_gm = scheme == SchemeId.GOLDWASSER_MICALI.value
        for prefix_len, values in cleaned.items():
            group = []
            for value in values:
                if is_gm:
                    ct = phe.encrypt(keys, value, rng, width=gm_width)
                else:
                    ct = phe.encrypt(keys, value, rng)
                group.append((next_id, ct))
                next_id += 1
            groups[prefix_len] = group

    meta = {"duplicates_removed": duplicates, "entries_normalized": normalized}
    pub = keys.public if hasattr(keys, "public") else keys
    return EncryptedStore(scheme, groups, packed, meta, pub)


def _scan_order(store: EncryptedStore):
    # longest prefix first; within a group, insertion order
    return sorted(store.groups, reverse=True)


def _check_store_keys(store: EncryptedStore, keys, want_bfv: bool | None = None):
    scheme = _store_scheme_of(keys)
    if scheme != store.scheme:
        raise SchemeMismatch(
            f"store was built for {store.scheme}, keys are {scheme}")
    if want_bfv is True and scheme != BFV_SCHEME:
        raise SchemeMismatch("this protocol needs a lattice-backend store")
    if not hasattr(keys, "public"):
        raise SchemeMismatch("matching needs the full key pair, not just the "
                             "public key")
    # stores loaded from disk carry no key material (pub is None)
    if store.pub is not None and store.pub != keys.public:
        raise SchemeMismatch("store was built under a different public key")
    return scheme


def match_subtract(ip: int, store: EncryptedStore, keys, rng: RandomSource, *,
                   exhaustive: bool = False, blind: bool = False,
                   debug: bool = False, threads: int = 1) -> MatchResult:
    """Subtraction protocol: encrypt the masked target, subtract each entry,
    and zero-test the difference.  Works on additive schemes and the
    lattice backend; first match wins unless `exhaustive` is set.

    With threads > 1 the per-entry tests of each group run on a thread
    pool; verdict and entry id are the same for any thread count (blinding
    factors are drawn up front, in scan order).
    """
    scheme = _check_store_keys(store, keys)
    if store.packed:
        raise SchemeMismatch("packed store: use match_batch_bfv")
    if scheme == SchemeId.GOLDWASSER_MICALI.value:
        raise SchemeMismatch("Goldwasser-Micali store: use match_xor")
    use_bfv = scheme == BFV_SCHEME
    if blind and use_bfv:
        raise InvalidOptions("blinding is only available for the additive schemes")

    stats = {"encryptions": 0, "sub_calls": 0, "zero_tests": 0}
    differences: dict[int, int | None] = {}
    matched_id = None

    def test_entry(ct, blinder):
        if use_bfv:
            diff = bfv.eval_sub(target, ct)
            pt = bfv.decrypt(keys, diff, keys.params)
            return not any(pt.coeffs), pt.coeffs[0]
        diff = phe.sub_encrypted(keys, target, ct)
        if blinder is not None:
            diff = phe.scalar_mul(keys, diff, blinder)
        zero = phe.is_zero(keys, diff)
        value = None
        if debug:
            try:
                value = phe.decrypt(keys, diff)
            except DecryptionFailure:
                value = None
        return zero, value

    for prefix_len in _scan_order(store):
        masked = ip & prefix_to_mask(prefix_len)
        if use_bfv:
            params = keys.params
            target = bfv.encrypt(keys, bfv.encode([masked], params), params, rng)
        else:
            target = phe.encrypt(keys, masked, rng)
        stats["encryptions"] += 1
        group = store.groups[prefix_len]
        blinders = [phe.blinding_factor(keys, rng) if blind and not use_bfv else None
                    for _ in group]
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                outcomes = list(pool.map(
                    lambda pair: test_entry(pair[0][1], pair[1]),
                    zip(group, blinders)))
        else:
            outcomes = None
        for idx, (entry_id, ct) in enumerate(group):
            if outcomes is not None:
                zero, value = outcomes[idx]
            else:
                zero, value = test_entry(ct, blinders[idx])
            stats["sub_calls"] += 1
            stats["zero_tests"] += 1
            if debug:
                differences[entry_id] = value
            if zero and matched_id is None:
                matched_id = entry_id
                if not exhaustive:
                    return MatchResult(True, entry_id,
                                       differences if debug else None, stats)
    return MatchResult(matched_id is not None, matched_id,
                       differences if debug else None, stats)


def match_xor(ip: int, store: EncryptedStore, keys, rng: RandomSource, *,
              exhaustive: bool = False, debug: bool = False) -> MatchResult:
    """XOR protocol for Goldwasser-Micali stores: XOR the encrypted masked
    target with each entry and test that every bit decrypts to zero."""
    scheme = _check_store_keys(store, keys)
    if scheme != SchemeId.GOLDWASSER_MICALI.value:
        raise SchemeMismatch("XOR matching needs a Goldwasser-Micali store")

    stats = {"encryptions": 0, "xor_calls": 0, "zero_tests": 0}
    differences: dict[int, int | None] = {}
    matched_id = None
    for prefix_len in _scan_order(store):
        masked = ip & prefix_to_mask(prefix_len)
        target = None
        for entry_id, ct in store.groups[prefix_len]:
            if target is None or target.width != ct.width:
                target = phe.encrypt(keys, masked, rng, width=ct.width)
                stats["encryptions"] += 1
            diff = phe.xor_encrypted(keys, target, ct)
            stats["xor_calls"] += 1
            zero = phe.is_zero(keys, diff)
            stats["zero_tests"] += 1
            if debug:
                differences[entry_id] = phe.decrypt(keys, diff)
            if zero and matched_id is None:
                matched_id = entry_id
                if not exhaustive:
                    return MatchResult(True, entry_id,
                                       differences if debug else None, stats)
    return MatchResult(matched_id is not None, matched_id,
                       differences if debug else None, stats)


def match_batch_bfv(ip: int, store: EncryptedStore, keys, rng: RandomSource, *,
                    exhaustive: bool = False) -> MatchResult:
    """Packed variant of the subtraction protocol: one subtraction checks up
    to ring_dim entries at once, with zero coefficients marking matches."""
    _check_store_keys(store, keys, want_bfv=True)
    if not store.packed:
        raise SchemeMismatch("store is not packed: use match_subtract")
    params = keys.params
    n = params.ring_dim

    stats = {"encryptions": 0, "sub_calls": 0, "zero_tests": 0}
    matched_id = None
    for prefix_len in _scan_order(store):
        masked = ip & prefix_to_mask(prefix_len)
        replicated = bfv.encode([masked] * n, params)
        target = bfv.encrypt(keys, replicated, params, rng)
        stats["encryptions"] += 1
        for start_id, fill, ct in store.groups[prefix_len]:
            diff = bfv.eval_sub(target, ct)
            stats["sub_calls"] += 1
            pt = bfv.decrypt(keys, diff, params)
            stats["zero_tests"] += 1
            for slot in range(fill):
                if pt.coeffs[slot] == 0:
                    if matched_id is None:
                        matched_id = start_id + slot
                        if not exhaustive:
                            return MatchResult(True, matched_id, None, stats)
                    break
    return MatchResult(matched_id is not None, matched_id, None, stats)
