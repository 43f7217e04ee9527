"""Exception taxonomy shared across the package."""


class HelbError(Exception):
    """Base class for every error raised by this package."""


class NotInvertible(HelbError):
    """No modular inverse exists (gcd with the modulus is not 1)."""


class InvalidModulus(HelbError):
    """Modulus violates a precondition (e.g. even where odd is required)."""


class NotFound(HelbError):
    """Exhaustive search ran out of range without a hit."""


class InvalidOptions(HelbError):
    """Key-generation options are inconsistent or unsatisfiable."""


class MessageOutOfRange(HelbError):
    """Plaintext does not fit the scheme's message space."""


class DecryptionFailure(HelbError):
    """Ciphertext cannot be decrypted (malformed, or outside the supported path)."""


class CapabilityUnsupported(HelbError):
    """The scheme does not support the requested homomorphic operation."""


class WidthMismatch(HelbError):
    """Bitwise ciphertexts of different widths cannot be combined."""


class InvalidParams(HelbError):
    """Lattice parameter set violates one or more constraints."""


class TooManyValues(HelbError):
    """More values than ring coefficients."""


class ParamMismatch(HelbError):
    """Ciphertexts from different parameter sets cannot be combined."""


class InvalidAddress(HelbError):
    """Malformed IPv4 address text."""


class InvalidPrefix(HelbError):
    """CIDR prefix length outside [0, 32]."""


class SchemeMismatch(HelbError):
    """Keys, store and requested protocol do not agree on a scheme."""


class FormatError(HelbError):
    """Serialized key or store file is malformed."""
