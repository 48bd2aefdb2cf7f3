"""Exception types shared across the package.

Everything raised on purpose by this package derives from :class:`HcieError`,
so callers can catch one type at a boundary (the transfer server does exactly
that).  Errors that are really malformed-input complaints also subclass
``ValueError`` so they behave sanely in generic code.
"""


class HcieError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(HcieError, ValueError):
    """Operands have incompatible dimensions."""


class NotInvertibleError(HcieError, ValueError):
    """Matrix is not a unit mod 2^m (its determinant is even)."""


class PaddingError(HcieError, ValueError):
    """Block padding is malformed."""


class InsufficientPlaintextError(HcieError, ValueError):
    """No invertible plaintext submatrix exists among the given pairs."""


class InconsistentPairsError(HcieError, ValueError):
    """Plaintext/ciphertext pairs are not explained by a single linear key."""


class KeyFileError(HcieError, ValueError):
    """RSA key file is malformed."""


class DecapsulationError(HcieError):
    """Seed decapsulation failed.

    Deliberately carries no detail about which padding check failed.
    """


class EnvelopeFormatError(HcieError, ValueError):
    """Serialized envelope is malformed (bad magic, version, or lengths)."""


class OpenError(HcieError):
    """Opening a well-formed envelope failed; no plaintext was recovered."""


class PlaintextLengthError(OpenError):
    """Recovered plaintext length does not match the recorded length."""


class SignatureError(OpenError):
    """Signature verification over the recovered plaintext failed."""


class FingerprintMismatchError(OpenError):
    """Envelope fingerprint does not match the supplied sender public key."""


class ProtocolError(HcieError):
    """The peer violated the wire protocol."""


class FrameTooLargeError(ProtocolError):
    """Declared frame length exceeds the configured maximum."""


class ConnectionClosedError(ProtocolError):
    """The connection ended mid-frame."""


class TransferError(HcieError):
    """A file transfer failed; ``stage`` names the step that failed."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"{stage}: {message}")
        self.stage = stage


class BenchVerificationError(HcieError):
    """A timed benchmark run failed its round-trip verification."""
