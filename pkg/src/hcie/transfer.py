"""TCP transfer of sealed envelopes: length-prefixed frames, one file per
connection.

Wire format per frame: kind u8, length u32 big-endian, payload.  A session
is HELLO -> OK -> FILE -> ACK, with ERR(reason) replacing any reply on
failure.  The server never writes unverified bytes: the envelope is fully
opened first, then the plaintext lands via temp file + atomic rename, with
numeric suffixes instead of overwrites on name collisions.
"""

from __future__ import annotations

import logging
import os
import random
import socket
import struct
import tempfile
import threading
from dataclasses import dataclass
from enum import IntEnum
from pathlib import Path
from typing import BinaryIO, Callable, Dict, Optional

from . import envelope as envelope_mod
from . import rsa
from .errors import (
    ConnectionClosedError,
    DecapsulationError,
    EnvelopeFormatError,
    FingerprintMismatchError,
    FrameTooLargeError,
    HcieError,
    PaddingError,
    PlaintextLengthError,
    ProtocolError,
    SignatureError,
    TransferError,
)

logger = logging.getLogger(__name__)

MAX_FRAME = 256 * 1024 * 1024
HELLO_PAYLOAD = b"hciv1"
CONNECTION_TIMEOUT = 30.0


class FrameKind(IntEnum):
    HELLO = 1
    OK = 2
    FILE = 3
    ACK = 4
    ERR = 5


@dataclass(frozen=True)
class Frame:
    kind: FrameKind
    payload: bytes


@dataclass(frozen=True)
class AckPayload:
    status: int
    digest: bytes  # sha256 of the recovered plaintext; all-zero when status != 0

    def encode(self) -> bytes:
        return bytes([self.status]) + self.digest

    @classmethod
    def decode(cls, data: bytes) -> "AckPayload":
        if len(data) != 33:
            raise ProtocolError(f"ACK payload must be 33 bytes, got {len(data)}")
        ack = cls(status=data[0], digest=data[1:])
        if ack.status != 0 and ack.digest != b"\x00" * 32:
            raise ProtocolError("non-ok ACK must carry an all-zero digest")
        return ack


def _read_exact(stream: BinaryIO, count: int) -> bytes:
    buf = b""
    while len(buf) < count:
        chunk = stream.read(count - len(buf))
        if not chunk:
            raise ConnectionClosedError("connection closed")
        buf += chunk
    return buf


def write_frame(stream: BinaryIO, frame: Frame) -> None:
    if len(frame.payload) > 0xFFFFFFFF:
        raise ProtocolError("payload too large for a u32 length")
    stream.write(struct.pack(">BI", int(frame.kind), len(frame.payload)))
    stream.write(frame.payload)
    stream.flush()


def read_frame(stream: BinaryIO, max_frame: int = MAX_FRAME) -> Frame:
    header = _read_exact(stream, 5)
    kind_byte, length = struct.unpack(">BI", header)
    if length > max_frame:
        # reject before touching the payload, let alone allocating it
        raise FrameTooLargeError(f"frame of {length} bytes exceeds maximum {max_frame}")
    try:
        kind = FrameKind(kind_byte)
    except ValueError:
        raise ProtocolError(f"unknown frame kind {kind_byte}") from None
    payload = _read_exact(stream, length) if length else b""
    return Frame(kind, payload)


_NAME_BAD_CHARS = ("/", "\\", "\x00")


def validate_filename(name: str) -> None:
    raw = name.encode("utf-8")
    if not name or len(raw) > 255:
        raise ProtocolError("filename must be 1..255 UTF-8 bytes")
    if any(c in name for c in _NAME_BAD_CHARS) or name in (".", ".."):
        raise ProtocolError("filename must not contain path separators")


def encode_file_payload(name: str, envelope_bytes: bytes) -> bytes:
    validate_filename(name)
    raw = name.encode("utf-8")
    return struct.pack(">H", len(raw)) + raw + envelope_bytes


def decode_file_payload(payload: bytes) -> tuple:
    if len(payload) < 2:
        raise ProtocolError("FILE payload too short")
    (name_len,) = struct.unpack(">H", payload[:2])
    if len(payload) < 2 + name_len:
        raise ProtocolError("FILE payload shorter than its name field")
    try:
        name = payload[2 : 2 + name_len].decode("utf-8")
    except UnicodeDecodeError:
        raise ProtocolError("filename is not valid UTF-8") from None
    validate_filename(name)
    return name, payload[2 + name_len :]


def send_file(
    host: str,
    port: int,
    path,
    recipient_pub: rsa.RsaPublicKey,
    sender_priv: rsa.RsaPrivateKey,
    sender_pub: rsa.RsaPublicKey,
    rng: Optional[random.Random] = None,
    dim_log2: int = 4,
    timeout: float = CONNECTION_TIMEOUT,
) -> AckPayload:
    """Seal a file and push it to a listening server.

    Returns the server's ACK after checking its digest against the local
    plaintext hash; any deviation raises :class:`TransferError` whose
    ``stage`` names the failing step.
    """
    path = Path(path)
    plaintext = path.read_bytes()
    env = envelope_mod.seal(plaintext, recipient_pub, sender_priv, sender_pub, rng, dim_log2)
    payload = encode_file_payload(path.name, envelope_mod.serialize(env))

    with socket.create_connection((host, port), timeout=timeout) as sock:
        stream = sock.makefile("rwb")
        try:
            write_frame(stream, Frame(FrameKind.HELLO, HELLO_PAYLOAD))
            reply = read_frame(stream)
            if reply.kind == FrameKind.ERR:
                raise TransferError("hello", reply.payload.decode("utf-8", "replace"))
            if reply.kind != FrameKind.OK:
                raise TransferError("hello", f"expected OK, got {reply.kind.name}")

            write_frame(stream, Frame(FrameKind.FILE, payload))
            reply = read_frame(stream)
            if reply.kind == FrameKind.ERR:
                raise TransferError("transfer", reply.payload.decode("utf-8", "replace"))
            if reply.kind != FrameKind.ACK:
                raise TransferError("transfer", f"expected ACK, got {reply.kind.name}")
            ack = AckPayload.decode(reply.payload)
            if ack.status != 0:
                raise TransferError("ack", f"server reported status {ack.status}")
            if ack.digest != rsa.sha256(plaintext):
                raise TransferError("digest", "server digest does not match local plaintext")
            return ack
        finally:
            stream.close()


def load_trusted_keys(trust_dir) -> Dict[bytes, rsa.RsaPublicKey]:
    """Index every parseable public key file in a directory by fingerprint."""
    table: Dict[bytes, rsa.RsaPublicKey] = {}
    for entry in sorted(Path(trust_dir).iterdir()):
        if not entry.is_file():
            continue
        try:
            key = rsa.parse_key(entry.read_bytes())
        except HcieError:
            logger.warning("ignoring unparseable key file %s", entry)
            continue
        if isinstance(key, rsa.RsaPrivateKey):
            logger.warning("ignoring private key %s in trust directory", entry)
            continue
        table[rsa.fingerprint(key)] = key
    return table


def _failure_reason(exc: Exception) -> str:
    if isinstance(exc, DecapsulationError):
        return "decapsulation failed"
    if isinstance(exc, PaddingError):
        return "invalid padding"
    if isinstance(exc, (SignatureError, FingerprintMismatchError)):
        return "signature verification failed"
    if isinstance(exc, PlaintextLengthError):
        return "plaintext length mismatch"
    if isinstance(exc, EnvelopeFormatError):
        return "envelope format"
    if isinstance(exc, FrameTooLargeError):
        return "frame too large"
    if isinstance(exc, ProtocolError):
        # protocol errors carry their reason code ("version", "unknown sender", ...)
        return str(exc) or "protocol"
    return "internal error"


def _claim_output_path(out_dir: Path, name: str) -> Path:
    """Reserve a collision-free output name (name, name.1, name.2, ...)."""
    for i in range(1000000):
        candidate = out_dir / (name if i == 0 else f"{name}.{i}")
        try:
            fd = os.open(candidate, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
        except FileExistsError:
            continue
        os.close(fd)
        return candidate
    raise OSError(f"could not claim an output name for {name!r}")


def _write_atomic(out_dir: Path, name: str, data: bytes) -> Path:
    with tempfile.NamedTemporaryFile(dir=out_dir, prefix=".hcie-", delete=False) as tmp:
        tmp.write(data)
        tmp.flush()
        os.fsync(tmp.fileno())
        tmp_path = Path(tmp.name)
    try:
        target = _claim_output_path(out_dir, name)
        os.replace(tmp_path, target)
        return target
    except BaseException:
        tmp_path.unlink(missing_ok=True)
        raise


class TransferServer:
    """Receive-only envelope server; one file per connection.

    Construct with ``port=0`` to bind an ephemeral port (see ``.port``),
    then call :meth:`serve_forever`, typically from a dedicated thread.
    Connections are handled concurrently; sessions share nothing but the
    output directory, and writes are atomic, so no synchronization is
    needed beyond the claim-by-O_EXCL naming.
    """

    def __init__(
        self,
        port: int,
        recipient_priv: rsa.RsaPrivateKey,
        sender_pub_lookup: Callable[[bytes], Optional[rsa.RsaPublicKey]],
        out_dir,
        host: str = "0.0.0.0",
        timeout: float = CONNECTION_TIMEOUT,
        max_frame: int = MAX_FRAME,
    ):
        self._recipient_priv = recipient_priv
        self._lookup = sender_pub_lookup
        self._out_dir = Path(out_dir)
        self._timeout = timeout
        self._max_frame = max_frame
        self._stopping = threading.Event()
        self._sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        self._sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        self._sock.bind((host, port))
        self._sock.listen(64)
        self._sock.settimeout(0.2)
        self.port = self._sock.getsockname()[1]

    def serve_forever(self) -> None:
        try:
            while not self._stopping.is_set():
                try:
                    conn, addr = self._sock.accept()
                except socket.timeout:
                    continue
                except OSError:
                    break
                worker = threading.Thread(
                    target=self._handle, args=(conn, addr), daemon=True
                )
                worker.start()
        finally:
            self._sock.close()

    def shutdown(self) -> None:
        self._stopping.set()

    def _handle(self, conn: socket.socket, addr) -> None:
        conn.settimeout(self._timeout)
        stream = conn.makefile("rwb")
        try:
            self._session(stream)
        except (HcieError, OSError, ValueError) as exc:
            reason = _failure_reason(exc)
            logger.info("connection from %s failed: %s", addr, exc)
            try:
                write_frame(stream, Frame(FrameKind.ERR, reason.encode("utf-8")))
            except OSError:
                pass
        finally:
            try:
                stream.close()
            except OSError:
                pass
            conn.close()

    def _session(self, stream: BinaryIO) -> None:
        hello = read_frame(stream, self._max_frame)
        if hello.kind != FrameKind.HELLO:
            raise ProtocolError(f"expected HELLO, got kind {hello.kind}")
        if hello.payload != HELLO_PAYLOAD:
            raise ProtocolError("version")
        write_frame(stream, Frame(FrameKind.OK, b""))

        file_frame = read_frame(stream, self._max_frame)
        if file_frame.kind != FrameKind.FILE:
            raise ProtocolError(f"expected FILE, got kind {file_frame.kind}")
        name, env_bytes = decode_file_payload(file_frame.payload)
        env = envelope_mod.parse(env_bytes)
        sender_pub = self._lookup(env.sender_fingerprint)
        if sender_pub is None:
            raise ProtocolError("unknown sender")
        plaintext = envelope_mod.open_envelope(env, self._recipient_priv, sender_pub)
        target = _write_atomic(self._out_dir, name, plaintext)
        logger.info("received %d bytes into %s", len(plaintext), target)
        write_frame(stream, Frame(FrameKind.ACK, AckPayload(0, rsa.sha256(plaintext)).encode()))


def serve(
    port: int,
    recipient_priv: rsa.RsaPrivateKey,
    sender_pub_lookup: Callable[[bytes], Optional[rsa.RsaPublicKey]],
    out_dir,
    **kwargs,
) -> None:
    """Blocking convenience wrapper: build a server and run until stopped."""
    TransferServer(port, recipient_priv, sender_pub_lookup, out_dir, **kwargs).serve_forever()
