"""
UCERT - Measurement Record Store
Reads and writes uniform-measurement records as CSV or packed binary.
"""

import io
import struct
from pathlib import Path
from typing import List, Sequence, Union

import numpy as np
import pandas as pd

from ..operators.pauli import MeasurementDirection
from ..states.statevector import MeasurementData, MeasurementRecord
from ..utils.errors import RecordFormatError
from ..utils.io import atomic_write_bytes, atomic_write_text
from ..utils.logger import get_logger

logger = get_logger(__name__)

MAGIC = b"UCMR"
HEADER = struct.Struct("<4sIQ3d")
BASIS_PREFIX = "# basis="
FORMATS = ("csv", "binary")


class RecordStore:
    """
    File persistence for MeasurementRecords.

    CSV layout:
        # basis=nx,ny,nz
        q1,q2,...,qN
        1,-1,...            (one row per shot)

    Binary layout (little endian):
        magic "UCMR", uint32 N, uint64 T, 3 float64 basis components,
        then numpy.packbits of the T x N bit matrix (+1 -> 0, -1 -> 1), row-major.

    Loading detects the format from the leading bytes.
    """

    def __init__(self, default_format: str = "csv"):
        if default_format not in FORMATS:
            raise ValueError(f"Unknown record format: {default_format}")
        self.default_format = default_format

    # -- writing ---------------------------------------------------------------

    def save(self, path: Union[str, Path], data: MeasurementData, fmt: str = None) -> Path:
        """
        Write one record.

        Args:
            path: Target file
            data: MeasurementRecord or BasisHistogram (expanded to shots)
            fmt: "csv" or "binary"; defaults to the store's format

        Returns:
            The written path
        """
        fmt = fmt or self.default_format
        record = data if isinstance(data, MeasurementRecord) else data.to_record()
        if fmt == "csv":
            written = atomic_write_text(path, self.to_csv(record))
        elif fmt == "binary":
            written = atomic_write_bytes(path, self.to_bytes(record))
        else:
            raise ValueError(f"Unknown record format: {fmt}")
        logger.info(f"💾 Saved {record!r} to {written} ({fmt})")
        return written

    @staticmethod
    def to_csv(record: MeasurementRecord) -> str:
        basis = ",".join(repr(float(c)) for c in record.direction.vector)
        columns = [f"q{q}" for q in range(1, record.n_qubits + 1)]
        frame = pd.DataFrame(record.outcomes, columns=columns)
        return f"{BASIS_PREFIX}{basis}\n" + frame.to_csv(index=False, lineterminator="\n")

    @staticmethod
    def to_bytes(record: MeasurementRecord) -> bytes:
        bits = (record.outcomes < 0).astype(np.uint8)
        header = HEADER.pack(MAGIC, record.n_qubits, record.shots, *record.direction.vector)
        return header + np.packbits(bits, axis=None).tobytes()

    # -- reading ---------------------------------------------------------------

    def load(self, path: Union[str, Path]) -> MeasurementRecord:
        """
        Read one record, CSV or binary.

        Raises:
            RecordFormatError: malformed file
        """
        path = Path(path)
        try:
            raw = path.read_bytes()
        except OSError as e:
            raise RecordFormatError(f"Cannot read record file {path}: {e}") from None

        record = self.from_bytes(raw) if raw.startswith(MAGIC) else self.from_csv(raw.decode("utf-8"))
        logger.info(f"📂 Loaded {record!r} from {path}")
        return record

    def load_many(self, paths: Sequence[Union[str, Path]]) -> List[MeasurementRecord]:
        return [self.load(p) for p in paths]

    @staticmethod
    def _direction(components: Sequence[float]) -> MeasurementDirection:
        try:
            return MeasurementDirection.from_vector(components, normalize=True)
        except ValueError as e:
            raise RecordFormatError(f"Invalid basis vector {list(components)}: {e}") from None

    @classmethod
    def from_csv(cls, text: str) -> MeasurementRecord:
        first, _, body = text.partition("\n")
        if not first.startswith(BASIS_PREFIX):
            raise RecordFormatError(f"CSV record must start with '{BASIS_PREFIX}nx,ny,nz'")
        try:
            components = [float(c) for c in first[len(BASIS_PREFIX):].split(",")]
        except ValueError:
            raise RecordFormatError(f"Unparseable basis line: {first!r}") from None
        if len(components) != 3:
            raise RecordFormatError(f"Basis needs three components, got {len(components)}")

        try:
            frame = pd.read_csv(io.StringIO(body), dtype=np.int64)
        except (ValueError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
            raise RecordFormatError(f"Malformed CSV record: {e}") from None
        expected = [f"q{q}" for q in range(1, frame.shape[1] + 1)]
        if list(frame.columns) != expected:
            raise RecordFormatError(f"CSV header must be {','.join(expected)}")

        try:
            return MeasurementRecord(cls._direction(components), frame.to_numpy())
        except ValueError as e:
            raise RecordFormatError(f"Invalid outcomes: {e}") from None

    @classmethod
    def from_bytes(cls, raw: bytes) -> MeasurementRecord:
        if len(raw) < HEADER.size:
            raise RecordFormatError("Binary record shorter than its header")
        magic, n_qubits, shots, nx, ny, nz = HEADER.unpack_from(raw)
        if magic != MAGIC:
            raise RecordFormatError(f"Bad magic {magic!r}")
        if n_qubits < 1 or shots < 1:
            raise RecordFormatError(f"Binary record declares N={n_qubits}, T={shots}")

        n_bits = n_qubits * shots
        payload = np.frombuffer(raw, dtype=np.uint8, offset=HEADER.size)
        if payload.size != (n_bits + 7) // 8:
            raise RecordFormatError(
                f"Payload has {payload.size} bytes, expected {(n_bits + 7) // 8} for N={n_qubits}, T={shots}"
            )
        bits = np.unpackbits(payload, count=n_bits).reshape(shots, n_qubits)
        outcomes = (1 - 2 * bits.astype(np.int8)).astype(np.int8)
        return MeasurementRecord(cls._direction((nx, ny, nz)), outcomes)

    def __repr__(self) -> str:
        return f"RecordStore(format={self.default_format})"
