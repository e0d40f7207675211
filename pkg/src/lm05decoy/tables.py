"""CSV table formats and run manifests."""

from __future__ import annotations

import csv
import hashlib
import math
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .core import BoundsResult, ChannelPoint, DomainError, MeasuredStats

MEASURED_HEADER = ["loss_db", "q_mu", "e_mu", "q_nu", "e_nu", "y0"]
BOUNDS_HEADER = ["loss_db", "y1_l", "y12_l", "q12_l", "eps12_u", "r_l", "clamped", "insecure"]


class TableParseError(ValueError):
    def __init__(self, path: str | Path, line: int, message: str) -> None:
        super().__init__(f"{path}:{line}: {message}")
        self.path = str(path)
        self.line = line


def fmt(x: float) -> str:
    """Full-precision scientific notation (17 significant digits)."""
    return format(x, ".16e")


def bundled_table1() -> Path:
    """Path to the transcribed weak+vacuum measurement table shipped with the package."""
    return Path(str(resources.files("lm05decoy") / "data" / "table1.csv"))


def parse_measured_table(path: str | Path) -> list[tuple[ChannelPoint, MeasuredStats]]:
    rows: list[tuple[ChannelPoint, MeasuredStats]] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise TableParseError(path, 1, "empty file")
        if [h.strip() for h in header] != MEASURED_HEADER:
            raise TableParseError(path, 1, f"expected header {','.join(MEASURED_HEADER)}")
        for record in reader:
            line = reader.line_num
            if not record or all(not f.strip() for f in record):
                continue
            if len(record) != len(MEASURED_HEADER):
                raise TableParseError(path, line, f"expected {len(MEASURED_HEADER)} fields, got {len(record)}")
            try:
                values = [float(f) for f in record]
            except ValueError as exc:
                raise TableParseError(path, line, str(exc)) from None
            if not all(math.isfinite(v) for v in values):
                raise TableParseError(path, line, "non-finite value")
            try:
                point = ChannelPoint(values[0])
                stats = MeasuredStats(*values[1:])
            except DomainError as exc:
                raise TableParseError(path, line, str(exc)) from None
            rows.append((point, stats))
    if not rows:
        raise TableParseError(path, 2, "no data rows")
    return rows


def write_measured_table(path: str | Path, rows: Iterable[tuple[ChannelPoint, MeasuredStats]]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(MEASURED_HEADER)
        for point, s in rows:
            writer.writerow([fmt(v) for v in (point.loss_db, s.q_mu, s.e_mu, s.q_nu, s.e_nu, s.y0)])


def write_bounds_table(path: str | Path, rows: Sequence[tuple[float, BoundsResult]]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(BOUNDS_HEADER)
        for loss, b in rows:
            writer.writerow(
                [fmt(loss), fmt(b.y1_l), fmt(b.y12_l), fmt(b.q12_l), fmt(b.eps12_u), fmt(b.r_l),
                 str(b.clamped).lower(), str(b.insecure).lower()]
            )


def read_csv_dicts(path: str | Path) -> list[dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def file_digest(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


@dataclass
class RunManifest:
    command: str
    parameters: dict
    input_digests: dict[str, str] = field(default_factory=dict)
    seeds: list[int] = field(default_factory=list)
    tool_version: str = ""
    timestamp: str = ""

    def __post_init__(self) -> None:
        if not self.tool_version:
            from . import __version__

            self.tool_version = __version__
        if not self.timestamp:
            self.timestamp = datetime.now(timezone.utc).isoformat(timespec="seconds")

    def to_dict(self) -> dict:
        return asdict(self)
