"""Country and sector registries.

A registry maps contiguous 1-based indices to short codes (ISO-3166-1
alpha-3 for countries, OECD ICIO category codes like ``C23 PET`` for
sectors).  The bundled defaults cover the 37 ICIO activity sectors and the
58 economies (57 plus the Rest-of-World aggregate) of the May-2013
trade-in-value-added release; any registry of any size can be supplied as
a replacement.

Registry file format: CSV with a header row and 2 or 3 columns,
``index,code[,description]``.  Indices must be 1..n contiguous and codes
unique.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import ValidationError


@dataclass(frozen=True)
class SectorRegistry:
    """Ordered (index, icio_code, description) rows for activity sectors."""

    entries: tuple[tuple[int, str, str], ...]

    def __post_init__(self):
        _check_entries(self.entries, "sector")

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def codes(self) -> tuple[str, ...]:
        return tuple(code for _, code, _ in self.entries)

    def index_of(self, code: str) -> int:
        """1-based sector index for an exact icio_code match."""
        try:
            return self._code_map()[code]
        except KeyError:
            raise ValidationError(f"unknown sector code {code!r}") from None

    def _code_map(self) -> dict[str, int]:
        return {code: idx for idx, code, _ in self.entries}

    @classmethod
    def synthetic(cls, n: int) -> "SectorRegistry":
        """n generated sectors S01..Snn, for tests and synthetic runs."""
        return cls(tuple((i, f"S{i:02d}", f"synthetic sector {i}") for i in range(1, n + 1)))


@dataclass(frozen=True)
class CountryRegistry:
    """Ordered (index, iso3, name) rows for countries; may include a ROW aggregate."""

    entries: tuple[tuple[int, str, str], ...]

    def __post_init__(self):
        _check_entries(self.entries, "country")

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def codes(self) -> tuple[str, ...]:
        return tuple(code for _, code, _ in self.entries)

    def index_of(self, iso3: str) -> int:
        """1-based country index for an exact ISO3 match."""
        try:
            return self._code_map()[iso3]
        except KeyError:
            raise ValidationError(f"unknown country code {iso3!r}") from None

    def _code_map(self) -> dict[str, int]:
        return {code: idx for idx, code, _ in self.entries}

    @classmethod
    def synthetic(cls, n: int) -> "CountryRegistry":
        """n generated countries X01..Xnn, for tests and synthetic runs."""
        return cls(tuple((i, f"X{i:02d}", f"synthetic country {i}") for i in range(1, n + 1)))


def _check_entries(entries, kind: str) -> None:
    if not entries:
        raise ValidationError(f"{kind} registry is empty")
    for pos, (idx, code, _desc) in enumerate(entries, start=1):
        if idx != pos:
            raise ValidationError(f"{kind} registry indices must be 1..n contiguous; entry {pos} has index {idx}")
        if not code:
            raise ValidationError(f"{kind} registry entry {pos} has an empty code")
    codes = [code for _, code, _ in entries]
    if len(set(codes)) != len(codes):
        dupes = sorted({c for c in codes if codes.count(c) > 1})
        raise ValidationError(f"duplicate {kind} codes: {', '.join(dupes)}")


def _parse_registry_rows(text: str, source: str) -> tuple[tuple[int, str, str], ...]:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ValidationError(f"{source}: empty registry file") from None
    if len(header) < 2:
        raise ValidationError(f"{source}: registry files need at least 2 columns (index,code)")
    rows = []
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) < 2:
            raise ValidationError(f"{source}: line {lineno} has fewer than 2 columns")
        try:
            idx = int(row[0])
        except ValueError:
            raise ValidationError(f"{source}: line {lineno} has non-integer index {row[0]!r}") from None
        desc = row[2].strip() if len(row) >= 3 else ""
        rows.append((idx, row[1].strip(), desc))
    return tuple(rows)


def load_sector_registry(path: str | Path | None = None) -> SectorRegistry:
    """Load a sector registry CSV, or the bundled 37-sector ICIO default."""
    if path is None:
        text = resources.files("econrank.data").joinpath("sectors_icio37.csv").read_text(encoding="utf-8")
        source = "bundled sectors_icio37.csv"
    else:
        text = Path(path).read_text(encoding="utf-8")
        source = str(path)
    return SectorRegistry(_parse_registry_rows(text, source))


def load_country_registry(path: str | Path | None = None) -> CountryRegistry:
    """Load a country registry CSV, or the bundled 58-economy default."""
    if path is None:
        text = resources.files("econrank.data").joinpath("countries_tiva58.csv").read_text(encoding="utf-8")
        source = "bundled countries_tiva58.csv"
    else:
        text = Path(path).read_text(encoding="utf-8")
        source = str(path)
    return CountryRegistry(_parse_registry_rows(text, source))
