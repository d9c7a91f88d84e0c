"""Flow-table parsing and serialization.

Two input layouts are supported:

``native_csv`` (authoritative for tests) — an edge list with header
``source_country,source_sector,dest_country,dest_sector,value``, one row
per nonzero flow, values in plain decimal::

    source_country,source_sector,dest_country,dest_sector,value
    USA,C01T05 AGR,CHN,C15T16 FOD,1250000.0
    CHN,C15T16 FOD,USA,C55 HTR,87000.5

``icio_csv`` — a wide input-output table whose row and column labels are
``<country><sep><sector>`` pairs (default separator ``_``), for example::

    ,USA_C01T05 AGR,USA_C10T14 MIN,CHN_C01T05 AGR
    USA_C01T05 AGR,0,12.5,3.0
    USA_C10T14 MIN,7.25,0,0
    CHN_C01T05 AGR,1.0,0,0

The wide layout is configurable (:class:`IcioLayout`): label separator,
label order, and whether rows or columns hold the selling node.  After
parsing, column i' of the resulting MoneyMatrix always holds everything
node i' sells, whatever the file orientation was.

Positive diagonal cells (a node selling to itself) are dropped with a
counted warning; published tables routinely carry own-use values, but
self-loops are excluded from the network.  Missing cells are zero flows.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

from .errors import IngestionError, UsageError, ValidationError
from .money import MoneyMatrix, flatten_index
from .registries import CountryRegistry, SectorRegistry

NATIVE_HEADER = ["source_country", "source_sector", "dest_country", "dest_sector", "value"]


@dataclass
class IngestReport:
    """Counters collected while parsing one flow table."""

    rows_read: int = 0
    cells_kept: int = 0
    dropped_diagonal: int = 0
    warnings: list[str] = field(default_factory=list)


@dataclass(frozen=True)
class IcioLayout:
    """Configurable geometry of a wide input-output table.

    separator:       string between country and sector code in labels
    country_first:   labels read ``<country><sep><sector>`` when True
    rows_sell:       True when the row label is the selling node (the flow
                     runs from the row to the column); False for tables
                     stored the other way around
    """

    separator: str = "_"
    country_first: bool = True
    rows_sell: bool = True


def _decode(source) -> str:
    """Accept bytes, str, or a file object; return decoded text."""
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, str):
        return source
    data = source.read()
    if isinstance(data, bytes):
        return data.decode("utf-8")
    return data


def parse_flow_table(
    source,
    format: str,
    countries: CountryRegistry,
    sectors: SectorRegistry,
    *,
    year: int = 0,
    icio_layout: IcioLayout | None = None,
) -> tuple[MoneyMatrix, IngestReport]:
    """Parse a flow table into a validated MoneyMatrix plus a report.

    ``source`` may be bytes, text, or a readable file object (UTF-8).
    Unknown country/sector codes raise IngestionError naming the code and
    row; negative flows and duplicate cells raise ValidationError.
    """
    text = _decode(source)
    if format == "native_csv":
        return _parse_native(text, countries, sectors, year)
    if format == "icio_csv":
        return _parse_icio(text, countries, sectors, year, icio_layout or IcioLayout())
    raise UsageError(f"unknown flow-table format {format!r}")


def _parse_native(text: str, countries: CountryRegistry, sectors: SectorRegistry, year: int):
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise IngestionError("empty file") from None
    if [h.strip() for h in header] != NATIVE_HEADER:
        raise IngestionError(f"bad header {header!r}; expected {','.join(NATIVE_HEADER)}", row=1)

    report = IngestReport()
    seen: set[tuple[int, int]] = set()
    rows: list[int] = []
    cols: list[int] = []
    vals: list[float] = []
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 5:
            raise IngestionError(f"expected 5 fields, got {len(row)}", row=lineno)
        report.rows_read += 1
        src = _node_of(row[0].strip(), row[1].strip(), countries, sectors, lineno)
        dst = _node_of(row[2].strip(), row[3].strip(), countries, sectors, lineno)
        try:
            value = float(row[4])
        except ValueError:
            raise IngestionError(f"non-numeric value {row[4]!r}", row=lineno) from None
        if value < 0:
            raise ValidationError(f"row {lineno}: negative flow {value}")
        if (src, dst) in seen:
            raise ValidationError(f"row {lineno}: duplicate cell for source node {src}, destination node {dst}")
        seen.add((src, dst))
        if src == dst:
            if value > 0:
                report.dropped_diagonal += 1
                report.warnings.append(f"row {lineno}: dropped self-loop of node {src} (value {value})")
            continue
        if value == 0.0:
            continue
        rows.append(dst - 1)
        cols.append(src - 1)
        vals.append(value)
        report.cells_kept += 1
    matrix = MoneyMatrix.from_coo(rows, cols, vals, len(countries), len(sectors), year=year)
    return matrix, report


def _node_of(country_code: str, sector_code: str, countries, sectors, lineno: int) -> int:
    try:
        c = countries.index_of(country_code)
    except ValidationError:
        raise IngestionError(f"unknown country code {country_code!r}", row=lineno) from None
    try:
        s = sectors.index_of(sector_code)
    except ValidationError:
        raise IngestionError(f"unknown sector code {sector_code!r}", row=lineno) from None
    return flatten_index(c, s, len(sectors), len(countries))


def _split_label(label: str, layout: IcioLayout, countries, sectors, lineno: int) -> int:
    """Resolve one wide-table label to a node index."""
    parts = label.split(layout.separator, 1)
    if len(parts) != 2:
        raise IngestionError(f"label {label!r} has no separator {layout.separator!r}", row=lineno)
    first, second = parts[0].strip(), parts[1].strip()
    country_code, sector_code = (first, second) if layout.country_first else (second, first)
    return _node_of(country_code, sector_code, countries, sectors, lineno)


def _parse_icio(text: str, countries: CountryRegistry, sectors: SectorRegistry, year: int, layout: IcioLayout):
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise IngestionError("empty file") from None
    if len(header) < 2:
        raise IngestionError("wide table needs at least one labeled column", row=1)
    col_nodes = [_split_label(lbl.strip(), layout, countries, sectors, 1) for lbl in header[1:]]

    report = IngestReport()
    seen: set[tuple[int, int]] = set()
    rows: list[int] = []
    cols: list[int] = []
    vals: list[float] = []
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise IngestionError(f"expected {len(header)} fields, got {len(row)}", row=lineno)
        report.rows_read += 1
        row_node = _split_label(row[0].strip(), layout, countries, sectors, lineno)
        for col_node, cell in zip(col_nodes, row[1:]):
            cell = cell.strip()
            value = 0.0
            if cell:
                try:
                    value = float(cell)
                except ValueError:
                    raise IngestionError(f"non-numeric cell {cell!r}", row=lineno) from None
            if value < 0:
                raise ValidationError(f"row {lineno}: negative flow {value}")
            src, dst = (row_node, col_node) if layout.rows_sell else (col_node, row_node)
            if (src, dst) in seen:
                raise ValidationError(f"row {lineno}: duplicate cell for source node {src}, destination node {dst}")
            seen.add((src, dst))
            if src == dst:
                if value > 0:
                    report.dropped_diagonal += 1
                    report.warnings.append(f"row {lineno}: dropped self-loop of node {src} (value {value})")
                continue
            if value == 0.0:
                continue
            rows.append(dst - 1)
            cols.append(src - 1)
            vals.append(value)
            report.cells_kept += 1
    matrix = MoneyMatrix.from_coo(rows, cols, vals, len(countries), len(sectors), year=year)
    return matrix, report


def write_native_csv(matrix: MoneyMatrix, countries: CountryRegistry, sectors: SectorRegistry) -> str:
    """Serialize a MoneyMatrix to the native edge-list format.

    Values are written with shortest round-trip precision, so
    parse(serialize(M)) reproduces M bit-exactly.  Rows are ordered by
    (source node, destination node) for deterministic output.
    """
    n_s = matrix.n_sectors
    coo = matrix.values.tocoo()
    order = sorted(range(coo.nnz), key=lambda k: (int(coo.col[k]), int(coo.row[k])))
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(NATIVE_HEADER)
    ccodes = countries.codes
    scodes = sectors.codes
    for k in order:
        src = int(coo.col[k])
        dst = int(coo.row[k])
        sc, ss = divmod(src, n_s)
        dc, ds = divmod(dst, n_s)
        writer.writerow([ccodes[sc], scodes[ss], ccodes[dc], scodes[ds], repr(float(coo.data[k]))])
    return out.getvalue()
