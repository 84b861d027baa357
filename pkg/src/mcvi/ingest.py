"""Loading, validation and synthetic generation of the five input datasets.

Tables are held as pandas DataFrames sorted by their natural key, so the row
order of a source file never leaks into downstream results. Missing
observations are absent rows; nothing is imputed.

CSV schemas (header names exact, lowercase, any column order)::

    lsci.csv             economy,year,lsci
    lsbci.csv            economy_a,economy_b,year,lsbci
    plsci.csv            port_id,economy,year,plsci
    classifications.csv  economy,name,sids,ldc,lldc,region   (flags as 0/1)
    external.csv         economy,year,gdp_pc,trade_open,lpi,freight_advalorem  (blank = missing)

The loader expects one row per economy and year. Collapsing quarterly UNCTAD
releases to their first-quarter value is left to the caller.
"""
from __future__ import annotations

import csv
import hashlib
import io
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Mapping

import numpy as np
import pandas as pd

from .errors import DomainError, InvalidConfig, MalformedCsv, SchemaMismatch, UnknownEconomy
from .rng import stream

KINDS = ("lsci", "lsbci", "plsci", "classification", "external")

SCHEMAS: dict[str, tuple[str, ...]] = {
    "lsci": ("economy", "year", "lsci"),
    "lsbci": ("economy_a", "economy_b", "year", "lsbci"),
    "plsci": ("port_id", "economy", "year", "plsci"),
    "classification": ("economy", "name", "sids", "ldc", "lldc", "region"),
    "external": ("economy", "year", "gdp_pc", "trade_open", "lpi", "freight_advalorem"),
}

FILENAMES: dict[str, str] = {
    "lsci": "lsci.csv",
    "lsbci": "lsbci.csv",
    "plsci": "plsci.csv",
    "classification": "classifications.csv",
    "external": "external.csv",
}

KEYS: dict[str, tuple[str, ...]] = {
    "lsci": ("economy", "year"),
    "lsbci": ("economy_a", "economy_b", "year"),
    "plsci": ("port_id", "year"),
    "classification": ("economy",),
    "external": ("economy", "year"),
}

REGIONS = ("Africa", "Americas", "Asia", "Europe", "Oceania")
DEFAULT_YEAR_RANGE = (2006, 2025)
LSBCI_SYMMETRY_TOL = 1e-9

_NUMBER = re.compile(r"^[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?$")
_INTEGER = re.compile(r"^[+-]?\d+$")


@dataclass(frozen=True)
class DataBundle:
    """Validated, read-only image of the five input tables."""

    lsci: pd.DataFrame
    lsbci: pd.DataFrame
    plsci: pd.DataFrame
    classification: pd.DataFrame
    external: pd.DataFrame
    year_range: tuple[int, int]
    year_counts: pd.Series
    provenance: Mapping[str, object] = field(default_factory=dict)

    def tables(self) -> dict[str, pd.DataFrame]:
        return {k: getattr(self, k) for k in KINDS}

    def economies(self) -> list[str]:
        return list(self.classification["economy"])


# --------------------------------------------------------------------------- parsing

def _parse_number(text: str, column: str, line: int, source: str, key) -> float:
    if not _NUMBER.match(text):
        raise MalformedCsv(f"column {column!r}: {text!r} is not a decimal number", line, source)
    return float(text)


def _parse_year(text: str, line: int, source: str, year_range: tuple[int, int] | None, key) -> int:
    if not _INTEGER.match(text):
        raise MalformedCsv(f"column 'year': {text!r} is not an integer", line, source)
    year = int(text)
    if year_range is not None and not (year_range[0] <= year <= year_range[1]):
        raise DomainError(f"year {year} outside {year_range[0]}-{year_range[1]}", key=key, line=line, source=source)
    return year


def _parse_code(text: str, column: str, line: int, source: str) -> str:
    code = text.strip()
    if not code or any(c.isspace() for c in code) or code != code.upper():
        raise MalformedCsv(f"column {column!r}: {text!r} is not an uppercase code", line, source)
    return code


def _parse_flag(text: str, column: str, line: int, source: str) -> bool:
    if text not in ("0", "1"):
        raise MalformedCsv(f"column {column!r}: expected 0 or 1, got {text!r}", line, source)
    return text == "1"


def _read_rows(kind: str, source: IO[bytes] | bytes | str | Path, name: str):
    if isinstance(source, (str, Path)):
        raw = Path(source).read_bytes()
    elif isinstance(source, bytes):
        raw = source
    else:
        raw = source.read()
        if isinstance(raw, str):
            raw = raw.encode("utf-8")
    try:
        text = raw.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise MalformedCsv(f"not valid UTF-8 ({exc.reason})", None, name) from None

    reader = csv.reader(io.StringIO(text, newline=""), strict=True)
    try:
        header = next(reader)
    except StopIteration:
        raise SchemaMismatch("empty file, header row expected", name) from None
    except csv.Error as exc:
        raise MalformedCsv(str(exc), reader.line_num, name) from None
    header = [h.strip() for h in header]
    expected = SCHEMAS[kind]
    missing = [c for c in expected if c not in header]
    extra = [c for c in header if c not in expected]
    if missing or extra or len(set(header)) != len(header):
        parts = []
        if missing:
            parts.append(f"missing columns {missing}")
        if extra:
            parts.append(f"unexpected columns {extra}")
        if len(set(header)) != len(header):
            parts.append("duplicated column names")
        raise SchemaMismatch(f"{kind} header: " + "; ".join(parts), name)
    pos = [header.index(c) for c in expected]

    while True:
        try:
            row = next(reader)
        except StopIteration:
            return
        except csv.Error as exc:
            raise MalformedCsv(str(exc), reader.line_num, name) from None
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != len(header):
            raise MalformedCsv(f"expected {len(header)} fields, found {len(row)}", reader.line_num, name)
        yield reader.line_num, [row[p].strip() for p in pos]


def load_dataset(
    kind: str,
    source: IO[bytes] | bytes | str | Path,
    *,
    year_range: tuple[int, int] | None = DEFAULT_YEAR_RANGE,
    name: str | None = None,
) -> pd.DataFrame:
    """Parse and validate one input table.

    ``source`` may be a binary stream, raw bytes or a file path. Errors carry
    the source name and the 1-based line number of the offending row.
    """
    if kind not in SCHEMAS:
        raise ValueError(f"unknown dataset kind {kind!r}; expected one of {KINDS}")
    if name is None:
        name = str(source) if isinstance(source, (str, Path)) else FILENAMES[kind]
    parser = _PARSERS[kind]
    return parser(_read_rows(kind, source, name), name, year_range)


def _check_duplicates(records: dict, key, line: int, name: str, seen_lines: dict):
    if key in records:
        raise DomainError(
            f"duplicate key {key} (first seen on line {seen_lines[key]})", key=key, line=line, source=name
        )


def _parse_lsci(rows, name, year_range):
    records: dict = {}
    lines: dict = {}
    for line, (eco, yr, val) in rows:
        eco = _parse_code(eco, "economy", line, name)
        year = _parse_year(yr, line, name, year_range, (eco, yr))
        key = (eco, year)
        value = _parse_number(val, "lsci", line, name, key)
        if value < 0:
            raise DomainError(f"negative lsci {value} for {key}", key=key, line=line, source=name)
        _check_duplicates(records, key, line, name, lines)
        records[key] = value
        lines[key] = line
    frame = pd.DataFrame(
        [(e, y, v) for (e, y), v in records.items()], columns=list(SCHEMAS["lsci"])
    )
    return _finish(frame, "lsci")


def _parse_lsbci(rows, name, year_range):
    # keyed by (low code, high code, year); stores {orientation: (value, line)}
    pairs: dict = {}
    for line, (a, b, yr, val) in rows:
        a = _parse_code(a, "economy_a", line, name)
        b = _parse_code(b, "economy_b", line, name)
        year = _parse_year(yr, line, name, year_range, (a, b, yr))
        key = (a, b, year)
        if a == b:
            raise DomainError(f"self-pair {key}", key=key, line=line, source=name)
        value = _parse_number(val, "lsbci", line, name, key)
        if not 0.0 <= value <= 1.0:
            raise DomainError(f"lsbci {value} outside [0, 1] for {key}", key=key, line=line, source=name)
        lo, hi = (a, b) if a < b else (b, a)
        slot = pairs.setdefault((lo, hi, year), {})
        orient = a < b
        if orient in slot:
            raise DomainError(
                f"duplicate key {key} (first seen on line {slot[orient][1]})", key=key, line=line, source=name
            )
        other = slot.get(not orient)
        if other is not None and abs(other[0] - value) > LSBCI_SYMMETRY_TOL:
            raise DomainError(
                f"conflicting symmetric lsbci for {(lo, hi, year)}: {other[0]} (line {other[1]}) vs {value}",
                key=(lo, hi, year),
                line=line,
                source=name,
            )
        slot[orient] = (value, line)
    out = []
    for (lo, hi, year), slot in pairs.items():
        # canonical orientation wins so the kept value does not depend on row order
        value = slot[True][0] if True in slot else slot[False][0]
        out.append((lo, hi, year, value))
    frame = pd.DataFrame(out, columns=list(SCHEMAS["lsbci"]))
    return _finish(frame, "lsbci")


def _parse_plsci(rows, name, year_range):
    records: dict = {}
    lines: dict = {}
    for line, (port, eco, yr, val) in rows:
        if not port:
            raise MalformedCsv("column 'port_id': empty", line, name)
        eco = _parse_code(eco, "economy", line, name)
        year = _parse_year(yr, line, name, year_range, (port, yr))
        key = (port, year)
        value = _parse_number(val, "plsci", line, name, key)
        if value < 0:
            raise DomainError(f"negative plsci {value} for {key}", key=key, line=line, source=name)
        _check_duplicates(records, key, line, name, lines)
        records[key] = (eco, value)
        lines[key] = line
    frame = pd.DataFrame(
        [(p, e, y, v) for (p, y), (e, v) in records.items()], columns=list(SCHEMAS["plsci"])
    )
    return _finish(frame, "plsci")


def _parse_classification(rows, name, year_range):
    records: dict = {}
    lines: dict = {}
    for line, (eco, nm, sids, ldc, lldc, region) in rows:
        eco = _parse_code(eco, "economy", line, name)
        key = (eco,)
        flags = [_parse_flag(v, c, line, name) for v, c in ((sids, "sids"), (ldc, "ldc"), (lldc, "lldc"))]
        if region not in REGIONS:
            raise DomainError(f"region {region!r} not one of {REGIONS}", key=key, line=line, source=name)
        _check_duplicates(records, key, line, name, lines)
        records[key] = (nm, *flags, region)
        lines[key] = line
    frame = pd.DataFrame(
        [(k[0], *v) for k, v in records.items()], columns=list(SCHEMAS["classification"])
    )
    return _finish(frame, "classification")


def _parse_external(rows, name, year_range):
    records: dict = {}
    lines: dict = {}
    cols = SCHEMAS["external"][2:]
    for line, (eco, yr, *vals) in rows:
        eco = _parse_code(eco, "economy", line, name)
        year = _parse_year(yr, line, name, year_range, (eco, yr))
        key = (eco, year)
        parsed = []
        for col, text in zip(cols, vals):
            if text == "":
                parsed.append(math.nan)
                continue
            v = _parse_number(text, col, line, name, key)
            if not v > 0:
                raise DomainError(f"{col} must be positive, got {v} for {key}", key=key, line=line, source=name)
            if col == "lpi" and not 1.0 <= v <= 5.0:
                raise DomainError(f"lpi {v} outside [1, 5] for {key}", key=key, line=line, source=name)
            parsed.append(v)
        _check_duplicates(records, key, line, name, lines)
        records[key] = parsed
        lines[key] = line
    frame = pd.DataFrame(
        [(e, y, *v) for (e, y), v in records.items()], columns=list(SCHEMAS["external"])
    )
    return _finish(frame, "external")


_PARSERS = {
    "lsci": _parse_lsci,
    "lsbci": _parse_lsbci,
    "plsci": _parse_plsci,
    "classification": _parse_classification,
    "external": _parse_external,
}

_DTYPES = {
    "economy": object, "economy_a": object, "economy_b": object, "port_id": object, "name": object,
    "region": object, "year": np.int64, "sids": bool, "ldc": bool, "lldc": bool,
}


def _finish(frame: pd.DataFrame, kind: str) -> pd.DataFrame:
    for col in frame.columns:
        frame[col] = frame[col].astype(_DTYPES.get(col, np.float64))
    return frame.sort_values(list(KEYS[kind]), kind="mergesort").reset_index(drop=True)


def empty_table(kind: str) -> pd.DataFrame:
    return _finish(pd.DataFrame({c: [] for c in SCHEMAS[kind]}), kind)


# --------------------------------------------------------------------------- writing

def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (float, np.floating)):
        return "" if math.isnan(value) else repr(float(value))
    return str(value)


def write_table(kind: str, table: pd.DataFrame, dest: IO[str] | str | Path | None = None) -> str:
    """Serialize a table in its CSV schema; floats use shortest round-trip repr.

    Returns the CSV text, and also writes it to ``dest`` when given.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    cols = list(SCHEMAS[kind])
    writer.writerow(cols)
    for row in table[cols].itertuples(index=False, name=None):
        writer.writerow([_fmt(v) for v in row])
    text = buf.getvalue()
    if isinstance(dest, (str, Path)):
        Path(dest).write_text(text, encoding="utf-8", newline="")
    elif dest is not None:
        dest.write(text)
    return text


def write_bundle(bundle: DataBundle, directory: str | Path) -> dict[str, Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = {}
    for kind in KINDS:
        path = directory / FILENAMES[kind]
        write_table(kind, getattr(bundle, kind), path)
        written[kind] = path
    return written


# --------------------------------------------------------------------------- bundle

def _indicator_economies(lsci, lsbci, plsci) -> list[tuple[str, str]]:
    refs = []
    refs += [(e, "lsci") for e in lsci["economy"]]
    refs += [(e, "lsbci") for e in lsbci["economy_a"]]
    refs += [(e, "lsbci") for e in lsbci["economy_b"]]
    refs += [(e, "plsci") for e in plsci["economy"]]
    return refs


def validate_bundle(
    lsci: pd.DataFrame,
    lsbci: pd.DataFrame,
    plsci: pd.DataFrame,
    classification: pd.DataFrame,
    external: pd.DataFrame | None = None,
    *,
    provenance: Mapping[str, object] | None = None,
) -> DataBundle:
    """Cross-check the tables and freeze them into a :class:`DataBundle`.

    Raises UnknownEconomy for the alphabetically first indicator economy that
    has no classification row. Coverage gaps are kept as they are.
    """
    if external is None:
        external = empty_table("external")
    known = set(classification["economy"])
    unknown = sorted({(e, t) for e, t in _indicator_economies(lsci, lsbci, plsci) if e not in known})
    if unknown:
        raise UnknownEconomy(*unknown[0])

    keys = pd.concat(
        [
            lsci[["economy", "year"]],
            lsbci[["economy_a", "year"]].rename(columns={"economy_a": "economy"}),
            lsbci[["economy_b", "year"]].rename(columns={"economy_b": "economy"}),
            plsci[["economy", "year"]],
        ],
        ignore_index=True,
    ).drop_duplicates()
    year_counts = keys.groupby("year")["economy"].nunique().sort_index()
    year_counts.name = "economies"
    if len(year_counts):
        year_range = (int(year_counts.index.min()), int(year_counts.index.max()))
    else:
        year_range = (0, -1)

    prov = dict(provenance or {})
    prov.setdefault("row_counts", {k: int(len(t)) for k, t in zip(KINDS, (lsci, lsbci, plsci, classification, external))})
    return DataBundle(
        lsci=lsci, lsbci=lsbci, plsci=plsci, classification=classification, external=external,
        year_range=year_range, year_counts=year_counts, provenance=prov,
    )


def load_bundle(directory: str | Path, *, year_range: tuple[int, int] | None = DEFAULT_YEAR_RANGE) -> DataBundle:
    """Load the five CSVs from ``directory``; ``external.csv`` is optional."""
    directory = Path(directory)
    tables = {}
    files = {}
    for kind in KINDS:
        path = directory / FILENAMES[kind]
        if not path.is_file():
            if kind == "external":
                tables[kind] = empty_table(kind)
                continue
            raise SchemaMismatch(f"required input file {FILENAMES[kind]} not found", str(path))
        raw = path.read_bytes()
        tables[kind] = load_dataset(kind, raw, year_range=year_range, name=str(path))
        files[FILENAMES[kind]] = {"path": str(path), "sha256": hashlib.sha256(raw).hexdigest(), "rows": len(tables[kind])}
    return validate_bundle(**tables, provenance={"files": files})


# --------------------------------------------------------------------------- fixture

FIXTURE_STREAM = 0xF1C7
FIXTURE_FIRST_YEAR = 2006
LPI_WAVE_OFFSETS = (1, 4, 6, 8, 10, 12, 16)  # 2007, 2010, 2012, ... 2022
MAX_PORTS = 6


def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))


def generate_fixture(n_economies: int, n_years: int, seed: int) -> DataBundle:
    """Deterministic synthetic bundle shaped like the UNCTAD data.

    Economies get a latent connectivity level; SIDS, LDC and LLDC economies are
    shifted down. LSCI is log-normal in that level, bilateral links are drawn per
    unordered pair and year with a logistic link probability, each economy owns
    1-6 ports with one dominant gateway, and the external covariates track the
    latent level. A few LSCI and port rows are dropped so the panel is mildly
    unbalanced.
    """
    if n_economies < 4:
        raise InvalidConfig(f"n_economies must be >= 4, got {n_economies}")
    if n_years < 2:
        raise InvalidConfig(f"n_years must be >= 2, got {n_years}")
    last = FIXTURE_FIRST_YEAR + n_years - 1
    if last > DEFAULT_YEAR_RANGE[1]:
        raise InvalidConfig(f"n_years must be <= {DEFAULT_YEAR_RANGE[1] - FIXTURE_FIRST_YEAR + 1}")

    rng = stream(seed, FIXTURE_STREAM)
    n = n_economies
    codes = [f"E{i:03d}" for i in range(1, n + 1)]
    years = np.arange(FIXTURE_FIRST_YEAR, last + 1)

    n_sids = max(1, math.ceil(0.25 * n))
    perm = rng.permutation(n)
    sids = np.zeros(n, dtype=bool)
    sids[perm[:n_sids]] = True
    ldc = rng.random(n) < 0.2
    lldc = (~sids) & (rng.random(n) < 0.1)
    region_idx = rng.integers(0, len(REGIONS), size=n)
    classification = pd.DataFrame({
        "economy": codes,
        "name": [f"Economy {c[1:]}" for c in codes],
        "sids": sids, "ldc": ldc, "lldc": lldc,
        "region": [REGIONS[i] for i in region_idx],
    })

    level = rng.standard_normal(n) - 1.0 * sids - 0.5 * ldc - 1.5 * lldc
    t = (years - FIXTURE_FIRST_YEAR).astype(float)

    # LSCI
    eps = rng.standard_normal((n, len(years)))
    lsci_vals = np.exp(2.5 + 0.9 * level[:, None] + 0.02 * t[None, :] + 0.1 * eps)
    keep = rng.random((n, len(years))) >= 0.03
    lsci_rows = [
        (codes[i], int(years[j]), round(float(lsci_vals[i, j]), 2))
        for i in range(n) for j in range(len(years)) if keep[i, j]
    ]

    # LSBCI on unordered pairs
    ia, ib = np.triu_indices(n, k=1)
    lsbci_rows = []
    for j, yr in enumerate(years):
        p_link = _sigmoid(level[ia] + level[ib] + 1.0 + 0.03 * t[j])
        linked = rng.random(len(ia)) < p_link
        noise = rng.standard_normal(len(ia))
        value = 0.8 * _sigmoid(0.6 * (level[ia] + level[ib]) + 0.3 * noise - 0.5)
        for a, b, v in zip(ia[linked], ib[linked], value[linked]):
            lsbci_rows.append((codes[a], codes[b], int(yr), round(float(v), 4)))

    # ports
    n_ports = np.clip(np.round(2.0 + 1.2 * level + 0.7 * rng.standard_normal(n)), 1, MAX_PORTS).astype(int)
    plsci_rows = []
    for i in range(n):
        port_effect = -np.sort(rng.exponential(1.0, size=n_ports[i]))
        port_effect -= port_effect[0]
        for k in range(n_ports[i]):
            port = f"{codes[i]}-P{k + 1}"
            eps_p = rng.standard_normal(len(years))
            vals = np.exp(1.0 + 0.8 * level[i] + port_effect[k] + 0.1 * eps_p)
            zero = rng.random(len(years)) < 0.02
            gone = rng.random(len(years)) < 0.02
            for j, yr in enumerate(years):
                if gone[j] and k > 0:
                    continue
                v = 0.0 if (zero[j] and k > 0) else round(float(vals[j]), 3)
                plsci_rows.append((port, codes[i], int(yr), v))

    # external covariates
    ext_rows = []
    shock = rng.standard_normal(n)
    for i in range(n):
        e = rng.standard_normal((4, len(years)))
        gdp = np.exp(9.0 + 0.8 * level[i] + 0.03 * t + 0.3 * shock[i] + 0.05 * e[0])
        trade = np.exp(4.0 - 0.3 * level[i] + 0.4 * sids[i] + 0.1 * e[1])
        lpi = np.clip(2.9 + 0.4 * level[i] + 0.15 * e[2], 1.0, 5.0)
        freight = np.exp(1.6 - 0.3 * level[i] + 0.2 * e[3])
        for j, yr in enumerate(years):
            off = int(yr - FIXTURE_FIRST_YEAR)
            ext_rows.append((
                codes[i], int(yr), round(float(gdp[j]), 2), round(float(trade[j]), 3),
                round(float(lpi[j]), 3) if off in LPI_WAVE_OFFSETS else math.nan,
                round(float(freight[j]), 3) if 10 <= off <= 15 else math.nan,
            ))

    tables = {
        "lsci": _finish(pd.DataFrame(lsci_rows, columns=list(SCHEMAS["lsci"])), "lsci"),
        "lsbci": _finish(pd.DataFrame(lsbci_rows, columns=list(SCHEMAS["lsbci"])), "lsbci"),
        "plsci": _finish(pd.DataFrame(plsci_rows, columns=list(SCHEMAS["plsci"])), "plsci"),
        "classification": _finish(classification, "classification"),
        "external": _finish(pd.DataFrame(ext_rows, columns=list(SCHEMAS["external"])), "external"),
    }
    for kind in ("lsbci", "lsci", "plsci", "external", "classification"):
        if len(tables[kind]) == 0:
            tables[kind] = empty_table(kind)
    return validate_bundle(
        **tables,
        provenance={"fixture": {"n_economies": n_economies, "n_years": n_years, "seed": int(seed)}},
    )
