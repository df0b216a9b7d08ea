"""Table and sample-file formats shared by the command line tools.

CSV tables start with ``# key=value`` lines echoing the run configuration,
followed by a header row and data rows. JSON tables are
``{"config": {...}, "columns": [...], "rows": [[...], ...]}``. Floats are
written with ``repr`` so that every file reads back bit-exactly.
"""

from __future__ import annotations

import csv
import io
import json
import math

from .errors import ConfigError

CURVE_COLUMNS = ["beta", "B", "z_star", "magnetization", "susceptibility"]
DENSITY_COLUMNS = ["x", "f", "unnormalized_density", "normalized_density"]
SPIN_LAW_COLUMNS = ["s", "probability"]


def _plain(v):
    """numpy scalars -> Python scalars."""
    return v.item() if hasattr(v, "item") and not isinstance(v, (list, tuple)) else v


def _fmt(v):
    v = _plain(v)
    if isinstance(v, bool) or v is None:
        return json.dumps(v)
    if isinstance(v, float):
        return "inf" if math.isinf(v) and v > 0 else repr(v)
    return str(v)


def _parse(s: str):
    s = s.strip()
    if s in ("inf", "-inf", "nan"):
        return float(s)
    for conv in (int, float):
        try:
            return conv(s)
        except ValueError:
            pass
    try:
        return json.loads(s)
    except ValueError:
        return s


def _jsonable(v):
    v = _plain(v)
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return v


def write_table(config: dict, columns, rows, fmt: str = "csv") -> str:
    if fmt == "json":
        return (
            json.dumps(
                {
                    "config": {k: _jsonable(v) for k, v in config.items()},
                    "columns": list(columns),
                    "rows": [[_jsonable(v) for v in r] for r in rows],
                },
                indent=1,
            )
            + "\n"
        )
    if fmt != "csv":
        raise ConfigError(f"unknown format {fmt!r}")
    buf = io.StringIO()
    for k, v in config.items():
        buf.write(f"# {k}={_fmt(v)}\n")
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(columns)
    for r in rows:
        wr.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def read_table(text: str) -> tuple[dict, list[str], list[list]]:
    """Inverse of :func:`write_table` for either format."""
    if text.lstrip().startswith("{"):
        d = json.loads(text)
        cfg = {k: (float(v) if v in ("inf", "-inf", "nan") else v) for k, v in d["config"].items()}
        rows = [[float(v) if v in ("inf", "-inf", "nan") else v for v in r] for r in d["rows"]]
        return cfg, d["columns"], rows
    cfg = {}
    body = []
    for line in text.splitlines():
        if line.startswith("# "):
            k, _, v = line[2:].partition("=")
            cfg[k] = _parse(v)
        elif line.strip():
            body.append(line)
    rows = list(csv.reader(body))
    if not rows:
        raise ConfigError("table has no header row")
    return cfg, rows[0], [[_parse(v) for v in r] for r in rows[1:]]


def write_samples(config: dict, samples) -> str:
    """One integer S_N per line after ``# key=value`` parameter lines."""
    head = "".join(f"# {k}={_fmt(v)}\n" for k, v in config.items())
    return head + "".join(f"{int(s)}\n" for s in samples)


def read_samples(text: str) -> tuple[dict, list[int]]:
    cfg, out = {}, []
    for line in text.splitlines():
        if line.startswith("# "):
            k, _, v = line[2:].partition("=")
            cfg[k] = _parse(v)
        elif line.strip():
            out.append(int(line))
    return cfg, out
