"""File formats: the one-column data reader, versioned CSV writers, JSON schemas."""
import csv
import io
import json
import math
from importlib import resources

import numpy as np

from .errors import DataFileError

MAX_REPORTED_ROWS = 10
FIT_FORMAT = "tmethod.fit.v1"
CONVERGENCE_FORMAT = "tmethod.convergence.v1"


def parse_data_file(path):
    """Read one numeric value per row; a single non-numeric header row is allowed.

    Blank lines are skipped. Rows that are non-numeric, non-finite, or carry
    more than one field are collected (up to 10) and reported together.
    """
    with open(path, newline="") as fh:
        text = fh.read()
    return parse_data_text(text, source=str(path))


def parse_data_text(text, source="<data>"):
    values, bad = [], []
    header_allowed = True
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        fields = [f.strip() for f in line.split(",")]
        if fields and fields[-1] == "":
            fields = fields[:-1]
        if len(fields) != 1:
            bad.append((lineno, f"expected one column, got {len(fields)}"))
            header_allowed = False
            continue
        try:
            v = float(fields[0])
        except ValueError:
            if header_allowed:
                header_allowed = False
                continue
            bad.append((lineno, f"not a number: {fields[0]!r}"))
            continue
        header_allowed = False
        if not math.isfinite(v):
            bad.append((lineno, f"non-finite value {fields[0]!r}"))
            continue
        values.append(v)
    if bad:
        shown = bad[:MAX_REPORTED_ROWS]
        where = ", ".join(f"row {r}: {why}" for r, why in shown)
        more = f" (+{len(bad) - len(shown)} more)" if len(bad) > len(shown) else ""
        raise DataFileError(f"{source}: {where}{more}", rows=shown)
    if not values:
        raise DataFileError(f"{source}: no numeric data")
    return values


def write_csv(path_or_buf, fmt, header, rows):
    """CSV with a leading ``# format=<fmt>`` line, then a header row."""
    own = isinstance(path_or_buf, (str, bytes)) or hasattr(path_or_buf, "__fspath__")
    fh = open(path_or_buf, "w", newline="") if own else path_or_buf
    try:
        fh.write(f"# format={fmt}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    finally:
        if own:
            fh.close()


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, np.integer):
        return int(v)
    if v is None:
        return ""
    return v


def read_csv(path_or_text):
    """Parse a CSV written by :func:`write_csv`. Returns (format, header, rows)."""
    if "\n" in str(path_or_text):
        text = str(path_or_text)
    else:
        with open(path_or_text, newline="") as fh:
            text = fh.read()
    first, _, rest = text.partition("\n")
    if not first.startswith("# format="):
        raise DataFileError("missing '# format=' line")
    rows = list(csv.reader(io.StringIO(rest)))
    return first[len("# format="):].strip(), rows[0], rows[1:]


def dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=True) + "\n"


def load_schema(name):
    return json.loads(resources.files("tmethod.schemas").joinpath(f"{name}.schema.json").read_text())


def validate(obj, name):
    import jsonschema
    jsonschema.validate(obj, load_schema(name))
