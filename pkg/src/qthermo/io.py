"""CSV / JSON serialization and the flat ``key=value`` config format."""

import csv
import dataclasses
import json
from pathlib import Path

import numpy as np

from .errors import AnalysisError, ConfigError
from .protocol import ExperimentConfig, QcgfTable, SchemeKind


def fmt(x):
    """17 significant digits, locale independent."""
    return f"{float(x):.17g}"


def _write_rows(path, header, rows):
    with open(path, "w", newline="", encoding="ascii") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")
    return Path(path)


def write_qcgf_csv(table, path):
    return _write_rows(path, ["chi", "re_g", "im_g"], zip(table.grid, table.values.real, table.values.imag))


def read_qcgf_csv(path, scheme=SchemeKind.INTERNAL_ENERGY, config=None):
    """Load a table written by :func:`write_qcgf_csv`.

    Malformed input raises :class:`AnalysisError` naming the line and column.
    ``config`` (if given) supplies mode/shots; ``chi_max`` and ``dchi`` are
    taken from the grid.
    """
    rows = []
    with open(path, newline="", encoding="ascii") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["chi", "re_g", "im_g"]:
            raise AnalysisError(f"{path}: line 1: expected header chi,re_g,im_g, got {header}")
        for line_no, row in enumerate(reader, start=2):
            if len(row) != 3:
                raise AnalysisError(f"{path}: line {line_no}: expected 3 columns, got {len(row)}")
            values = []
            for col, (name, cell) in enumerate(zip(header, row), start=1):
                try:
                    values.append(float(cell))
                except ValueError:
                    raise AnalysisError(
                        f"{path}: line {line_no}, column {col} ({name}): cannot parse {cell!r}"
                    ) from None
            rows.append(values)
    if len(rows) < 3:
        raise AnalysisError(f"{path}: line {len(rows) + 2}: need at least 3 data rows, file ends early")
    data = np.array(rows)
    grid = data[:, 0]
    steps = np.diff(grid)
    if len(grid) % 2 == 0 or not np.allclose(grid, -grid[::-1], atol=1e-9) or not np.allclose(steps, steps[0]):
        raise AnalysisError(f"{path}: chi column is not a uniform grid symmetric about zero")
    # chi_max / n reproduces the writer's step exactly; a grid difference may not
    dchi = float(grid[-1]) / (len(grid) // 2)
    cfg = config or ExperimentConfig()
    cfg = cfg.replace(chi_max=float(grid[-1]), dchi=dchi)
    return QcgfTable(grid, data[:, 1] + 1j * data[:, 2], SchemeKind.parse(scheme), cfg)


def write_qpdf_csv(qpdf_table, path):
    return _write_rows(path, ["f", "p"], zip(qpdf_table.energies, qpdf_table.density))


def write_tmp_csv(dist, path):
    rows = [(o.du, o.q, o.w, o.probability) for o in dist.outcomes]
    return _write_rows(path, ["du", "q", "w", "prob"], rows)


AVERAGES_HEADER = ["p", "du", "du_err", "w", "w_err", "q", "q_err", "tmp_du", "tmp_w", "tmp_q"]


def write_averages_csv(rows, path):
    return _write_rows(path, AVERAGES_HEADER, ([r[k] for k in AVERAGES_HEADER] for r in rows))


def write_json(obj, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return Path(path)


_FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(ExperimentConfig)}


def parse_config_text(text, source="<config>"):
    """Parse ``key = value`` lines (``#`` starts a comment) into config overrides."""
    out = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}: line {line_no}: expected key=value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _FIELD_TYPES:
            raise ConfigError(f"{source}: line {line_no}: unknown key {key!r}", field=key)
        cast = _FIELD_TYPES[key]
        try:
            out[key] = cast(value)
        except ValueError:
            raise ConfigError(f"{source}: line {line_no}: bad value for {key}: {value!r}", field=key) from None
    return out


def load_config_file(path):
    return parse_config_text(Path(path).read_text(encoding="utf-8"), str(path))
