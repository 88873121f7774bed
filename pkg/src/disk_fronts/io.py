"""CSV, JSON, key=value and gnuplot writers used by the command line."""

import csv
import io
import json
import math

from . import __version__


def _cell(x):
    if isinstance(x, float):
        return "nan" if math.isnan(x) else repr(x)
    return str(x)


def csv_text(columns, rows):
    """CSV with a header line; floats use the shortest round-trip representation."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(x) for x in row])
    return buf.getvalue()


def json_text(columns, rows, meta):
    """Columns as arrays under ``data`` plus a ``meta`` header."""
    meta = dict(meta, version=__version__)
    data = {c: [] for c in columns}
    for row in rows:
        for c, x in zip(columns, row):
            data[c].append(None if isinstance(x, float) and math.isnan(x) else x)
    return json.dumps({"meta": meta, "columns": list(columns), "data": data}, indent=1) + "\n"


def report_text(fields):
    """Flat ``key=value`` lines."""
    return "".join(f"{k}={_cell(v)}\n" for k, v in fields.items())


def parse_config(text):
    """Parse a ``key=value`` config file; ``#`` starts a comment."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


_PREAMBLE = """set datafile separator ','
set key autotitle columnhead
"""


def gnuplot_front(data_file, title):
    return (_PREAMBLE + f"set title '{title}'\nset size ratio -1\nset parametric\n"
            "set trange [0:2*pi]\nset xrange [-1.05:1.05]\nset yrange [-1.05:1.05]\n"
            f"plot cos(t), sin(t) lw 1 lc rgb 'black' notitle, \\\n"
            f"     '{data_file}' using 2:3 with dots lc rgb 'blue' notitle\n")


def gnuplot_series(data_file, title):
    return (_PREAMBLE + f"set title '{title}'\nset xlabel 't'\nset ylabel 'length'\n"
            f"plot '{data_file}' using 1:2 with lines title 'simulated', \\\n"
            f"     '' using 1:3 with lines title 'series model', \\\n"
            f"     '' using 1:4 with lines dt 2 title 'linear law'\n")


def gnuplot_density(data_file, title):
    return (_PREAMBLE + f"set title '{title}'\nset xlabel 'r'\nset ylabel 'length in annulus'\n"
            "set style fill solid 0.4\n"
            f"plot '{data_file}' using (($1+$2)/2):3:($2-$1) with boxes title 'simulated', \\\n"
            f"     '' using (($1+$2)/2):4 with linespoints title 'model'\n")
