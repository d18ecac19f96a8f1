# # Scan campaigns from the command line
#
# The ``dislocated-dirac`` command writes every result as a table: CSV with
# a ``# schema=v1`` line and a header, or JSON. Long scans stream their
# rows, so an interrupted campaign can continue with ``--resume``.

import csv
import io
import subprocess
import sys
import tempfile
from pathlib import Path


def cli(*args):
    out = subprocess.run([sys.executable, "-m", "dislocated_dirac", *args],
                         capture_output=True, text=True)
    return out.returncode, out.stdout, out.stderr


code, out, _ = cli("params", "--m", "0", "--z", "0+0.5i")
print("params exit code", code)
print(out[:200], "...")

# Domain errors map to exit code 2 with a message on stderr.

print(cli("params", "--m", "1", "--z", "1+1i")[::2])

# A pseudospectrum scan, cut short and resumed. Negative range ends need
# the ``--grid=...`` spelling so that they are not read as options.

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "scan.csv"
    grid = "--grid=-6:6:5,-1.5:1.5:4"
    cli("pseudospec", "--m", "1", grid, "--format", "csv", "--out", str(path))
    full = path.read_text()
    path.write_text("".join(full.splitlines(keepends=True)[:8]))  # pretend we were interrupted
    cli("pseudospec", "--m", "1", grid, "--format", "csv", "--out", str(path), "--resume")
    print("resumed output identical:", path.read_text() == full)
    rows = list(csv.DictReader(io.StringIO("".join(full.splitlines(keepends=True)[1:]))))
    print("first row:", {k: rows[0][k] for k in ("re", "im", "lower", "upper", "in_pseudospec", "region")})

# Real eigenvalues of the step potential.

print(cli("step", "--m", "1", "--a", "1", "--b", "1", "--window", "5:9", "--format", "csv")[1])
