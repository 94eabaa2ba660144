#!/usr/bin/env python3
"""Write the 3190-instance splice-junction set as `label, id, sequence` records.

The KEEL copy of the UCI splice-junction data ships inside the `keel-ds`
wheel on PyPI. KEEL drops the instance ids, so records are numbered
`KEEL-00001` onward in file order.

    python3 scripts/fetch_splice.py data/splice.data
"""
import glob
import subprocess
import sys
import tempfile
import zipfile

MEMBER = "keel_ds/data/balanced/raw/splice.dat"


def main(out_path):
    with tempfile.TemporaryDirectory() as tmp:
        subprocess.run(
            [sys.executable, "-m", "pip", "download", "--no-deps", "-q", "keel-ds", "-d", tmp],
            check=True,
        )
        wheel = glob.glob(f"{tmp}/keel_ds-*.whl")[0]
        text = zipfile.ZipFile(wheel).read(MEMBER).decode()

    rows = []
    for line in text.splitlines():
        if not line.strip() or line.startswith("@"):
            continue
        fields = [f.strip() for f in line.split(",")]
        rows.append((fields[-1], "".join(fields[:-1])))

    with open(out_path, "w") as out:
        for n, (label, seq) in enumerate(rows, start=1):
            out.write(f"{label},KEEL-{n:05d},{seq}\n")
    print(f"wrote {len(rows)} records to {out_path}", file=sys.stderr)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/splice.data")
