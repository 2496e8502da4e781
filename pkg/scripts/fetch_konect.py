"""Download the KONECT bipartite networks used by the matching regression.

Usage: python scripts/fetch_konect.py [name ...]

Each archive is unpacked under data/konect/<internal-name>/ so that the file
data/konect/<internal-name>/out.<internal-name> exists afterwards. The
acceptance suite looks there. Needs network access; nothing is fetched at
import or test time.
"""

from __future__ import annotations

import argparse
import io
import sys
import tarfile
import urllib.request
from pathlib import Path

DATA_DIR = Path(__file__).resolve().parent.parent / "data" / "konect"
URL = "http://konect.cc/files/download.tsv.{name}.tar.bz2"

# label -> KONECT internal name. The movielens entry is a best guess from the
# side sizes (7,601 x 4,009); the acceptance test checks sizes after parsing.
DATASETS = {
    "corporate-leadership": "brunson_corporate-leadership",
    "Unicode": "unicodelang",
    "UCforum": "opsahl-ucforum",
    "movielens-u-i": "movielens-10m_ui",
}


def fetch(internal: str, dest: Path = DATA_DIR) -> Path:
    dest.mkdir(parents=True, exist_ok=True)
    with urllib.request.urlopen(URL.format(name=internal), timeout=60) as resp:
        payload = resp.read()
    with tarfile.open(fileobj=io.BytesIO(payload), mode="r:bz2") as tar:
        tar.extractall(dest, filter="data")
    out = dest / internal / f"out.{internal}"
    if not out.exists():
        raise FileNotFoundError(f"archive for {internal} did not contain {out.name}")
    return out


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("names", nargs="*", metavar="name", help=f"labels to fetch, from {', '.join(DATASETS)} (default: all)")
    args = p.parse_args(argv)
    unknown = set(args.names) - set(DATASETS)
    if unknown:
        p.error(f"unknown dataset(s): {', '.join(sorted(unknown))}")
    failed = 0
    for label in args.names or DATASETS:
        internal = DATASETS[label]
        try:
            print(f"{label}: {fetch(internal)}")
        except Exception as exc:  # report and carry on with the rest
            print(f"{label}: failed ({exc})", file=sys.stderr)
            failed += 1
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
