#!/usr/bin/env python3
"""Convert the LINQS Cora release (cora.cites + cora.content) into the
plain edge-list / label formats this project consumes.

Usage: convert_cora.py <cora.cites> <cora.content> <out_dir>

Writes <out_dir>/cora.edges ("u v" per line, citations kept as undirected
edges; the loader deduplicates) and <out_dir>/cora.labels ("node<TAB>label").
"""

import sys
from pathlib import Path


def main() -> int:
    if len(sys.argv) != 4:
        print(__doc__, file=sys.stderr)
        return 1
    cites, content, out_dir = sys.argv[1], sys.argv[2], Path(sys.argv[3])
    out_dir.mkdir(parents=True, exist_ok=True)

    with open(cites) as f, open(out_dir / "cora.edges", "w") as out:
        for line in f:
            parts = line.split()
            if len(parts) == 2:
                out.write(f"{parts[0]} {parts[1]}\n")

    with open(content) as f, open(out_dir / "cora.labels", "w") as out:
        for line in f:
            parts = line.split()
            if len(parts) >= 2:
                out.write(f"{parts[0]}\t{parts[-1]}\n")

    print(f"wrote {out_dir}/cora.edges and {out_dir}/cora.labels")
    return 0


if __name__ == "__main__":
    sys.exit(main())
