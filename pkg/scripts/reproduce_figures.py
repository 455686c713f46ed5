"""Write CSV and SVG for every figure preset into a directory (default: figures/)."""
import argparse
import time
from pathlib import Path

from pulsedqubit import harness, svgplot


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("out", nargs="?", default="figures")
    ap.add_argument("--all-overlaps", action="store_true")
    ap.add_argument("--with-text-variants", action="store_true", help="also run the theta=pi variants of fig1")
    args = ap.parse_args()

    names = list(harness.PRESETS if args.with_text_variants else harness.FIGURE_PRESETS)
    out = Path(args.out)
    start = time.perf_counter()
    for name in names:
        spec = harness.preset_spec(name, all_overlaps=args.all_overlaps)
        for path in harness.run(spec, out):
            svgplot.plot(path, path.with_suffix(".svg"))
            print(path)
    print(f"{len(names)} presets in {time.perf_counter() - start:.1f}s")


if __name__ == "__main__":
    main()
