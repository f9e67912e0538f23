"""Write curve, level and SVG files for both figure settings into one directory."""
import argparse
import sys

from susy_lab import cli


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="figures")
    ap.add_argument("--points", type=int, default=None)
    args = ap.parse_args()
    for name in ("A1", "A2"):
        argv = ["figure", name, "--out", args.out]
        if args.points:
            argv += ["--points", str(args.points)]
        code = cli.main(argv)
        if code:
            return code
        print(f"figure {name} written to {args.out}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
