"""Run every bundled scenario through the command-line front end."""

import argparse
import sys
from importlib import resources

from risscatter.cli import main as cli_main


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results")
    ap.add_argument("--jobs", default="1")
    args = ap.parse_args()
    failed = 0
    for path in sorted(resources.files("risscatter").joinpath("scenarios").iterdir()):
        if path.name.endswith(".json"):
            print(f"== {path.name}")
            failed += cli_main(["run", "--config", str(path), "--out", args.out, "--jobs", args.jobs]) != 0
    sys.exit(1 if failed else 0)


if __name__ == "__main__":
    main()
