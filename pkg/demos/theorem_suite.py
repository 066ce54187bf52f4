"""Run every experiment at a size that finishes in a few seconds.

Pass ``--full`` for the exhaustive three-state corpus (several minutes).
"""

import argparse
import time

from homprofile.harness import DEPTH_INDEXED, THEOREMS, verify_theorem

ap = argparse.ArgumentParser()
ap.add_argument("--full", action="store_true")
args = ap.parse_args()
bounds = {"max_states": 3, "source_states": 4} if args.full else {"max_states": 2, "source_states": 3}

for name in THEOREMS:
    start = time.time()
    report = verify_theorem(name, {**bounds, "k": (1, 2, 3)} if name in DEPTH_INDEXED else bounds)
    print(f"{report.text().splitlines()[0]}  ({time.time() - start:.1f}s)")
