"""Analyse every input file under inputs/ and print a one-line summary each.

    python3 scripts/run_examples.py [--ranks] [--res DEG]
"""
import argparse
import glob
import os
import time

from expsub.expansivity import AnalysisConfig, analyze
from expsub.formats import read_input

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

# The integer Groebner bases of this ideal swell past a few hundred pairs in
# directions on its tie circles, so it runs coarse with a small pair budget
# and reports the directions it could not decide.
OVERRIDES = {"strict_rank.txt": {"angular_res_deg": 5.0, "gb_budget": 300}}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--ranks", action="store_true", help="also run the rank search (slow in 3D)")
    ap.add_argument("--res", type=float, default=1.0, help="angular resolution in degrees")
    args = ap.parse_args()
    for path in sorted(glob.glob(os.path.join(ROOT, "inputs", "*.txt"))):
        spec = read_input(path)
        name = os.path.basename(path)
        opts = {"angular_res_deg": args.res, **OVERRIDES.get(name, {})}
        cfg = AnalysisConfig(param_map=spec.param_map, compute_ranks=args.ranks, **opts)
        t0 = time.time()
        rep = analyze(spec.target(), cfg)
        line = f"{name:18s} d={rep.ideal.dim} {rep.expansive.verdict:22s} N = {rep.n.describe()}"
        if rep.ranks is not None:
            line += f"  kdim={rep.ranks.kdim} exprk={rep.ranks.exprk}"
        if rep.undecided:
            line += f"  undecided={len(rep.undecided)}"
        print(f"{line}  ({time.time() - t0:.1f}s)", flush=True)


if __name__ == "__main__":
    main()
