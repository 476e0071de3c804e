"""Table of |z_a dS/dz_a - c_T(a)| at z_i = q^i, q = 10^k, for every tableau of a shape."""
import argparse
import csv
import sys

import numpy as np

from schubert_lab.bethe import glued_critical_point
from schubert_lab.combinatorics import content_vector, enumerate_syt, parse_partition


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("mu", type=parse_partition)
    ap.add_argument("--r", type=int, default=3)
    ap.add_argument("--decades", type=int, default=4)
    args = ap.parse_args()
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["tableau", "q", "a", "error"])
    n = sum(args.mu)
    for T in enumerate_syt(args.mu):
        c = np.array(content_vector(T))
        for k in range(1, args.decades + 1):
            z = np.array([(10.0 ** k) ** i for i in range(1, n + 1)])
            cp = glued_critical_point(T, z, args.r)
            for a, e in enumerate(np.abs(z * cp.eigenvalues() - c), start=1):
                w.writerow([str(T), f"1e{k}", a, f"{e:.6e}"])


if __name__ == "__main__":
    main()
