"""Write one agreement certificate per shape in the given boxes, plus a summary line per instance."""
import argparse
import json
import time
from pathlib import Path

from schubert_lab.combinatorics import fits_box, partitions_of
from schubert_lab.config import RunConfig
from schubert_lab.labelling import verify_agreement


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--boxes", default="2x3,3x3", help="comma-separated RxC boxes")
    ap.add_argument("--max-n", type=int, default=5)
    ap.add_argument("--offset", type=float, default=0.0, help="z = (offset, offset+1, ...)")
    ap.add_argument("--out", default="certificates")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cfg = RunConfig()
    for box in args.boxes.split(","):
        r, c = (int(x) for x in box.split("x"))
        d = r + c
        for n in range(1, args.max_n + 1):
            for mu in partitions_of(n):
                if not fits_box(mu, r, d):
                    continue
                z = [args.offset + i for i in range(n)]
                t0 = time.perf_counter()
                cert = verify_agreement(z, mu, r, d, cfg)
                name = f"r{r}_d{d}_mu{'-'.join(map(str, mu))}.json"
                (out / name).write_text(json.dumps(cert.to_json(), indent=2, sort_keys=True) + "\n")
                print(f"{box} mu={mu} points={len(cert.points)} passed={cert.passed} "
                      f"({time.perf_counter() - t0:.1f}s)")


if __name__ == "__main__":
    main()
