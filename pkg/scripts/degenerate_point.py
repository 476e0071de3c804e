"""Watch the critical point of 1 2 / 3 5 / 4 collapse as z_5 approaches 5 with z = (1, 2, 3, 4, z_5).

At z_5 = 5 the marked points are symmetric about 3 and the point of the
intersection has y_1 = (u-3)^3, y_2 = u-3: every root sits on z_3, so the
root description breaks down although the subspace itself is regular.
"""
import numpy as np

from schubert_lab.bethe import MasterData, critical_point_from_y, marcus_construction
from schubert_lab.combinatorics import parse_tableau
from schubert_lab.errors import DegenerateCriticalPoint
from schubert_lab.labelling import subspace_eigenvalues


def main():
    T = parse_tableau("1 2 / 3 5 / 4")
    md = MasterData.for_shape(T.shape, 3)
    print(f"{'z5':>10} {'min |t - z3|':>14} {'scaled min sv':>14}  eigenvalues from X")
    for z5 in (6.0, 5.5, 5.1, 5.01, 5.001, 5.0001, 5.0):
        z = [1.0, 2.0, 3.0, 4.0, z5]
        mc = marcus_construction(T, z, 3)
        ev = np.round(subspace_eigenvalues(mc.subspace, z), 6)
        try:
            cp = critical_point_from_y(md, z, mc.y)
            gap = np.abs(cp.t - 3.0).min()
            print(f"{z5:>10} {gap:>14.3e} {cp.hessian_scaled_min_sv:>14.3e}  {ev}")
        except DegenerateCriticalPoint as exc:
            print(f"{z5:>10} {'-':>14} {'-':>14}  {ev}  ({exc})")
    print("y at z5 = 5:", [np.round(np.real(p.coeffs), 10).tolist() for p in mc.y])


if __name__ == "__main__":
    main()
