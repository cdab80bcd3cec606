"""How many fixed-point steps the n_eff iteration needs to reach 1e-3 in energy.

For each V2 on the iteration-figure sweep (V1 = -2, n = 2) prints the
relative energy error of iterates k = 1..3 and the first k with error
below 1e-3.
"""
import numpy as np

from cesolve import spectrum
from cesolve.model import PhysicalParams


def main(n=2, target=1e-3):
    print("V2     k=1        k=2        k=3        k_needed")
    for v2 in np.round(np.arange(-1.0, 1.0001, 0.1), 10):
        p = PhysicalParams(v1=-2.0, v2=float(v2))
        exact = spectrum.bound_states(p, n)[n - 1].energy
        its = spectrum.neff_iterate(p, n, k_max=200, tol=0.0).iterates
        rel = [abs(e / exact - 1.0) for _, _, e in its]
        need = next((k for k, r in enumerate(rel) if r < target), None)
        cols = "  ".join(f"{r:.3e}" for r in (rel + [rel[-1]] * 3)[1:4])
        print(f"{v2:+.1f}  {cols}  {need}")


if __name__ == "__main__":
    main()
