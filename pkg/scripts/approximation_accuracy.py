"""Relative error of the tanh root approximation over the (n, w) grid.

Prints the worst error per branch and where it occurs, then the same
quantity restricted to |w| >= 1 and to w >= 0, to show where the error
concentrates.
"""
import numpy as np

from cesolve import spectrum


def main():
    rows = []
    for n in range(1, 9):
        for s in spectrum.trace_curve(n, -3.0, 3.0, 0.25):
            rows.append((n, s.w, s.rel_error))
    rows = np.array(rows)
    print("n  worst_rel_error  at_w")
    for n in range(1, 9):
        r = rows[rows[:, 0] == n]
        i = int(np.argmax(r[:, 2]))
        print(f"{n}  {r[i, 2]:.3e}        {r[i, 1]:+.2f}")
    for label, mask in (("|w| >= 1", np.abs(rows[:, 1]) >= 1), ("w >= 0", rows[:, 1] >= 0)):
        print(f"max over {label}: {rows[mask, 2].max():.3e}")
    print(f"max overall: {rows[:, 2].max():.3e}")


if __name__ == "__main__":
    main()
