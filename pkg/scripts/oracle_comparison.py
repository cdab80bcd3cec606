"""Exact-root energies against the shooting oracle, with grid-doubling drift."""
from cesolve import oracle, spectrum
from cesolve.model import PhysicalParams


def main(v1=-2.0, v2_values=(-0.5, 0.0, 0.5), n_max=3):
    print("V2     n  E_exact                 E_oracle                rel_diff   drift")
    for v2 in v2_values:
        p = PhysicalParams(v1=v1, v2=v2)
        cfg = oracle.OracleConfig.for_params(p, n_max)
        coarse = oracle.eigenvalues_numeric(p, n_max, cfg)
        fine = oracle.eigenvalues_numeric(p, n_max, cfg.refined())
        for ex, a, b in zip(spectrum.bound_states(p, n_max), coarse, fine):
            rel = abs(ex.energy - b.energy) / abs(b.energy)
            drift = abs(a.energy - b.energy) / abs(b.energy)
            print(f"{v2:+.2f}  {ex.n}  {ex.energy:.17g}  {b.energy:.17g}  {rel:.2e}   {drift:.2e}")


if __name__ == "__main__":
    main()
