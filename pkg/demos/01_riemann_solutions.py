"""Exact Riemann solutions with and without the flux constraint.

We solve the Riemann problem for the Aw-Rascle model with left state
(rho, v) = (4, 0.5), right state (1.5, 3) and pressure p(rho) = rho.
Both states lie on the same 1-Riemann invariant w = v + p(rho) = 4.5, so
the unconstrained solution is a single rarefaction.  Imposing the flux
bound rho*v <= 3 at x = 0 splits it: the conserving solver RS1 inserts a
stationary nonclassical shock, while the density-only solver RS2 jumps
to the 2-curve through the right state instead.
"""

import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from arflux import PressureLaw, StatePV, flux, sample, solve_classical, solve_rs1, solve_rs2

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

p = PressureLaw(gamma=1.0)
left, right, q = StatePV(4.0, 0.5), StatePV(1.5, 3.0), 3.0

fans = {
    "classical": solve_classical(left, right, p),
    "RS1 (conserves rho and y)": solve_rs1(left, right, q, p),
    "RS2 (conserves rho only)": solve_rs2(left, right, q, p),
}

for name, fan in fans.items():
    print(f"\n{name}:")
    for wave in fan.waves:
        print(f"  {wave.kind.value:>24s}  speeds [{wave.speed_lo:+.6f}, "
              f"{wave.speed_hi:+.6f}]  ->  (rho, v) = "
              f"({wave.right.rho:.6f}, {wave.right.v:.6f})")
    f0 = flux(sample(fan, 0.0), p)
    print(f"  flux at x = 0: rho*v = {f0.f1:.6f} (bound q = {q})")

xi = np.linspace(-5.0, 5.0, 2001)
fig, axes = plt.subplots(2, 1, figsize=(8, 7), sharex=True)
for name, fan in fans.items():
    states = [sample(fan, float(x)) for x in xi]
    axes[0].plot(xi, [s.rho for s in states], label=name)
    axes[1].plot(xi, [s.v for s in states], label=name)
axes[0].set_ylabel(r"density $\rho$")
axes[1].set_ylabel(r"velocity $v$")
axes[1].set_xlabel(r"self-similar variable $\xi = x/t$")
axes[0].legend()
axes[0].set_title(f"Riemann solutions, q = {q} at x = 0")
fig.tight_layout()
path = os.path.join(OUT, "riemann_solutions.png")
fig.savefig(path, dpi=130)
print(f"\nsaved {path}")
