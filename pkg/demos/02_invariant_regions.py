"""Invariant regions of the constrained Riemann solvers.

A box {v1 <= v <= v2, w1 <= w <= w2} in Riemann-invariant coordinates is
invariant for the unconstrained solver, but the flux constraint can push
traces out of it.  The function h_q(v) = p(q/v) + v (the w-level of the
isoline rho*v = q) decides everything: RS1 keeps a box invariant iff
h_q >= w2 at both velocity endpoints; RS2 iff h_q(v1) >= w2 and h_q stays
above w1 on the whole interval.

We plot h_q, two boxes (one invariant for RS1, one not), and the escaping
trace produced by the counterexample generator.
"""

import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from arflux import (
    CounterexampleKind,
    DomainBox,
    PressureLaw,
    h_q,
    is_invariant_rs1,
    is_invariant_rs2,
    counterexample_state,
    sample,
    solve_rs1,
    vbar,
)

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

p = PressureLaw(gamma=1.0)
q = 3.0
vb = vbar(q, p)
print(f"h_q minimizer: vbar = {vb:.7f} (= sqrt(q) for gamma = 1)")

good = DomainBox(0.8, 4.0, 2.0, 4.5)
bad = DomainBox(1.0, 4.0, 2.0, 4.2)
for box in (good, bad):
    print(f"box v in [{box.v1}, {box.v2}], w in [{box.w1}, {box.w2}]: "
          f"RS1 invariant = {is_invariant_rs1(box, q, p)}, "
          f"RS2 invariant = {is_invariant_rs2(box, q, p)}")

s = counterexample_state(bad, q, p, CounterexampleKind.RS1_LEFT)
print(f"counterexample for the second box: (rho, v) = ({s.rho}, {s.v})")
fan = solve_rs1(s, s, q, p)
trace = sample(fan, 0.0, side="left")
print(f"its RS1 left trace at x = 0: v = {trace.v:.6f} < v1 = {bad.v1} -> exits")

v = np.linspace(0.5, 5.0, 400)
fig, ax = plt.subplots(figsize=(7, 5))
ax.plot(v, [h_q(float(x), q, p) for x in v], "k", label=r"$h_q(v)$")
ax.axvline(vb, color="k", ls=":", lw=0.8)
for box, color, name in ((good, "tab:green", "invariant"),
                         (bad, "tab:red", "not invariant")):
    ax.add_patch(plt.Rectangle((box.v1, box.w1), box.v2 - box.v1,
                               box.w2 - box.w1, fill=False, edgecolor=color,
                               lw=1.8, label=f"box ({name} for RS1)"))
ax.plot([s.v], [s.v + p(s.rho)], "rv", label="counterexample state")
ax.plot([trace.v], [trace.v + p(trace.rho)], "rx", ms=9,
        label="its trace at $x=0^-$")
ax.set_xlabel("v")
ax.set_ylabel("w = v + p(rho)")
ax.legend(loc="upper left", fontsize=8)
ax.set_title(f"h_q and invariant boxes, q = {q}")
fig.tight_layout()
path = os.path.join(OUT, "invariant_regions.png")
fig.savefig(path, dpi=130)
print(f"saved {path}")
