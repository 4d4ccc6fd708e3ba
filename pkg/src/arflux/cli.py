"""Command-line front end.

Subcommands:

* ``riemann``      - exact wave fans and sampled profiles for the
  classical and both constrained solvers.
* ``simulate``     - finite-volume run with CSV snapshots, conservation
  ledger, max-principle report and error-vs-exact summary.
* ``campaign``     - seeded random sweep of the four TV inequalities and
  the invariant-domain predicates; exit code 1 on any violation.
* ``domain-check`` - invariance predicates and counterexamples for one box.

Configuration is a flat ``key=value`` file ('#' comments); every key can
be overridden by the CLI flag of the same name.  Exit codes: 0 success,
1 property violation, 2 input/solver error.
"""

import argparse
import os
import sys
from typing import Dict, List, Optional

import numpy as np

from . import domains, fvm, riemann, tv
from .errors import ArfluxError
from .model import PressureLaw, StatePV

DEFAULTS: Dict[str, str] = {
    "gamma": "1",
    "q": "3",
    "left": "1.5,3",
    "right": "1.5,3",
    "scheme": "rs1",
    "dx": "0.002",
    "t_final": "0.2",
    "x_min": "-1",
    "x_max": "1",
    "out": "out",
    "seed": "42",
    "n": "10000",
    "output_times": "",
    "rs2_activation": "exceeds",
}

PRESETS: Dict[str, Dict[str, str]] = {
    "test1a": {"left": "1.5,3", "right": "1.5,3", "q": "3", "gamma": "1",
               "scheme": "rs1"},
    "test1b": {"left": "4,0.5", "right": "1.5,3", "q": "3", "gamma": "1",
               "scheme": "rs1"},
    "test2a": {"left": "1.5,3", "right": "1.5,3", "q": "3", "gamma": "1",
               "scheme": "rs2-freeze"},
    "test2b": {"left": "4,0.5", "right": "1.5,3", "q": "3", "gamma": "1",
               "scheme": "rs2-freeze"},
}


def fmt(x: float) -> str:
    return f"{x:.17g}"


def parse_config(path: str) -> Dict[str, str]:
    """Flat key=value file; '#' starts a comment; blank lines ignored."""
    cfg: Dict[str, str] = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {raw!r}")
            key, value = line.split("=", 1)
            cfg[key.strip()] = value.strip()
    return cfg


def serialize_config(cfg: Dict[str, str]) -> str:
    return "".join(f"{k}={v}\n" for k, v in cfg.items())


def _parse_state(text: str) -> StatePV:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"expected RHO,V, got {text!r}")
    return StatePV(float(parts[0]), float(parts[1]))


def build_config(args: argparse.Namespace) -> Dict[str, str]:
    """defaults < config file < preset < explicit flags."""
    cfg = dict(DEFAULTS)
    if getattr(args, "config", None):
        cfg.update(parse_config(args.config))
    if getattr(args, "preset", None):
        cfg.update(PRESETS[args.preset])
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = str(value)
    return cfg


def _write_csv(path: str, header: str, rows: List[List[float]]) -> None:
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(x if isinstance(x, str) else fmt(x) for x in row) + "\n")


def _write_fan(path: str, fan: riemann.WaveFan) -> None:
    rows = [[w.kind.value, fmt(w.speed_lo), fmt(w.speed_hi),
             fmt(w.left.rho), fmt(w.left.v), fmt(w.right.rho), fmt(w.right.v)]
            for w in fan.waves]
    if not rows:
        rows = [["constant", fmt(0.0), fmt(0.0),
                 fmt(fan.left.rho), fmt(fan.left.v),
                 fmt(fan.right.rho), fmt(fan.right.v)]]
    _write_csv(path, "kind,speed_lo,speed_hi,rho_left,v_left,rho_right,v_right", rows)


def _write_profile(path: str, fan: riemann.WaveFan, p: PressureLaw,
                   xi_lo: float, xi_hi: float, n_rays: int = 1001) -> None:
    rows = []
    for xi in np.linspace(xi_lo, xi_hi, n_rays):
        s = riemann.sample(fan, float(xi))
        w = s.v + p(s.rho)
        rows.append([float(xi), s.rho, s.v, s.rho * w, w])
    _write_csv(path, "xi,rho,v,y,w", rows)


def cmd_riemann(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    p = PressureLaw(float(cfg["gamma"]))
    q = float(cfg["q"])
    l, r = _parse_state(cfg["left"]), _parse_state(cfg["right"])
    out = cfg["out"]
    os.makedirs(out, exist_ok=True)
    fans = {
        "classical": riemann.solve_classical(l, r, p),
        "rs1": riemann.solve_rs1(l, r, q, p),
        "rs2": riemann.solve_rs2(l, r, q, p),
    }
    speeds = [w.speed_lo for fan in fans.values() for w in fan.waves] \
        + [w.speed_hi for fan in fans.values() for w in fan.waves]
    xi_lo = min(speeds, default=-1.0) - 1.0
    xi_hi = max(speeds, default=1.0) + 1.0
    for name, fan in fans.items():
        _write_fan(os.path.join(out, f"fan_{name}.csv"), fan)
        _write_profile(os.path.join(out, f"profile_{name}.csv"), fan, p, xi_lo, xi_hi)
    print(f"wrote wave fans and profiles to {out}/")
    return 0


def _snapshot_rows(t: float, snap: fvm.SimState, grid: fvm.SimGrid,
                   p: PressureLaw) -> List[List[float]]:
    xs = grid.centers()
    v = snap.y / snap.rho - p(snap.rho)
    w = snap.y / snap.rho
    return [[t, float(xs[j]), float(snap.rho[j]), float(v[j]),
             float(snap.y[j]), float(w[j])] for j in range(grid.n_cells)]


def _exact_fan_for(scheme: fvm.SchemeKind, l: StatePV, r: StatePV, q: float,
                   p: PressureLaw) -> Optional[riemann.WaveFan]:
    try:
        if scheme is fvm.SchemeKind.RS1:
            return riemann.solve_rs1(l, r, q, p)
        if scheme in (fvm.SchemeKind.RS2_GHOST, fvm.SchemeKind.RS2_FREEZE):
            return riemann.solve_rs2(l, r, q, p)
        return riemann.solve_classical(l, r, p)
    except ArfluxError:
        return None


def cmd_simulate(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    p = PressureLaw(float(cfg["gamma"]))
    q = float(cfg["q"])
    l, r = _parse_state(cfg["left"]), _parse_state(cfg["right"])
    scheme = fvm.SchemeKind(cfg["scheme"])
    grid = fvm.SimGrid.from_domain(float(cfg["x_min"]), float(cfg["x_max"]),
                                   float(cfg["dx"]))
    t_final = float(cfg["t_final"])
    times = [float(s) for s in cfg["output_times"].split(",") if s.strip()]
    out = cfg["out"]
    os.makedirs(out, exist_ok=True)

    result = fvm.run(l, r, grid, q, p, scheme, t_final, snapshot_times=times,
                     rs2_activation=cfg["rs2_activation"])

    for t, snap in result.snapshots:
        path = os.path.join(out, f"snapshot_t{fmt(t)}.csv")
        _write_csv(path, "t,x,rho,v,y,w", _snapshot_rows(t, snap, grid, p))
    led = result.ledger
    _write_csv(os.path.join(out, "ledger.csv"),
               "n,t,dt,total_rho,total_y,y_defect_interface",
               [[led.n[k], led.t[k], led.dt[k], led.total_rho[k],
                 led.total_y[k], led.y_defect_cum[k]]
                for k in range(len(led.n))])
    mp = result.max_principle
    with open(os.path.join(out, "max_principle.txt"), "w") as fh:
        fh.write(f"w_min_initial={fmt(mp.w_min_initial)}\n"
                 f"w_max_initial={fmt(mp.w_max_initial)}\n"
                 f"w_min_run={fmt(mp.w_min_run)}\n"
                 f"w_max_run={fmt(mp.w_max_run)}\n"
                 f"overshoot={fmt(mp.overshoot)}\n"
                 f"undershoot={fmt(mp.undershoot)}\n")

    fan = _exact_fan_for(scheme, l, r, q, p) if t_final > 0 else None
    if fan is not None:
        xs = grid.centers()
        exact_rho, exact_v = fvm.exact_profile(fan, xs, t_final, p)
        exact_w = exact_v + p(exact_rho)
        exact_y = exact_rho * exact_w
        snap = result.final
        num_v = snap.y / snap.rho - p(snap.rho)
        num_w = snap.y / snap.rho
        rows = []
        for name, num, exa in (("rho", snap.rho, exact_rho),
                               ("v", num_v, exact_v),
                               ("y", snap.y, exact_y),
                               ("w", num_w, exact_w)):
            err = np.abs(num - exa)
            rows.append([name, float(err.sum() * grid.dx), float(err.max())])
        _write_csv(os.path.join(out, "error_summary.csv"),
                   "quantity,l1_error,linf_error", rows)
    print(f"wrote {len(result.snapshots)} snapshot(s), ledger and reports to {out}/")
    return 0


def _domain_sweep(n_boxes: int, seed: int, p: PressureLaw,
                  pairs_per_box: int = 20, rays: int = 21) -> List[str]:
    """Soundness/completeness sweep over random boxes; returns violation
    descriptions (expected empty)."""
    rng = np.random.default_rng(seed)
    rays_xi = np.linspace(-5.0, 5.0, rays)
    failures: List[str] = []
    for b in range(n_boxes):
        v1 = rng.uniform(0.3, 2.0)
        v2 = v1 + rng.uniform(0.2, 2.0)
        w2 = v2 + rng.uniform(0.1, 2.0)
        w1 = rng.uniform(0.05, 0.95) * w2
        q = rng.uniform(0.3, 8.0)
        box = domains.DomainBox(v1, v2, w1, w2)
        for kind, solver, invariant in (
                (domains.CounterexampleKind.RS1_LEFT, riemann.solve_rs1,
                 domains.is_invariant_rs1(box, q, p)),
                (domains.CounterexampleKind.RS2_RIGHT, riemann.solve_rs2,
                 domains.is_invariant_rs2(box, q, p))):
            if invariant:
                for _ in range(pairs_per_box):
                    sl = _random_box_state(rng, box, p)
                    sr = _random_box_state(rng, box, p)
                    try:
                        fan = solver(sl, sr, q, p)
                    except ArfluxError:
                        continue
                    for xi in rays_xi:
                        s = riemann.sample(fan, float(xi))
                        if not domains.contains(box, s, p, tol=1e-8):
                            failures.append(
                                f"box {b}: invariant {kind.value} box leaked at xi={xi}"
                            )
                            break
    return failures


def _random_box_state(rng: np.random.Generator, box: domains.DomainBox,
                      p: PressureLaw) -> StatePV:
    v = rng.uniform(box.v1, box.v2)
    w = rng.uniform(max(box.w1, v + 1e-6), box.w2)
    return StatePV(p.inverse(w - v), v)


def cmd_campaign(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    p = PressureLaw(float(cfg["gamma"]))
    n = int(cfg["n"])
    seed = int(cfg["seed"])
    out = cfg["out"]
    os.makedirs(out, exist_ok=True)

    violations = tv.random_campaign(n, seed, p=p, invert=args.self_test)
    rows = [[v.index, v.l.rho, v.l.v, v.r.rho, v.r.v, v.q, v.quantity,
             v.residual,
             v.report.tv_rho_1, v.report.tv_rho_2, v.report.tv_v_1,
             v.report.tv_v_2, v.report.tv_y_1, v.report.tv_y_2,
             v.report.tv_w_1, v.report.tv_w_2]
            for v in violations]
    _write_csv(os.path.join(out, "tv_violations.csv"),
               "index,rho_l,v_l,rho_r,v_r,q,quantity,residual,"
               "tv_rho_1,tv_rho_2,tv_v_1,tv_v_2,tv_y_1,tv_y_2,tv_w_1,tv_w_2",
               [[str(r[0])] + [fmt(x) if not isinstance(x, str) else x
                               for x in r[1:]] for r in rows])

    domain_failures = _domain_sweep(max(1, min(50, n // 100)), seed, p) \
        if n > 0 else []
    with open(os.path.join(out, "domain_violations.csv"), "w") as fh:
        fh.write("description\n")
        for line in domain_failures:
            fh.write(line + "\n")

    total = len(violations) + len(domain_failures)
    with open(os.path.join(out, "summary.txt"), "w") as fh:
        fh.write(f"n={n}\nseed={seed}\ntv_violations={len(violations)}\n"
                 f"domain_violations={len(domain_failures)}\n")
    print(f"campaign: {len(violations)} TV violation(s), "
          f"{len(domain_failures)} domain violation(s)")
    return 1 if total else 0


def cmd_domain_check(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    p = PressureLaw(float(cfg["gamma"]))
    q = float(cfg["q"])
    parts = [float(x) for x in args.box.split(",")]
    if len(parts) != 4:
        raise ValueError("--box expects V1,V2,W1,W2")
    box = domains.DomainBox(*parts)
    vb = domains.vbar(q, p)
    print(f"vbar={fmt(vb)}")
    print(f"h_q(v1)={fmt(domains.h_q(box.v1, q, p))}")
    print(f"h_q(v2)={fmt(domains.h_q(box.v2, q, p))}")
    vmin = min(max(vb, box.v1), box.v2)
    print(f"min h_q on [v1,v2]={fmt(domains.h_q(vmin, q, p))}")
    print(f"invariant_unconstrained={domains.is_invariant_unconstrained_bound(box, q, p)}")
    print(f"invariant_rs1={domains.is_invariant_rs1(box, q, p)}")
    print(f"invariant_rs2={domains.is_invariant_rs2(box, q, p)}")
    for kind in domains.CounterexampleKind:
        s = domains.counterexample_state(box, q, p, kind)
        if s is None:
            print(f"counterexample_{kind.value}=none")
        else:
            print(f"counterexample_{kind.value}={fmt(s.rho)},{fmt(s.v)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arflux",
        description="Constrained Aw-Rascle traffic flow: exact solvers, "
                    "property campaigns and Godunov schemes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp):
        sp.add_argument("--config", help="key=value config file")
        sp.add_argument("--preset", choices=sorted(PRESETS),
                        help="built-in Riemann datum (test1a/1b/2a/2b)")
        sp.add_argument("--gamma", type=float, help="pressure exponent (>= 1)")
        sp.add_argument("--q", type=float, help="flux bound at x = 0")
        sp.add_argument("--left", help="left state RHO,V")
        sp.add_argument("--right", help="right state RHO,V")
        sp.add_argument("--out", help="output directory")

    sp = sub.add_parser("riemann", help="exact wave fans and profiles")
    add_common(sp)
    sp.set_defaults(func=cmd_riemann)

    sp = sub.add_parser("simulate", help="finite-volume run")
    add_common(sp)
    sp.add_argument("--scheme", choices=[k.value for k in fvm.SchemeKind])
    sp.add_argument("--dx", type=float)
    sp.add_argument("--t-final", dest="t_final", type=float)
    sp.add_argument("--x-min", dest="x_min", type=float)
    sp.add_argument("--x-max", dest="x_max", type=float)
    sp.add_argument("--output-times", dest="output_times",
                    help="comma-separated snapshot times")
    sp.add_argument("--rs2-activation", dest="rs2_activation",
                    choices=["exceeds", "below"],
                    help="constraint-activation reading for the RS2 schemes")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("campaign", help="TV + invariant-domain property sweep")
    add_common(sp)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--self-test", action="store_true",
                    help="invert the checks to prove the harness can fail")
    sp.set_defaults(func=cmd_campaign)

    sp = sub.add_parser("domain-check", help="invariance predicates for one box")
    add_common(sp)
    sp.add_argument("--box", required=True, help="V1,V2,W1,W2")
    sp.set_defaults(func=cmd_domain_check)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ArfluxError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
