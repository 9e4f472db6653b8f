"""Why the c3=0 family fails: put a symbol p in place of (theta-1)^(theta/(theta-1)).

The h=0 residual is proportional to p*(1+p), so only p=-1 gives a solution.
The printed prefactor is never -1 on 0 < theta < 1 (it is complex for most theta).
"""
import numpy as np

from porosym.model import H
from porosym.solutions import FAMILIES, pde_residual
from porosym.suites import s6_kernel_analysis
from porosym.symexpr import ZERO, eval_numeric, parse, subs


def main():
    print("verdicts by prefactor:", {k: v.value for k, v in s6_kernel_analysis().items()})
    text = FAMILIES["S6"].text.replace("*(theta-1)^(theta/(theta-1))", "*p")
    res = subs(pde_residual(parse(text, params=("p",))), {H: ZERO})
    at = {"x": 0.7, "y": -1.3, "t": 1.1, "theta": 0.5, "c1": 1.2, "c2": 0.4, "c4": 0.9, "c5": -0.6}
    print("h=0 residual at a fixed point, divided by p*(1+p):")
    for pv in (-3.0, -2.0, 0.5, 1.0, 2.0):
        r = eval_numeric(res, {**at, "p": pv})
        print(f"  p={pv:+.1f}: residual {r:+.6e}, ratio {r / (pv * (1 + pv)):+.6e}")
    for th in (0.1, 0.5, 0.9):
        p = complex(th - 1) ** (th / (th - 1))
        print(f"  theta={th}: printed prefactor = {p:.4f}, |p+1| = {abs(p + 1):.3f}")
    if np.isclose(complex(-0.5) ** (0.5 / -0.5), -2):
        print("  theta=0.5 gives p=-2 exactly: real, but not -1")


if __name__ == "__main__":
    main()
