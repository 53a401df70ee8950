"""The finite-dimensional gluing sandbox: constants, correction, chart probes.

Runs the full pipeline on the scaled sphere chart: estimate the approximation
constants, correct a chart point onto the solution set by the fixed-point
iteration, and probe the chart-map derivative bound.
"""

import numpy as np

from orbidegen import glue

system, chart = glue.sphere_model(scale=1.05)
const = glue.estimate_constants(system, chart, sample_count=200)
print(f"sphere chart at radius 1.05:")
print(f"  eps1 = {const.eps1:.6f}   (|t| on the chart; exact value 0.1025)")
print(f"  C2   = {const.c2:.6f}   delta1 = {const.delta1:.6f}")
print(f"  ordering eps1 << delta1 << C2: "
      f"{'ok' if const.ordering_ok else 'flagged as tight'}")

result = glue.correct(system, chart, np.array([1.0, 0.5]), tol=1e-10)
print(f"\ncorrection iteration (xi <- -t(x) - N_x(Q xi)):")
for i, (xn, rn) in enumerate(zip(result.xi_history, result.residual_history)):
    print(f"  n={i}  |xi|={xn:.8f}  residual={rn:.3e}")
print(f"closed form says |xi| = 2|x|(|x|-1) = 0.105; got "
      f"{np.linalg.norm(result.xi):.9f}")
print(f"contract |xi| <= 2 eps1: {np.linalg.norm(result.xi):.6f} <= "
      f"{2 * const.eps1:.6f}")

rng = np.random.default_rng(0)
worst = 0.0
for _ in range(100):
    probe = glue.chart_map(system, chart, chart.sample(rng),
                           rng.uniform(-const.delta1, const.delta1, size=1))
    worst = max(worst, probe.derivative_norm)
print(f"\nchart-map derivative probe over 100 points: max |DPhi| = {worst:.4f} "
      f"(bound 2)")

print("\nnode-smoothing model at tau = 0.25:")
nsystem, nchart = glue.node_model(0.25)
nresult = glue.correct(nsystem, nchart, np.array([0.4]))
print(f"  exact hyperbola chart corrects to residual {nresult.residual:.1e} "
      f"with |xi| = {np.linalg.norm(nresult.xi):.1e}")
report = glue.injectivity_probe(nsystem, nchart, 300, delta1=0.02)
print(f"  injectivity probe: {report.pairs_checked} pairs, "
      f"{len(report.collisions)} collision(s)")
