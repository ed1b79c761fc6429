"""A radially symmetric run in three dimensions, plus the smoothing monitor.

Radial mode covers n >= 3 with shell-averaged fields on a ball; the zero
area of the innermost face enforces symmetry at the origin without ghost
values.  Besides the moment checks, this demo tracks the heat-smoothing
ratio ||v||_{p_v} / (1 + sup_s ||u||_{q_u}), which the theory bounds by an
unknowable constant: we simply watch that the recorded sequence settles.
"""

from chemolab import (
    ModelParams,
    MonitorConfig,
    RadialShellMesh,
    SchemeConfig,
    chi_star,
    dissipation_check,
    gronwall_check,
    initial_state,
    run,
    smoothing_ratio,
)
from chemolab.runconfig import bootstrap_pairs

params = ModelParams(chi=0.5, k=1.0, n=3)
print(f"chi = {params.chi} vs chi_star(1, 3) = {chi_star(1.0, 3):.6f}  (sub-threshold)")

mesh = RadialShellMesh(3, 2.0, 64)
init = initial_state(mesh, "gaussian", amplitude=1.5, v0_base=1.0)
pairs = bootstrap_pairs(params, theta=0.5)
pair = pairs[0]
p_v = pair[0] - pair[1]  # the v-norm order the pair's bound leans on
monitors = MonitorConfig(q_list=(1.0,), pr_pairs=pairs)

report = run(init, params, mesh, SchemeConfig(t_end=5.0, output_interval=0.25), monitors)
print(f"status = {report.status}; pair (p, r) = {pair}")
print(f"gronwall: {gronwall_check(report.series, pair, tol=0.05)}")
print(f"dissipation: {dissipation_check(report.series, pair, tol=0.05)}")
print()

ratios = smoothing_ratio(report.series, p_v=p_v, q_u=1.0, n=3)
print(f"smoothing ratio ||v||_{p_v:g} / (1 + sup ||u||_1):")
print(f"{'t':>6} {'ratio':>10}")
for row, ratio in list(zip(report.series, ratios))[::4]:
    print(f"{row.t:>6.2f} {ratio:>10.6f}")
print(f"running max of the ratio: {max(ratios):.6f} (bounded monitor, no growth)")
