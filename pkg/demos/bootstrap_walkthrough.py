"""Walk the integrability bootstrap step by step.

Starting from a small moment exponent p_0, each round feeds the current
integrability level back through the chemical's smoothing estimate to
unlock a strictly larger exponent, until some p_l exceeds n/2.  At that
point a norm exponent q > n/2 is available and boundedness follows.

The chain below reproduces the hand-checkable case chi = 0.4, k = 1, n = 6,
where the center ratio is identically 1/2 and the update collapses to
F(p) = 4p / (3 - p): the chain is exactly (1.5, 2.75, 4.5).
"""

from chemolab import ModelParams, bootstrap, center_ratio_bounds, chi_star, p_max


def show_chain(params, theta=0.5):
    print(f"chi = {params.chi}, k = {params.k}, n = {params.n}, theta = {theta}")
    print(f"  chi_star = {chi_star(params.k, params.n):.6f}   p_max = {p_max(params.chi, params.k):.6f}")
    if params.n >= 3:
        bounds = center_ratio_bounds(params.chi, params.k, params.n)
        print(f"  ratio bounds over (1, n/2]: c0 = {bounds.c0:.6f}, c_sup = {bounds.c_sup:.6f}")
    chain = bootstrap(params, theta=theta)
    print(f"  {'l':>3} {'p_l':>12} {'r_l':>12} {'q_l':>12} {'upper':>12}")
    for idx, s in enumerate(chain.steps):
        print(f"  {idx:>3} {s.p:>12.6f} {s.r:>12.6f} {s.q:>12.6f} {s.upper_used:>12.6f}")
    target = params.n / 2.0
    print(f"  terminated: {chain.terminated} (target p > n/2 = {target:g});"
          f" final q = {chain.final_q:.6f}")
    print()


print("the hand-checkable chain (ratio identically 1/2):")
show_chain(ModelParams(chi=0.4, k=1.0, n=6))

print("low dimensions finish in a single round:")
show_chain(ModelParams(chi=0.3, k=1.0, n=3))

print("small diffusivity admits sensitivities close to 1 (here n = 8):")
show_chain(ModelParams(chi=0.9, k=0.05, n=8))

print("a slow, cautious selection (theta = 0.2) takes more rounds:")
show_chain(ModelParams(chi=0.4, k=1.0, n=6), theta=0.2)
