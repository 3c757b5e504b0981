# %% [markdown]
# # Regular variation of the upper corner
#
# Scaling the corner box by x instead of shrinking it by t gives the limit
# measure nu(w, z) = lim x V([1 - z/x, 1] x [1 - w/x, 1]).  Setting
# t = 1 - 1/x turns nu(1, 1) into the upper tail coefficient.

# %%
import numpy as np

from tails import Comonotone, Gumbel, Independence
from tails.margins import Margin
from tails.regvar import brv_consistency, brv_monte_carlo, nu_estimate, tail_quantile

# %% [markdown]
# With the schedules matched through t = 1 - 1/x the two paths are the same
# arithmetic, so they agree to the last bit.

# %%
for c in (Gumbel(2.0), Independence(), Comonotone()):
    res = brv_consistency(c)
    print(f"{c!r:24} nu(1,1)={res.nu_estimate:.6f}  lambda={res.lambda_tilde_u:.6f}  gap={res.max_path_gap:.1e}")

# %% [markdown]
# Off the diagonal, nu(w, z) for the comonotone copula is min(w, z), and
# it is homogeneous of degree one.

# %%
print(nu_estimate(Comonotone(), 2, 3).nu_estimate, nu_estimate(Comonotone(), 4, 6).nu_estimate)

# %% [markdown]
# Tail quantiles U(x) = inf{y : P(X > y) <= 1/x} put margins on a common
# scale.  A Monte Carlo estimate with Pareto margins lands near the copula
# value at x = 100.

# %%
for m in (Margin.uniform(), Margin.unit_pareto(), Margin.unit_frechet(), Margin.exponential()):
    print(f"{m.kind:13} U(100) = {tail_quantile(m, 100.0):.4f}")

mc = brv_monte_carlo(Gumbel(2.0), Margin.unit_pareto(), Margin.unit_pareto(), 100.0, n=10**6, seed=1)
print(f"Monte Carlo x P(...) at x=100: {mc:.4f}   limit {2 - np.sqrt(2):.4f}")
