# %% [markdown]
# # Extremal dependence across time
#
# For a stationary series the same construction applied to the lagged pairs
# (X_i, X_{i+h}) measures how likely an extreme is to be followed by another
# one h steps later.

# %%
import numpy as np

from tails import Schedule
from tails.empirical import auto_tail_level, auto_tail_param
from tails.sampling import iid_series, moving_max_series

# %% [markdown]
# The moving maximum X_i = max(Z_i, Z_{i+1}) of unit Frechet noise shares
# each innovation between neighbours.  A big Z makes two consecutive large
# values, so the lag-1 coefficient is 1/2 and every longer lag has none.

# %%
mm = moving_max_series(10**6, seed=3)
for h in (1, 2, 5):
    print(f"lag {h}: P(X_(i+h) extreme | X_i extreme) at t=0.999 = {auto_tail_level(mm, h, 0.999):.3f}")

# %% [markdown]
# The volume-based path across levels.  Each point uses the empirical copula
# of the lagged pairs.  Levels leaving fewer than ten expected points in the
# corner are refused rather than reported.

# %%
path = auto_tail_param(mm, 1, Schedule.explicit([0.9, 0.99, 0.999, 0.9999]))
for t, v in path.path:
    print(f"t={t}  {v:.4f}")

# %% [markdown]
# Independent noise gives 1 - t at every level, which vanishes in the limit.

# %%
noise = iid_series(10**6, seed=3)
print([round(auto_tail_level(noise, 1, t), 4) for t in (0.9, 0.95, 0.99)])
