# %% [markdown]
# # Discrete margins
#
# With atoms in the margins, Sklar's copula is only pinned down on the grid of
# cumulative probabilities.  The checkerboard extension fills each cell with
# uniform mass, and the volume ratio is then defined at every t.

# %%
import numpy as np

from tails import (
    JointPMF,
    Rect,
    checkerboard_extend,
    discontinuity_partition,
    lambda_tilde_lower,
    subcopula_from_joint,
    volume,
)
from tails.discrete import partition_masses

# %% [markdown]
# Two perfectly matched fair coins.  On continuous margins this would be the
# comonotone copula with coefficient 1.  Here the mass of the first cell is
# spread over [0, 1/2]^2, so C(t, t) = 2 t^2 and the lower ratio is 2t.

# %%
coins = JointPMF.from_mass(np.diag([0.5, 0.5]))
grid = subcopula_from_joint(coins)
print("nodes:", grid.u_nodes, "\nvalues:\n", grid.values)

c = checkerboard_extend(grid)
est = lambda_tilde_lower(c)
for t, r in est.path:
    print(f"t={t:.0e}  ratio={r:.3e}  2t={2 * t:.3e}")
print("limit:", est.extrapolated, "|", est.extension)

# %% [markdown]
# Volumes of boxes that straddle node lines are sums over pieces that each
# sit inside one cell.  Every piece has a closed-form mass.

# %%
box = Rect(0.3, 0.8, 0.2, 0.7)
for piece in discontinuity_partition(c, box):
    print(piece, f"{volume(c, piece):.4f}")
print("sum of pieces:", partition_masses(c, box).sum(), " direct:", volume(c, box))

# %% [markdown]
# A less tidy example: a 3 x 4 table with an empty cell.

# %%
mass = np.array([[0.10, 0.05, 0.05, 0.00],
                 [0.05, 0.20, 0.05, 0.05],
                 [0.00, 0.05, 0.10, 0.30]])
c = checkerboard_extend(subcopula_from_joint(JointPMF.from_mass(mass)))
est = lambda_tilde_lower(c)
print(np.array2string(est.ratios, precision=4), "->", est.extrapolated)
