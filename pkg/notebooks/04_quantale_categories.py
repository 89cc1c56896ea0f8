# %% [markdown]
# # V-categories over a quantale
#
# PV-monoids are V-categories.  With the tensor structure every V-category
# is exponentiable; with the cartesian structure over a frame with unit top
# exponentiability is an inequality checked at every (u, v, x, z).

# %%
from pathlib import Path

from kleislilab import criterion, dagger_scan, load_instance, lukasiewicz

DATA = Path(__file__).resolve().parent.parent / "data"
q = lukasiewicz(5)
print(q.carrier.elements, q.tensor("3/4", "1/2"), q.tensor("3/4", "3/4"))

# %% [markdown]
# A three-point category with alpha(a)(c) = 1/2 fails the inequality exactly
# once, at u = v = 3/4, x = a, z = c.

# %%
x = load_instance(DATA / "luk5_category.json")
scan = dagger_scan(x)
print(scan["checked"], "tuples,", len(scan["failures"]), "failure")
w = criterion(x).witness
print({k: w[k] for k in ("u", "v", "x", "z", "lhs", "rhs", "best_y")})
