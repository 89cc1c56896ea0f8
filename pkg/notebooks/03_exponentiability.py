# %% [markdown]
# # Exponentiability three ways
#
# For a T-monoid X with dualizer V, W = [X, V] carries conv.  X is
# exponentiable iff (W, conv) is a T-algebra.  `decide` runs the lattice
# criterion, the conv algebra laws and a couniversal search that never uses
# conv, and reports whether they agree.

# %%
from pathlib import Path

from kleislilab import adjunction_count, conv, decide, exponential, load_instance

DATA = Path(__file__).resolve().parent.parent / "data"
chain = load_instance(DATA / "chain2.json")
c = conv(chain)
print(len(c.W), "up-sets of the 2-chain")
print(decide(chain).to_json()["counts"])

# %% [markdown]
# The exponential of the 2-chain by itself is a 3-chain, and currying is a
# bijection between both sides of the adjunction.

# %%
e = exponential(chain, chain)
print(len(e), adjunction_count(chain, chain, chain, e).stats)

# %% [markdown]
# The M3 interior space is not exponentiable: its opens are not distributive,
# the conv laws fail at a generated element, and no structure on W is
# couniversal.

# %%
m3 = load_instance(DATA / "m3_interior.json")
v = decide(m3)
print(v.exponentiable, v.witness, {k: r.exponentiable for k, r in v.routes.items()})
