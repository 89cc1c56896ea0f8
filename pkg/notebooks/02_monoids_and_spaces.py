# %% [markdown]
# # T-monoids: preorders, spaces, interior spaces
#
# A T-monoid is a map alpha: X -> TX that is reflexive and transitive in the
# Kleisli sense.  P-monoids are preorders, F-monoids finite topologies and
# U-monoids interior spaces.

# %%
from pathlib import Path

from kleislilab import (FinSet, check_monoid, enumerate_monoids, hom_set, load_instance,
                        make_monad, opens_of)

DATA = Path(__file__).resolve().parent.parent / "data"
for kind in "PFU":
    m = make_monad(kind)
    print(kind, [len(enumerate_monoids(m, FinSet([str(i) for i in range(n)]))) for n in (1, 2, 3)])

# %% [markdown]
# Sierpinski space has the single non-trivial open {0}; its opens form a
# 3-chain.  The M3 interior space has a diamond of opens.

# %%
sier = load_instance(DATA / "sierpinski.json")
print(check_monoid(sier).summary())
print(opens_of(sier)[0])
m3 = load_instance(DATA / "m3_interior.json")
print(check_monoid(m3).summary())
print(opens_of(m3)[0])

# %% [markdown]
# Homomorphisms are found by backtracking and match a brute-force scan.

# %%
chain = load_instance(DATA / "chain2.json")
print(len(hom_set(chain, chain)), "monotone self-maps of the 2-chain")
print(len(hom_set(sier, sier)), "continuous self-maps of Sierpinski space")
