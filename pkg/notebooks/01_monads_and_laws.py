# %% [markdown]
# # Four monads on finite sets
#
# Powerset P, filters F, up-families U and V-valued functions PV.  Each is
# enumerated on small carriers and its laws are scanned.

# %%
from kleislilab import FinSet, check_all_laws, lukasiewicz, make_monad

X = FinSet(["0", "1"])
P, F, U = (make_monad(k) for k in "PFU")
PV = make_monad("PV", lukasiewicz(3))
for m in (P, F, U, PV):
    print(m.label, [m.size(n) for n in range(4)])

# %% [markdown]
# The order on TX is recovered from the multiplication: t <= s iff
# mu(tau{t, s}) = s.  For F that is reverse inclusion of filters.

# %%
for f in F.T_obj(X):
    print(f, "<=", [g for g in F.T_obj(X) if F.leq(f, g)])

# %% [markdown]
# Monad, enrichment and lax monoidal laws.  U on two points overflows TTX in
# exhaustive mode; witness mode checks the laws on generated elements.

# %%
for m, mode in ((P, "exhaustive"), (F, "exhaustive"), (U, "witness"), (PV, "witness")):
    print(check_all_laws(m, 2, mode).summary())
