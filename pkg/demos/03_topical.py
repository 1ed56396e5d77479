# %% [markdown]
# # Topical maps and hypergraphs
#
# For order-preserving, additively homogeneous maps the face test reduces to
# questions about coordinate subsets. Several equivalent routes are offered;
# this script runs them side by side on random max-plus and min-max maps.

# %%
import numpy as np

from nexcert.gallery import min_clip, random_maxplus, random_minmax
from nexcert.topical import METHODS, build_Ginf, certify_subtopical, certify_topical, final_classes

rng = np.random.default_rng(11)
rows = []
for _ in range(20):
    T = random_maxplus(3, rng) if rng.uniform() < 0.5 else random_minmax(3, rng)
    exact = [m for m in METHODS[:3] if m != "convex" or T.convex]
    verdicts = {m: certify_topical(T, m).verdict.value for m in exact}
    assert len(set(verdicts.values())) == 1
    rows.append((verdicts["hypergraph"], certify_topical(T, "strongly_connected_sufficient").verdict.value))
print(sum(v == "Surjective" for v, _ in rows), "of", len(rows), "surjective; the exact methods agree")

# %% [markdown]
# Strong connectivity of the limit graph is only a sufficient condition.

# %%
for exact_v, scc_v in rows[:6]:
    print(f"{exact_v:>14}  strong connectivity says {scc_v}")

# %% [markdown]
# The graph of limits `G_inf` and its final classes.

# %%
G = build_Ginf(min_clip(("1", "1")))
print(final_classes(G))
print(G.to_dot())

# %% [markdown]
# Order-preserving maps that are only subhomogeneous go through the
# subtopical test, which checks both signs on every nonempty subset.

# %%
cert = certify_subtopical(min_clip(("1", "1", "1")))
print(cert.verdict.value, cert.limit_count)
