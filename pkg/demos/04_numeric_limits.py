# %% [markdown]
# # Maps the exact engine cannot see into
#
# Black-box maps are sampled along a doubling schedule. Fast divergence and
# clean convergence are recognized; anything slower is reported honestly as
# inconclusive.

# %%
import numpy as np

from nexcert.certify import certify_surjective, certify_via_recession
from nexcert.gallery import shrink_sqrt
from nexcert.mapexpr import BlackBox
from nexcert.polynorm import builtin_norm
from nexcert.raylimits import classify_samples

sup1 = builtin_norm("sup", 1)

# %%
for name, g in [
    ("linear", lambda t: -t),
    ("tends to 1/2", lambda t: 0.5 - 1 / t),
    ("logarithmic", lambda t: -np.log1p(t)),
]:
    v = classify_samples(g, expect=None)
    print(f"{name:>14}: {v.outcome.value} {v.value if v.finite else ''}")

# %% [markdown]
# Shrinking by a square root is onto although its recession map is the
# identity, so the recession shortcut can only say "sufficient condition not met".

# %%
f = shrink_sqrt(1)
print(certify_surjective(f, sup1).verdict.value)
print(certify_via_recession(f, sup1).verdict.value)

# %% [markdown]
# A sampled version of the same map needs an explicit nonexpansiveness promise.

# %%
bb = BlackBox(1, lambda x: np.sign(x) * np.maximum(np.abs(x) - np.sqrt(np.abs(x)), 0))
print(certify_surjective(bb, sup1, assume_nonexpansive=True).verdict.value)
