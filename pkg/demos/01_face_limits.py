# %% [markdown]
# # Reading surjectivity off the faces of a norm ball
#
# For a nonexpansive map `f`, the displacement `f - id` is onto exactly when
# each proper face of the unit ball pushes the displacement pairing to minus
# infinity along its ray. This script walks through that test by hand and then
# lets `certify_surjective` do it.

# %%
import numpy as np

from nexcert.certify import certify_surjective, failing_faces
from nexcert.gallery import example_sup_face, half
from nexcert.polynorm import builtin_norm, enumerate_proper_faces
from nexcert.raylimits import ray_limit

sup3 = builtin_norm("sup", 3)
faces = enumerate_proper_faces(sup3)
print(len(faces), "proper faces of the cube")

# %% [markdown]
# `half(3)` halves every coordinate. Along each face ray the pairing decreases
# linearly, so every limit is minus infinity.

# %%
g = half(3)
for F in faces[:4]:
    v = ray_limit(g, (0, 0, 0), F.representative, F.dual_representative)
    print(F.label, v.outcome.value, v.evidence["final_slope"])
print(certify_surjective(g, sup3).verdict.value)

# %% [markdown]
# The sup-face map keeps exactly one face fixed, so its limit there is finite.

# %%
f = example_sup_face(3, {1}, {2})
cert = certify_surjective(f, sup3)
print(cert.verdict.value, failing_faces(cert))
print(cert.witness.as_dict())

# %% [markdown]
# The witness gives a cone of targets `u` for which `f + u` has no fixed point.
# Sampling a point well inside it and iterating shows a positive residual.

# %%
from nexcert.oracle import avoided_cone_samples, minimal_displacement_estimate

w = cert.witness
z = avoided_cone_samples(sup3, w.face, w.cone_value, count=1, seed=0)[0]
rep = minimal_displacement_estimate(f, -z, sup3, max_iter=20_000)
print(rep.verdict, round(rep.residual, 6))
