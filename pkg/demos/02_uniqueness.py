# %% [markdown]
# # When is a fixed point the only one?
#
# Given a fixed point `u`, uniqueness is decided by the sign of the displacement
# pairing just after leaving `u` along each face direction.

# %%
from nexcert.certify import (
    certify_unique,
    certify_unique_eigenvector,
    certify_unique_subtopical,
    face_lattice_map,
    invariant_face_search,
)
from nexcert.gallery import example_sup_face, half, midpoint_map
from nexcert.mapexpr import Constant, Identity, MaxPlus, Permutation, PointwiseMin
from nexcert.oracle import multistart_fixed_points
from nexcert.polynorm import builtin_norm

sup2, sup3 = builtin_norm("sup", 2), builtin_norm("sup", 3)

# %%
for name, f, norm in [("half", half(2), sup2), ("midpoint", midpoint_map(2), sup2)]:
    cert = certify_unique(f, norm, (0,) * f.dim)
    found = multistart_fixed_points(f, norm, starts=8)
    print(f"{name}: {cert.verdict.value}, iteration found {len(found)} distinct fixed points")

# %% [markdown]
# Order-preserving maps on the sup norm only need the coordinate subsets.

# %%
print(certify_unique_subtopical(PointwiseMin(Identity(2), Constant((0, 0))), (0, 0)).verdict.value)
print(certify_unique_subtopical(Constant((0, 0)), (0, 0)).verdict.value)

# %% [markdown]
# For topical maps the question is whether the eigenvector is unique up to
# adding constants.

# %%
for T in (Permutation((1, 0)), Identity(2), MaxPlus(((0, 0), (0, 0)))):
    print(T, certify_unique_eigenvector(T, (0, 0)).verdict.value)

# %% [markdown]
# The face lattice view: a homogeneous map sends faces to faces, and a proper
# face mapped into itself blocks uniqueness.

# %%
L = face_lattice_map(example_sup_face(3, {1}, {2}), sup3)
print(invariant_face_search(L).as_dict()["witness"])
