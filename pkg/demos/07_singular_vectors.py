"""Singular vectors in V (x) M_lambda and their check at random rational points."""
from shapoform.rootsys import build_root_system
from shapoform.singular import Specializer, numeric_singular_check, random_points, singular_vectors
from shapoform.uqmodules import finite_dim_module, tensor_module, verma_truncated

B2 = build_root_system("B2")
V = finite_dim_module(B2, (1, 0))
M = verma_truncated(B2, 4)
reports, rank = singular_vectors(V, M)
for r in reports:
    print(f"j={r.j} weight offset {r.weight}: {len(r.vector)} terms, annihilated={r.annihilated}")
print("rank", rank, "of", V.dim)
T = tensor_module(V, M)
pts = random_points(B2, 3, seed=5, max_m=4)
print("numeric checks:", [numeric_singular_check(reports, T, Specializer(q0, z0)) for q0, z0 in pts])
