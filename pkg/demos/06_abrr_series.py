"""The ABRR series, its agreement with the route sums, and the inverse pairing."""
from shapoform.abrr import abrr_identity_check, fk_series, perturbed
from shapoform.rmatrix import f_tensor, quasi_r
from shapoform.rootsys import build_root_system
from shapoform.routesum import fhat_matrix, hasse
from shapoform.singular import verify_inverse
from shapoform.uqmodules import finite_dim_module, verma_truncated

A2 = build_root_system("A2")
V = finite_dim_module(A2, (1, 1))
M = verma_truncated(A2, 4)
rhat = quasi_r(V, M)
F = f_tensor(rhat)
series = fk_series(V, F)
print("series terms:", series.nonzero_terms, "longest path:", hasse(V, F).longest_path_length())
print("series equals route sums:", series.fhat == fhat_matrix(V, F))
print("identity holds:", abrr_identity_check(rhat, series.fhat).ok)
key = min(series.fhat.entries)
print("perturbed entry", key, "still satisfies it:", abrr_identity_check(rhat, perturbed(series.fhat, *key)).ok)

rep = verify_inverse(A2, 4)
print("A2 cutoff 4: all blocks inverted by f-hat:", rep.ok, {k: round(v, 2) for k, v in rep.timings.items()})
