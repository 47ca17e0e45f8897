"""Hasse diagram, routes and the dynamized matrix on the A2 natural module."""
from shapoform.cli import pretty
from shapoform.rmatrix import f_tensor, quasi_r
from shapoform.rootsys import build_root_system
from shapoform.routesum import fhat_matrix, hasse
from shapoform.uqmodules import finite_dim_module, verma_truncated

A2 = build_root_system("A2")
V = finite_dim_module(A2, (1, 0))
M = verma_truncated(A2, 3)
F = f_tensor(quasi_r(V, M))
d = hasse(V, F)
print("arrows (from, to, simple root):", [(l, r, a + 1) for l, r, a, _ in d.arrows])
print("routes from top to bottom:", d.routes(0, 2))
fh = fhat_matrix(V, F)
for (i, j), vec in sorted(fh.entries.items()):
    terms = " + ".join(f"({pretty(c)}) f{''.join(str(a + 1) for a in M.words[k])}" for k, c in vec.items())
    print(f"fhat[{i},{j}] 1 = {terms}")
