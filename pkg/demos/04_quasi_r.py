"""Quasi-R-matrix components from the intertwining recursion, compared with the A1 closed form."""
from shapoform.cli import pretty
from shapoform.rmatrix import a1_closed_form_defects, closed_form_coefficient, f_tensor, intertwining_defects, quasi_r
from shapoform.rootsys import build_root_system
from shapoform.uqmodules import dual_verma_truncated, finite_dim_module, verma_truncated

A1 = build_root_system("A1")
M = verma_truncated(A1, 6)
rhat = quasi_r(dual_verma_truncated(A1, 6), M)
for k in range(4):
    print(f"c_{k} =", pretty(closed_form_coefficient(k)))
print("closed-form mismatches up to degree 6:", a1_closed_form_defects(rhat))

A2 = build_root_system("A2")
V = finite_dim_module(A2, (1, 0))
F = f_tensor(quasi_r(V, verma_truncated(A2, 3)))
print("A2 natural module: F has", len(F.entries), "nonzero entries, intertwining defects:", intertwining_defects(F))
