"""Truncated Verma modules as Serre quotients, and finite-dimensional quotients."""
from shapoform.rootsys import build_root_system, kostant_partition
from shapoform.uqmodules import finite_dim_module, relation_defects, verma_truncated

for name, cutoff in (("A2", 4), ("B2", 3), ("G2", 3)):
    rs = build_root_system(name)
    M = verma_truncated(rs, cutoff)
    spaces = M.weight_spaces()
    print(f"{name}: {len(rs.positive_roots)} positive roots, Verma truncated at height {cutoff} has dim {M.dim}")
    for g, idx in sorted(spaces.items(), key=lambda t: (-sum(t[0]), t[0]))[:6]:
        nu = tuple(-x for x in g)
        print(f"   nu={nu}: dim {len(idx)}, Kostant count {kostant_partition(rs, nu)}")
    print("   relation defects:", relation_defects(M))

A2 = build_root_system("A2")
V = finite_dim_module(A2, (1, 1))
print("A2 adjoint module: dim", V.dim, "weights", sorted(V.gamma))
