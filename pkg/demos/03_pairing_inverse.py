"""The invariant pairing between Verma and dual Verma modules and its blockwise inverse."""
from shapoform.cli import pretty
from shapoform.linalg import det
from shapoform.rootsys import build_root_system
from shapoform.shapovalov import inverse_blocks, pairing_block
from shapoform.uqmodules import dual_verma_truncated, verma_truncated

A2 = build_root_system("A2")
M, Ms = verma_truncated(A2, 3), dual_verma_truncated(A2, 3)
block = pairing_block(M, Ms, (1, 1))
print("pairing block at nu = a1 + a2:")
for row in block.entries:
    print("   ", [pretty(x) for x in row])
print("determinant:", pretty(det(block.entries)))
blocks = inverse_blocks(M, Ms)
print("inverted", len(blocks), "blocks, sizes", sorted(len(b.row_index) for b, _ in blocks.values()))
