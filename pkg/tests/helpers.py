"""Shared helpers for the test suite."""

from stackcoh.cochain import build_complex
from stackcoh.exactla import RationalMatrix


def mutated(R, key, entry=(0, 0), delta=1):
    """Copy of R with delta added to one entry of the block at key."""
    S = R.copy()
    M = R.block(*key)
    E = RationalMatrix.from_entries(M.nrows, M.ncols, [(entry[0], entry[1], delta)])
    S.blocks = dict(R.blocks)
    S.blocks[key] = M + E
    return S


def square_zero_defects(R, cap=4):
    """Degrees n with D_{n+1} D_n != 0 for n <= cap."""
    P = build_complex(R, cap + 2)
    return [n for n in sorted(P.D) if n <= cap and n + 1 in P.D and not (P.D[n + 1] @ P.D[n]).is_zero()]


def single_entry_mutations(R, key):
    """All copies of R differing from it by +1 in one entry of one block."""
    M = R.block(*key)
    return [((i, j), mutated(R, key, (i, j))) for i in range(M.nrows) for j in range(M.ncols)]


def is_free_block(R, key):
    """True when every value of this block satisfies the structure equations:
    an R_0 block over a groupoid of units, with no higher blocks and zero
    R_0 blocks on both sides at the same object."""
    m, chain, n = key
    G = R.base
    if m != 0 or any(not G.is_unit(g) for g in range(G.n_arrows)):
        return False
    if any(k[0] >= 2 for k in R.blocks):
        return False
    x = chain[0]
    return all(R.block(0, (x,), k).is_zero() for k in (n - 1, n + 1)
               if R.lo < k <= R.hi)
