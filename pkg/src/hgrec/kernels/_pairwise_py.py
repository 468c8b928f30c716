"""Pure-Python fallback of the pairwise similarity kernel.

Semantics must stay bit-compatible with _pairwise_cy: same loop nesting,
same summation order.
"""

from __future__ import annotations

import numpy as np


def mean_similarity_row(t_tokens, t_off, tokens, file_off, set_off, out=None):
    """Mean pairwise prefix similarity of one file set against many.

    For target files F_t and each packed set F_j:

        out[j] = sum_{a in F_t, b in F_j} lcp(a, b) / max(|a|, |b|)
                 / (|F_t| * |F_j|)

    where lcp counts common leading tokens.
    """
    t_tokens = t_tokens.tolist()
    t_off = t_off.tolist()
    tokens = tokens.tolist()
    file_off = file_off.tolist()
    set_off = set_off.tolist()

    n_sets = len(set_off) - 1
    if out is None:
        out = np.empty(n_sets, dtype=np.float64)
    n_t = len(t_off) - 1

    for j in range(n_sets):
        f_lo = set_off[j]
        f_hi = set_off[j + 1]
        total = 0.0
        for a in range(n_t):
            a0 = t_off[a]
            la = t_off[a + 1] - a0
            for fb in range(f_lo, f_hi):
                b0 = file_off[fb]
                lb = file_off[fb + 1] - b0
                limit = la if la < lb else lb
                lcp = 0
                while lcp < limit and t_tokens[a0 + lcp] == tokens[b0 + lcp]:
                    lcp += 1
                total += lcp / (la if la > lb else lb)
        out[j] = total / (n_t * (f_hi - f_lo))
    return out
