"""Vectorized exhaustive enumeration of spin assignments on small supports.

The joint weight over a support is materialized as a dense tensor with one
axis of length q per free vertex; field and interaction factors are applied
by broadcasting, so no index arrays are ever built.  Enumeration refuses
more than q^k = 2^22 assignments.
"""

import numpy as np

from .errors import TooLargeError

ENUM_CAP = 2**22


def weight_tensor(system, graph, support, fixed):
    """Joint weights of all free-spin assignments on ``support``.

    Returns ``(free, W)`` where ``free`` lists the unassigned support
    vertices in support order and ``W`` has shape ``(q,) * len(free)``;
    ``W[s_1-1, ..., s_k-1]`` is the weight of the induced configuration on
    G[support], with ``fixed`` vertices pinned.  Interactions between two
    fixed vertices enter as a scalar factor, so an infeasible pinned pair
    zeroes the whole tensor.
    """
    q = system.q
    free = [v for v in support if v not in fixed]
    k = len(free)
    if q**k > ENUM_CAP:
        raise TooLargeError(
            f"enumeration of {q}^{k} assignments exceeds the {ENUM_CAP} cap"
        )
    pos = {v: j for j, v in enumerate(free)}
    b = system.b
    A = system.A

    def on_axis(vec, j):
        return vec.reshape((1,) * j + (q,) + (1,) * (k - 1 - j))

    W = np.ones((q,) * k)
    scalar = 1.0
    for v in support:
        if v in fixed:
            scalar *= b[fixed[v] - 1]
    for j in range(k):
        W *= on_axis(b, j)

    in_support = set(support)
    for u in support:
        for w in graph.neighbors(u):
            if w not in in_support or not u < w:
                continue
            u_fixed, w_fixed = u in fixed, w in fixed
            if u_fixed and w_fixed:
                scalar *= A[fixed[u] - 1, fixed[w] - 1]
            elif u_fixed:
                W *= on_axis(A[fixed[u] - 1, :], pos[w])
            elif w_fixed:
                W *= on_axis(A[:, fixed[w] - 1], pos[u])
            else:
                ju, jw = pos[u], pos[w]
                j1, j2 = (ju, jw) if ju < jw else (jw, ju)
                M = A if ju < jw else A.T
                W *= M.reshape(
                    (1,) * j1 + (q,) + (1,) * (j2 - j1 - 1) + (q,) + (1,) * (k - 1 - j2)
                )
    if scalar != 1.0:
        W = W * scalar
    return free, W
