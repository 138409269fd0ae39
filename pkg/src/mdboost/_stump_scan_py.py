"""Pure-numpy stump scan; fallback when the compiled kernel is unavailable.

Finds the decision stump maximizing the signed-weight edge
sum_i s_i * h(x_i) over every feature, every midpoint threshold between
consecutive distinct sorted values, both sentinels (below min, above max)
and both polarities.

Candidate order is canonical: feature ascending, threshold ascending,
polarity +1 before -1; the first maximum in that order wins.  Prefix sums
run in the same sequential order as the compiled kernel, so the two
backends return bit-identical results.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def scan(order: np.ndarray, values: np.ndarray, s: np.ndarray):
    """Best stump over the canonical candidate set.

    order, values: (d, M) per-feature argsort indices and sorted values.
    s: (M,) signed weights u_i * y_i.

    Returns (edge, feature, pos, polarity) where pos encodes the
    threshold: -1 the below-min sentinel, k in [0, M-2] the midpoint after
    sorted position k, M-1 the above-max sentinel.
    """
    d, m = order.shape
    # one shared total, accumulated in example order: the constant-classifier
    # sentinels of every feature then tie bitwise and break canonically
    total = float(np.cumsum(s)[-1])
    best_edge = -np.inf
    best = (0, -1, 1)
    for f in range(d):
        z = s[order[f]]
        prefix = np.cumsum(z)
        vals = values[f]
        bounds = np.nonzero(vals[:-1] != vals[1:])[0]

        # edges for polarity +1, thresholds ascending; -edge is polarity -1
        plus = np.empty(bounds.size + 2)
        plus[0] = total
        plus[1:-1] = total - 2.0 * prefix[bounds]
        plus[-1] = -total

        flat = np.empty(2 * plus.size)
        flat[0::2] = plus
        flat[1::2] = -plus
        i = int(np.argmax(flat))
        edge = flat[i]
        if edge > best_edge:
            j = i // 2
            if j == 0:
                pos = -1
            elif j == plus.size - 1:
                pos = m - 1
            else:
                pos = int(bounds[j - 1])
            best_edge = float(edge)
            best = (f, pos, 1 if i % 2 == 0 else -1)
    return best_edge, best[0], best[1], best[2]
