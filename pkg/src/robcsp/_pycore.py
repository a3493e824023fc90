"""Pure-Python fallback for the compiled kernels in ``_core.pyx``.

Same algorithms, same signatures; rotations are applied as numpy row/column
updates so the cost is one Python-level loop iteration per rotation.
"""
import math

import numpy as np


def jacobi_eigh(a_in, tol=1e-15, max_sweeps=100):
    a = np.array(a_in, dtype=np.float64, copy=True)
    n = a.shape[0]
    v = np.eye(n)
    scale = math.sqrt(float(np.sum(a * a)))
    if scale == 0.0:
        return np.zeros(n), v, 0

    sweep = 0
    iu = np.triu_indices(n, 1)
    while sweep < max_sweeps:
        off = math.sqrt(2.0 * float(np.sum(a[iu] ** 2)))
        if off <= tol * scale:
            break
        sweep += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                app = a[p, p]
                aqq = a[q, q]
                theta = (aqq - app) / (2.0 * apq)
                if theta >= 0.0:
                    t = 1.0 / (theta + math.sqrt(1.0 + theta * theta))
                else:
                    t = -1.0 / (-theta + math.sqrt(1.0 + theta * theta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                tau = s / (1.0 + c)
                colp = a[:, p].copy()
                colq = a[:, q].copy()
                newp = colp - s * (colq + tau * colp)
                newq = colq + s * (colp - tau * colq)
                a[:, p] = newp
                a[:, q] = newq
                a[p, :] = newp
                a[q, :] = newq
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q]
                v[:, p] = vp - s * (vq + tau * vp)
                v[:, q] = vq + s * (vp - tau * vq)
    return np.diag(a).copy(), v, sweep


def cholesky(a_in, eps=1e-13):
    a = np.asarray(a_in, dtype=np.float64)
    n = a.shape[0]
    l = np.zeros((n, n))
    floor = eps * max(float(np.max(np.diag(a))), 0.0) if n else 0.0
    for j in range(n):
        acc = a[j, j] - l[j, :j] @ l[j, :j]
        if acc <= floor or acc <= 0.0:
            return None, j
        l[j, j] = math.sqrt(acc)
        l[j + 1:, j] = (a[j + 1:, j] - l[j + 1:, :j] @ l[j, :j]) / l[j, j]
    return l, -1
