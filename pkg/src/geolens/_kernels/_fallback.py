"""NumPy implementations of the scan kernels (chunked to bound memory).

Scans reduce a squared pre-metric (squared chord, or Minkowski square of
the difference) and apply the monotone arc transform only to the result,
mirroring the compiled kernel.
"""

import numpy as np

BACKEND = "numpy"

_CHUNK = 512


def _block_sq(a, b, kind):
    """Squared pre-metric matrix between row blocks a (m,d) and b (n,d)."""
    diff = a[:, None, :] - b[None, :, :]
    if kind == 2:
        sq = np.einsum("ijk,ijk->ij", diff[:, :, 1:], diff[:, :, 1:]) - diff[:, :, 0] ** 2
        return np.clip(sq, 0.0, None)
    if kind in (0, 1):
        return np.einsum("ijk,ijk->ij", diff, diff)
    raise ValueError(f"unknown kernel geometry code {kind}")


def _finish(sq, kind, scale):
    sq = np.asarray(sq)
    if kind == 0:
        return np.sqrt(sq)
    if kind == 1:
        return 2.0 * scale * np.arcsin(np.clip(np.sqrt(sq) / (2.0 * scale), 0.0, 1.0))
    return 2.0 * scale * np.arcsinh(np.sqrt(sq) / (2.0 * scale))


def pairwise_max(points, kind, scale=1.0):
    pts = np.ascontiguousarray(points, dtype=np.float64)
    n = pts.shape[0]
    if n < 2:
        return 0.0, 0, 0
    best = -1.0
    bi = bj = 0
    for i0 in range(0, n, _CHUNK):
        a = pts[i0 : i0 + _CHUNK]
        for j0 in range(i0, n, _CHUNK):
            sq = _block_sq(a, pts[j0 : j0 + _CHUNK], kind)
            if j0 == i0:
                sq = np.triu(sq, k=1)
            k = int(np.argmax(sq))
            i, j = divmod(k, sq.shape[1])
            if sq[i, j] > best:
                best = float(sq[i, j])
                bi, bj = i0 + i, j0 + j
    return float(_finish(best, kind, scale)), bi, bj


def min_dist_to(points, targets, kind, scale=1.0):
    pts = np.ascontiguousarray(points, dtype=np.float64)
    tgt = np.ascontiguousarray(targets, dtype=np.float64)
    out = np.full(pts.shape[0], np.inf)
    for i0 in range(0, pts.shape[0], _CHUNK):
        a = pts[i0 : i0 + _CHUNK]
        row_min = np.full(a.shape[0], np.inf)
        for j0 in range(0, tgt.shape[0], _CHUNK):
            sq = _block_sq(a, tgt[j0 : j0 + _CHUNK], kind)
            np.minimum(row_min, sq.min(axis=1), out=row_min)
        out[i0 : i0 + a.shape[0]] = row_min
    return _finish(out, kind, scale)
