"""Distribution and graph distances between an original graph and a backbone."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from spine import _kernels
from spine.graph import Graph, GraphError

NETLSD_TIMES = np.logspace(-2, 2, 250)


class NumericalError(RuntimeError):
    pass


def ks_statistic(a: Sequence[float], b: Sequence[float]) -> float:
    """Two-sample Kolmogorov-Smirnov statistic: the largest gap between empirical CDFs."""
    a = np.sort(np.asarray(a, dtype=np.float64))
    b = np.sort(np.asarray(b, dtype=np.float64))
    if a.size == 0 or b.size == 0:
        raise ValueError("KS statistic needs two non-empty samples")
    grid = np.concatenate([a, b])
    fa = np.searchsorted(a, grid, side="right") / a.size
    fb = np.searchsorted(b, grid, side="right") / b.size
    return float(np.abs(fa - fb).max())


def portrait(g: Graph) -> np.ndarray:
    """Network portrait ``B[l, k]``: how many nodes have exactly ``k`` nodes at hop distance ``l``.

    Shape is ``(diameter + 1, V)``; unreachable pairs are simply not counted,
    which makes disconnected graphs well defined.
    """
    n = g.n_nodes
    if n == 0:
        raise GraphError("portrait of an empty graph")
    indptr, indices, _ = g.csr
    shells = _kernels.bfs_shells(indptr, indices)
    B = np.zeros((shells.shape[1], n), dtype=np.int64)
    for l in range(shells.shape[1]):
        B[l] = np.bincount(shells[:, l], minlength=n)[:n]
    return B


def _portrait_distribution(B: np.ndarray, shape: tuple[int, int]) -> np.ndarray:
    P = np.zeros(shape, dtype=np.float64)
    k = np.arange(B.shape[1], dtype=np.float64)
    P[: B.shape[0], : B.shape[1]] = B * k[None, :]
    return P / P.sum()


def jensen_shannon(p: np.ndarray, q: np.ndarray) -> float:
    """Jensen-Shannon divergence in bits between two distributions of equal shape."""
    p, q = np.ravel(p), np.ravel(q)
    m = 0.5 * (p + q)

    def kl(x):
        mask = x > 0
        return float((x[mask] * np.log2(x[mask] / m[mask])).sum())

    return max(0.0, 0.5 * kl(p) + 0.5 * kl(q))


def portrait_divergence(g1: Graph, g2: Graph) -> float:
    """Portrait divergence in [0, 1].

    Each portrait becomes the distribution ``P(l, k) ∝ k * B[l, k]`` (the
    chance that a random reachable ordered pair sits at distance ``l`` with
    the source having ``k`` nodes at that distance); the two are padded to a
    common shape and compared with the Jensen-Shannon divergence.
    """
    B1, B2 = portrait(g1), portrait(g2)
    shape = (max(B1.shape[0], B2.shape[0]), max(B1.shape[1], B2.shape[1]))
    return min(1.0, jensen_shannon(_portrait_distribution(B1, shape), _portrait_distribution(B2, shape)))


def laplacian(g: Graph) -> np.ndarray:
    """Dense unweighted combinatorial Laplacian ``D - A``."""
    n = g.n_nodes
    L = np.zeros((n, n), dtype=np.float64)
    L[g.src, g.dst] = -1.0
    L[g.dst, g.src] = -1.0
    L[np.arange(n), np.arange(n)] = g.degrees
    return L


def laplacian_spectrum(g: Graph) -> np.ndarray:
    """Non-decreasing eigenvalues of the unweighted Laplacian (tiny negatives clipped to 0)."""
    if g.n_nodes == 0:
        raise GraphError("spectrum of an empty graph")
    try:
        vals = np.linalg.eigvalsh(laplacian(g))
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolve failed for {g!r}: {exc}") from exc
    vals = np.sort(vals)
    vals[np.abs(vals) < 1e-10] = 0.0
    return vals


def _pad_front(a: np.ndarray, n: int) -> np.ndarray:
    # missing eigenvalues are those of absent isolated nodes, i.e. zeros
    return np.concatenate([np.zeros(n - a.shape[0]), a])


def spectrum_distance(s1: np.ndarray, s2: np.ndarray) -> float:
    n = max(s1.shape[0], s2.shape[0])
    return float(np.linalg.norm(_pad_front(s1, n) - _pad_front(s2, n)))


def laplacian_spectrum_distance(g1: Graph, g2: Graph) -> float:
    """Euclidean distance between sorted Laplacian spectra, the shorter zero-padded."""
    return spectrum_distance(laplacian_spectrum(g1), laplacian_spectrum(g2))


def heat_trace(spectrum: np.ndarray, times: np.ndarray = NETLSD_TIMES) -> np.ndarray:
    """Heat-trace signature ``h(t) = sum_j exp(-t * lambda_j)`` at each time."""
    return np.exp(-np.outer(times, spectrum)).sum(axis=1)


def netlsd_signature(g: Graph, times: np.ndarray = NETLSD_TIMES) -> np.ndarray:
    return heat_trace(laplacian_spectrum(g), times)


def netlsd_distance(g1: Graph, g2: Graph) -> float:
    """Euclidean distance between heat-trace signatures on 250 log-spaced times in [0.01, 100]."""
    return float(np.linalg.norm(netlsd_signature(g1) - netlsd_signature(g2)))


def write_signature_csv(g: Graph, path, times: np.ndarray = NETLSD_TIMES) -> None:
    h = netlsd_signature(g, times)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("t,h\n")
        for t, v in zip(times.tolist(), h.tolist()):
            fh.write(f"{t!r},{v!r}\n")


def write_spectrum(g: Graph, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for v in laplacian_spectrum(g).tolist():
            fh.write(f"{v!r}\n")
