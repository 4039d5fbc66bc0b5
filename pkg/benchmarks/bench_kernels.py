"""Time the compiled and pure-Python kernels on the same inputs.

    python benchmarks/bench_kernels.py [--repeat 3] [--nodes 2000]
"""

import argparse
import time

import numpy as np

from spine import _kernels
from spine.cli import bundled_path
from spine.community import louvain
from spine.graph import Graph, load_edge_list


def random_graph(n, avg_degree, seed):
    rng = np.random.default_rng(seed)
    m = n * avg_degree // 2
    u = rng.integers(0, n, m)
    v = rng.integers(0, n, m)
    keep = u != v
    w = rng.integers(1, 10, m)
    return Graph.from_edges([str(i) for i in range(n)], list(zip(u[keep].tolist(), v[keep].tolist(), w[keep].tolist())))


def best_time(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--nodes", type=int, default=2000)
    args = ap.parse_args(argv)

    backends = ["python"]
    try:
        _kernels.get_backend("cython")
        backends.append("cython")
    except ImportError:
        print("compiled extension not built; timing the Python backend only")

    graphs = {
        "lesmis": load_edge_list(bundled_path("lesmis.edges")),
        f"random-{args.nodes}": random_graph(args.nodes, 8, 0),
    }
    print(f"{'graph':<14}{'kernel':<12}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    for gname, g in graphs.items():
        indptr, indices, _ = g.csr
        rows = {
            "bfs_shells": lambda b: _kernels.get_backend(b).bfs_shells(indptr, indices),
            "louvain": lambda b: louvain(g, seed=0, backend=b),
        }
        for kname, fn in rows.items():
            t = {b: best_time(lambda: fn(b), args.repeat) for b in backends}
            speed = f"{t['python'] / t['cython']:>9.1f}x" if "cython" in t else ""
            print(f"{gname:<14}{kname:<12}" + "".join(f"{t[b]:>11.4f}s" for b in backends) + speed)


if __name__ == "__main__":
    main()
