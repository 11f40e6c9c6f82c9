"""Time the compiled and pure-Python kernels on the same workloads.

    python3 benchmarks/bench_kernels.py [--repeat N] [--pg33]

Prints one row per workload with the best-of-N time for each backend and
checks that both backends return identical results.
"""
import argparse
import time

from pgkit import build_pg, kernels, load_pg32
from pgkit import enumeration as en
from pgkit.geometry import indices_to_mask


def workloads(include_pg33: bool):
    g = load_pg32()
    spreads = en.enumerate_spreads(g)
    point_cands = [[l for l in range(g.num_lines) if g.lines[l].points >> p & 1] for p in range(g.num_points)]
    smasks = [indices_to_mask(s.lines) for s in spreads]
    line_cands = [[i for i, s in enumerate(spreads) if l in s.lines] for l in range(g.num_lines)]
    yield "PG(3,2) spreads", lambda b: kernels.exact_cover(g.line_masks(), g.all_points, point_cands, backend=b)
    yield "PG(3,2) packings", lambda b: kernels.exact_cover(smasks, g.all_lines, line_cands, backend=b)
    yield "PG(3,2) brute-force spreads", lambda b: kernels.subset_partitions(g.line_masks(), 5, g.all_points, backend=b)
    yield "PG(3,2) Pasch, full", lambda b: kernels.pasch_scan(g.line_through_table, g.line_masks(), True, False, 0, 15, backend=b)
    yield "PG(3,2) transversals, full", lambda b: kernels.transversal_scan(g.line_masks(), True, 0, 35, backend=b)
    h = build_pg(2, 7)
    yield "PG(2,7) Pasch, pruned", lambda b: kernels.pasch_scan(h.line_through_table, h.line_masks(), False, True, 0, h.num_points, backend=b)
    if include_pg33:
        g3 = build_pg(3, 3)
        c3 = [[l for l in range(g3.num_lines) if g3.lines[l].points >> p & 1] for p in range(g3.num_points)]
        # 130-bit line masks: the dispatcher keeps this on the Python backend
        yield "PG(3,3) spreads", lambda b: kernels.exact_cover(g3.line_masks(), g3.all_points, c3, backend=None if b == "cython" else b)
        yield "PG(3,3) transversals, pruned", lambda b: kernels.transversal_scan(g3.line_masks(), False, 0, 130, backend=None if b == "cython" else b)


def best_of(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--pg33", action="store_true", help="add PG(3,3) workloads (slow)")
    args = ap.parse_args()
    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled kernels not built; run `python3 setup.py build_ext --inplace` first")
    print(f"{'workload':<32}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}  agree")
    for name, fn in workloads(args.pg33):
        times, outs = [], []
        for b in backends:
            t, out = best_of(lambda: fn(b), args.repeat)
            times.append(t)
            outs.append(out)
        speed = f"{times[0] / times[-1]:.1f}x" if len(times) > 1 and times[-1] > 0 else "-"
        agree = all(o == outs[0] for o in outs)
        print(f"{name:<32}" + "".join(f"{t * 1000:>10.2f}ms" for t in times) + f"{speed:>10}  {agree}")


if __name__ == "__main__":
    main()
