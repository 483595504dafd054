"""Time the numba kernels against the numpy fallbacks on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat N] [--quick]

Each row reports the best of N runs after one warm-up call (which also
triggers numba compilation), and checks that both backends agree.
"""
import argparse
import time

import numpy as np

from asmcurve import curve_from_dict, kernels
from asmcurve.curve import rational_points
from asmcurve.gf import build_field


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def series_case(quick):
    F = build_field(3, 4)
    rng = np.random.default_rng(0)
    n = 200 if quick else 2000
    a, b = rng.integers(0, F.size, n), rng.integers(0, F.size, n)
    return "series_mul", (a, b, n, F.add_t, F.mul_t), f"F81, n={n}"


def rref_case(quick):
    F = build_field(2, 6)
    rng = np.random.default_rng(1)
    r, c = (40, 60) if quick else (160, 240)
    M = rng.integers(0, F.size, (r, c))
    return "row_reduce", (M, F.add_t, F.mul_t, F.inv_t, F.neg_t), f"F64, {r}x{c}"


def scan_case(quick):
    cv = curve_from_dict(dict(p=3, e=1, L1=[2, 1], L2=[2, 1], c=1))
    F = build_field(3, 1 if quick else 2)
    N = F.size
    pts = rational_points(cv, F)
    col2s = F.mul_t[np.arange(1, N)[:, None, None], pts[None]].reshape(-1, 3)
    col3s = np.indices((N, N, N)).reshape(3, -1).T.copy()
    on = np.zeros(N**3, dtype=np.bool_)
    on[pts[:, 0] * N * N + pts[:, 1] * N + pts[:, 2]] = True
    args = (pts, col2s, col3s, pts[:5], on, F.add_t, F.mul_t, F.inv_t, F.neg_t, N)
    return "stabilizer_scan", args, f"F{N}, {len(pts) * len(col2s) * len(col3s)} candidates"


def _agree(a, b):
    if isinstance(a, tuple):
        return all(np.array_equal(x, y) for x, y in zip(a, b))
    return np.array_equal(a, b)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="small inputs, for smoke tests")
    args = ap.parse_args(argv)
    if kernels.series_mul_numba is None:
        raise SystemExit("numba is not installed; nothing to compare")
    rows = []
    for make in (series_case, rref_case, scan_case):
        name, inputs, label = make(args.quick)
        t_np, out_np = best_of(lambda: getattr(kernels, f"{name}_numpy")(*inputs), args.repeat)
        t_nb, out_nb = best_of(lambda: getattr(kernels, f"{name}_numba")(*inputs), args.repeat)
        same = _agree(out_np, out_nb)
        rows.append((name, label, t_np, t_nb, same))
    print(f"{'kernel':<16} {'input':<26} {'numpy [s]':>10} {'numba [s]':>10} {'speedup':>8}  agree")
    for name, label, t_np, t_nb, same in rows:
        print(f"{name:<16} {label:<26} {t_np:>10.4f} {t_nb:>10.4f} {t_np / t_nb:>8.1f}  {same}")
    return rows


if __name__ == "__main__":
    main()
