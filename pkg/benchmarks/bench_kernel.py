"""Compare the compiled sum kernel against the pure-Python fallback.

Times raw Kloosterman-sum evaluation over a sweep of moduli for each
multiplier kind and prints one row per kind with the speedup ratio.

Run from the repository root:

    python3 benchmarks/bench_kernel.py [CMAX]
"""

import sys
import time

from klexact.kernel import pure

try:
    from klexact import _fastkernel
except ImportError:
    _fastkernel = None

KINDS = ("standard", "eta", "eta_bar", "theta", "psi", "third_twist_eta_bar")


def sweep(fn, kind: str, cmax: int) -> tuple[float, complex]:
    acc = 0j
    t0 = time.perf_counter()
    for c in range(1, cmax + 1):
        acc += fn(kind, 1, 1, c)
    return time.perf_counter() - t0, acc


def main() -> None:
    cmax = int(sys.argv[1]) if len(sys.argv) > 1 else 400
    if _fastkernel is None:
        print("compiled kernel not built; timing pure kernel only")
    print(f"summing S(1,1,c) for c = 1..{cmax}")
    print(f"{'kind':<22}{'pure (s)':>10}{'compiled (s)':>14}{'speedup':>9}")
    for kind in KINDS:
        tp, vp = sweep(pure.sum_eval_raw, kind, cmax)
        if _fastkernel is None:
            print(f"{kind:<22}{tp:>10.3f}{'-':>14}{'-':>9}")
            continue
        tc, vc = sweep(_fastkernel.sum_eval_raw, kind, cmax)
        if abs(vp - vc) > 1e-6 * (1 + abs(vp)):
            raise SystemExit(f"kernel mismatch for {kind}: {vp} vs {vc}")
        print(f"{kind:<22}{tp:>10.3f}{tc:>14.3f}{tp / tc:>8.1f}x")


if __name__ == "__main__":
    main()
