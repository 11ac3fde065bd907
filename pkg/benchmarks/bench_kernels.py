"""Time the numba and numpy kernels side by side, plus one full link trial per backend.

Run with ``python benchmarks/bench_kernels.py``. The end-to-end figures
come from fresh subprocesses so the backend switch is honoured.
"""

import os
import subprocess
import sys
import timeit

import numpy as np

from spreamble import _kernels
from spreamble.channel import cscg, make_rng
from spreamble.pool import enumerate_ssets

TRIAL = """
import timeit
from spreamble import BACKEND
from spreamble.channel import make_rng
from spreamble.simulate import LinkSetup, run_link_trial
s = LinkSetup(M=100, K=16, L=32, B=2, snr=10.0)
run_link_trial(s, make_rng(0, 0))
n = 300
t = timeit.timeit(lambda: run_link_trial(s, make_rng(0, 1)), number=n)
print(f"{BACKEND:6s} {t / n * 1e6:9.1f} us per link trial")
"""


def bench(label, fn, number):
    fn()
    t = min(timeit.repeat(fn, number=number, repeat=5)) / number
    print(f"{label:34s} {t * 1e6:9.1f} us")


def main():
    rng = make_rng(0)
    M, L = 100, 32
    G = np.ascontiguousarray(cscg(rng, (M, L)) * 4)
    pairs = enumerate_ssets(L, 2).index_array
    kappa = rng.integers(0, 3, L)
    V = cscg(rng, (M, 16))
    W = cscg(rng, (M, 16))
    target = np.arange(16)

    print(f"kernels at M={M}, L={L} (Q={pairs.shape[0]}), K=16")
    bench("pair_test numpy", lambda: _kernels.pair_test_numpy(G, pairs, kappa, 10.0, 1.0), 500)
    bench("conjugate_sinr numpy", lambda: _kernels.conjugate_sinr_numpy(W, V, target, 10.0, 1.0), 2000)
    if _kernels.njit is not None:
        bench("pair_test numba", lambda: _kernels.pair_test_numba(G, pairs, kappa, 10.0, 1.0), 500)
        bench("conjugate_sinr numba", lambda: _kernels.conjugate_sinr_numba(W, V, target, 10.0, 1.0), 2000)
    else:
        print("numba unavailable; skipping jit kernels")

    print("end to end", flush=True)
    for flag in ("0", "1"):
        env = {"SPREAMBLE_DISABLE_NUMBA": flag}
        subprocess.run([sys.executable, "-c", TRIAL], env={**os.environ, **env}, check=True)


if __name__ == "__main__":
    main()
