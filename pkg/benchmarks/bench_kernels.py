"""Time each numba kernel against its numpy twin.

    python benchmarks/bench_kernels.py [--repeat 5]

The first compiled call (JIT warm-up) is excluded.  Results are checked for
agreement before timing.
"""

import argparse
import timeit

import numpy as np

from qtomo import _kernels
from qtomo.bell import correlation_table
from qtomo.hermitian import measurement_frame, random_density


def hermitian(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return a + a.conj().T


def cases():
    h4 = hermitian(4, 0)
    h8 = hermitian(8, 1)
    m = np.random.default_rng(2).dirichlet(np.ones(5), size=5).T.copy()
    p0 = np.full(5, 0.2)
    frames = np.array([measurement_frame(np.pi / 2, f).data for f in 2 * np.pi * np.arange(48) / 48])
    corr = np.ascontiguousarray(correlation_table(random_density(4, 3).data, frames, frames))
    return [
        ("jacobi 4x4", "jacobi_hermitian", (h4, 1e-14, 100)),
        ("jacobi 8x8", "jacobi_hermitian", (h8, 1e-14, 100)),
        ("power iterate 5x5", "power_iterate", (m, p0, 1e-14, 100_000, 64)),
        ("power sum N=1e4", "power_sum", (m, 10_000)),
        ("chsh grid 48^4", "chsh_grid_argmax", (corr,)),
    ]


def agree(a, b):
    if isinstance(a, tuple):
        return all(agree(x, y) for x, y in zip(a, b))
    return np.allclose(a, b, rtol=1e-10, atol=1e-12)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if _kernels.numba is None:
        raise SystemExit("numba is not installed; nothing to compare")

    print(f"{'kernel':<20}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>10}")
    for label, name, call_args in cases():
        f_np = getattr(_kernels, f"{name}_numpy")
        f_nb = getattr(_kernels, f"{name}_numba")
        if not agree(f_np(*call_args), f_nb(*call_args)):
            raise SystemExit(f"{label}: numba and numpy results differ")
        number = 3
        t_np = min(timeit.repeat(lambda: f_np(*call_args), number=number, repeat=args.repeat)) / number
        t_nb = min(timeit.repeat(lambda: f_nb(*call_args), number=number, repeat=args.repeat)) / number
        print(f"{label:<20}{1e3 * t_np:>12.3f}{1e3 * t_nb:>12.3f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
