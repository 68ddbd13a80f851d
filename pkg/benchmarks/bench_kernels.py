"""Time the numba kernels against their numpy fallbacks on realistic inputs.

    python benchmarks/bench_kernels.py --radius 8 --repeat 5
"""

import argparse
import time

import numpy as np

from admissible import kernels
from admissible._accel import HAS_NUMBA
from admissible.admissibility import ExponentSet, _NormEngine, default_tau_grid
from admissible.groups import Heisenberg, group_from_name, identity_ball, lengths_of_keys
from admissible.growth import estimate_growth_exponent
from admissible.weights import WeightSpec


def best_time(fn, repeat):
    fn()  # warm-up (includes JIT compilation for numba)
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def inputs(group, radius):
    G = group_from_name(group)
    ball = identity_ball(G, radius)
    keys, lengths = ball.keys, ball.lengths
    bound = 2 * int(lengths.max())
    len_xy = lengths_of_keys(G, G.multiply_keys(keys[:, None], keys[None, :]), bound)
    len_zy = lengths_of_keys(G, G.multiply_keys(G.invert_keys(keys)[None, :], keys[:, None]), bound)
    return lengths, len_xy, len_zy


def tradeoff_inputs():
    G = Heisenberg()
    cert = estimate_growth_exponent(G, max_radius=12)
    eng = _NormEngine(WeightSpec.polynomial(5), WeightSpec.trivial(), G, ExponentSet(2, 2), 40, cert)
    taus = default_tau_grid(40)
    a = np.array([eng.a(t) for t in taus])
    b = np.array([eng.b(t).upper for t in taus])
    return a, b, np.logspace(0, 4, 2000)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--group", default="heisenberg")
    parser.add_argument("--radius", type=int, default=8)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    if not HAS_NUMBA:
        parser.error("numba is not installed; nothing to compare")

    lengths, len_xy, len_zy = inputs(args.group, args.radius)
    poly = (kernels.POLYNOMIAL, 2.0, 0.0)
    one = (kernels.TRIVIAL, 0.0, 0.0)
    a, b, t = tradeoff_inputs()
    cases = {
        "submultiplicative_scan": (lengths, lengths, len_xy, *poly),
        "splitting_scan": (lengths, lengths, len_zy, *poly, *one),
        "tradeoff_minimum": (a, b, t),
    }
    print(f"{args.group}, B(e,{args.radius}) = {lengths.size} elements, {lengths.size ** 2} pairs")
    print(f"{'kernel':<24}{'numpy [s]':>12}{'numba [s]':>12}{'speedup':>10}")
    for name, call_args in cases.items():
        t_np = best_time(lambda: kernels.NUMPY_KERNELS[name](*call_args), args.repeat)
        t_nb = best_time(lambda: kernels.NUMBA_KERNELS[name](*call_args), args.repeat)
        print(f"{name:<24}{t_np:>12.4f}{t_nb:>12.4f}{t_np / t_nb:>10.2f}")


if __name__ == "__main__":
    main()
