"""Time the compiled tree kernels against the pure-numpy fallback.

Both engines are driven on the same fit; besides the timing table the
script checks that their serialized models match byte for byte, which
is the contract the fallback has to keep.

    python benchmarks/kernel_speed.py --rows 4000 --trees 30
"""
import argparse
import time

from drainboost.data import synthesize
from drainboost.hgbc import HgbcParams, fit
from drainboost.hgbc.backend import HAS_NUMBA
from drainboost.hgbc.serialize import model_to_text


def best_of(engine, x, y, params, repeats):
    fit(x, y, params, engine=engine)  # first call may pay compilation
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        model = fit(x, y, params, engine=engine)
        best = min(best, time.perf_counter() - t0)
    return best, model


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--rows", type=int, default=4000)
    parser.add_argument("--trees", type=int, default=30)
    parser.add_argument("--bins", type=int, default=255)
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    ds = synthesize((1 / 3, 1 / 3, 1 / 3), args.rows, args.seed).dataset
    params = HgbcParams(n_trees=args.trees, max_bins=args.bins)
    print(f"rows={args.rows} features={ds.features.shape[1]} "
          f"trees={args.trees} bins={args.bins} best of {args.repeats}")

    numpy_s, numpy_model = best_of("numpy", ds.features, ds.labels, params, args.repeats)
    print(f"numpy   {numpy_s:8.3f} s/fit")
    if not HAS_NUMBA:
        print("numba   not installed, skipping")
        return

    numba_s, numba_model = best_of("numba", ds.features, ds.labels, params, args.repeats)
    print(f"numba   {numba_s:8.3f} s/fit   ({numpy_s / numba_s:.1f}x)")
    same = model_to_text(numba_model) == model_to_text(numpy_model)
    print(f"identical serialized model: {'yes' if same else 'NO'}")
    if not same:
        raise SystemExit(1)


if __name__ == "__main__":
    main()
