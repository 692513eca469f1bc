"""
Distributed under the terms of the BSD 3-Clause License.

The full license is in the file LICENSE, distributed with this software.

Author: Jun Zhu
"""
import argparse
import time

import numpy as np

from fracdrift import FbmSampler, RngSeed, TimeGrid, make_hurst_model


class BenchmarkFbmSampler:
    def __init__(self, H, n_pts, method):
        self._model = make_hurst_model(H)
        self._grid = TimeGrid.uniform(1., n_pts)
        self._method = method

    def run(self, n_paths):
        t0 = time.perf_counter()
        sampler = FbmSampler(self._model, self._grid, self._method)
        t_setup = time.perf_counter() - t0

        rng = RngSeed(0).generator()
        t0 = time.perf_counter()
        paths = sampler.sample_values(rng, size=n_paths)
        t_sample = time.perf_counter() - t0

        # Var B(1) = 1
        var = np.var(paths[:, -1])
        print(f"{self._method}, N = {self._grid.n}: setup {t_setup:.4f} s, "
              f"{n_paths} paths {t_sample:.4f} s, Var B(1) = {var:.4f}")


if __name__ == '__main__':
    parser = argparse.ArgumentParser()
    parser.add_argument('pts', type=int, default=512, nargs='?')
    parser.add_argument('--hurst', type=float, default=0.3)
    parser.add_argument('--paths', type=int, default=1000)
    parser.add_argument('--method', choices=('cholesky', 'hosking', 'all'),
                        default='all')

    args = parser.parse_args()

    methods = ('cholesky', 'hosking') if args.method == 'all' \
        else (args.method,)
    for method in methods:
        BenchmarkFbmSampler(args.hurst, args.pts, method).run(args.paths)
