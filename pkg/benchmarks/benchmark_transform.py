"""
Distributed under the terms of the BSD 3-Clause License.

The full license is in the file LICENSE, distributed with this software.

Author: Jun Zhu
"""
import argparse
import time

import numpy as np

from fracdrift import (
    DriftBasis, FbmSampler, MartingaleTransform, RngSeed, SamplePath,
    TimeGrid, make_hurst_model, mle_estimate, psi_closed_poly, weight_w
)


class BenchmarkMartingaleTransform:
    def __init__(self, H, n_pts, degree):
        self._model = make_hurst_model(H)
        self._grid = TimeGrid.uniform(1., n_pts)
        self._basis = DriftBasis.polynomial(degree, 1.)

    def run(self, n_paths):
        sampler = FbmSampler(self._model, self._grid)
        values = sampler.sample_values(RngSeed(0).generator(), size=n_paths)

        t0 = time.perf_counter()
        transform = MartingaleTransform(self._model, self._grid, 1.)
        t_setup = time.perf_counter() - t0

        t0 = time.perf_counter()
        M = transform.apply_values(values)
        t_apply = time.perf_counter() - t0

        t0 = time.perf_counter()
        psi = psi_closed_poly(self._model, self._basis, self._grid)
        for v in values[:100]:
            mle_estimate(psi, transform(SamplePath(self._grid, v)))
        t_mle = (time.perf_counter() - t0) / min(n_paths, 100)

        ratio = np.var(M[:, -1]) / weight_w(self._model, 1.)
        print(f"H = {self._model.H}, N = {self._grid.n}: weights "
              f"{t_setup:.4f} s, {n_paths} paths {t_apply:.4f} s, "
              f"MLE {1e3 * t_mle:.3f} ms/path, Var M(1) / w(1) = "
              f"{ratio:.4f}")


if __name__ == '__main__':
    parser = argparse.ArgumentParser()
    parser.add_argument('pts', type=int, default=512, nargs='?')
    parser.add_argument('--hurst', type=float, default=0.3)
    parser.add_argument('--paths', type=int, default=1000)
    parser.add_argument('--degree', type=int, default=2)

    args = parser.parse_args()

    BenchmarkMartingaleTransform(
        args.hurst, args.pts, args.degree).run(args.paths)
