"""Smoke test for the hyperfilt Python extension.

Run after `maturin develop` (or installing the built wheel):

    python crates/python/python/smoke_test.py
"""

import math
import os
import tempfile

import hyperfilt as hf


def close(a, b, tol):
    assert abs(a - b) <= tol, f"{a} vs {b} (tol {tol})"


def main():
    # polynomials
    close(hf.eval_legendre(2, 3, 0.5), -0.125, 1e-15)
    for method in ("explicit", "rodrigues", "integral", "recurrence"):
        close(hf.eval_legendre(6, 5, 0.3, method), hf.eval_legendre(6, 5, 0.3), 1e-12)
    close(hf.eval_gegenbauer(3, 1.0, 0.5), -1.0, 1e-14)
    assert [hf.dim_harmonics(l, 4) for l in range(4)] == [1, 4, 9, 16]
    close(hf.surface_area(3), 4 * math.pi, 1e-14)
    partial, closed, bound = hf.poisson_generating_sum(0.3, 0.2, 3, 40)
    assert abs(partial - closed) <= bound + 1e-14

    nodes, weights = hf.gauss_gegenbauer_rule(5, 0.0)
    close(sum(w * t**8 for t, w in zip(nodes, weights)), 2 / 9, 1e-14)

    # kernel
    close(hf.kernel_normalization(4, 0.9), 1.0, 1e-10)
    passed, _, sups = hf.kernel_limit_check(3)
    assert passed and sups[-1] < sups[0]

    # grids and sampled functions
    grid = hf.SphereGrid(3, 20)
    close(grid.total_weight, 4 * math.pi, 1e-12)
    p3 = hf.SampledFunction.zonal(grid, 3)
    close(p3.l2_norm() ** 2, 4 * math.pi / 7, 1e-12)

    out = hf.filtrate(p3, 0.5, l_max=3)
    close(out.l2_norm() / p3.l2_norm(), 0.125, 1e-12)
    direct = hf.filtrate(p3, 0.5)
    assert direct.max_abs_diff(out) < 1e-9

    f = hf.SampledFunction.from_function(grid, lambda x: 1.0 + x[0] - 2.0 * x[1] * x[2], band=2)
    spec = hf.spectrum(f, 3)
    close(spec[3], 0.0, 1e-12)
    parts = hf.decompose(f, 2)
    total = parts[0].values()
    for part in parts[1:]:
        total = [a + b for a, b in zip(total, part.values())]
    assert max(abs(a - b) for a, b in zip(total, f.values())) < 1e-12
    close(hf.project(f, 0).real_values()[0], 1.0, 1e-12)

    conv = hf.convolve(p3, l=3)
    close(conv.l2_norm() / p3.l2_norm(), 4 * math.pi / 7, 1e-12)
    mult, claimed = hf.convolution_multiplier(3, 2, r=0.5)
    close(mult, 0.25, 1e-12)
    close(claimed, math.sqrt(5), 1e-12)

    z = hf.SampledFunction(grid, [complex(v, -v) for v in p3.real_values()], band=3)
    assert z.is_complex
    close(hf.filtrate_spectral(z, 0.5, 3).l2_norm(), 0.125 * z.l2_norm(), 1e-12)

    # files
    with tempfile.TemporaryDirectory() as tmp:
        gpath = os.path.join(tmp, "grid.txt")
        vpath = os.path.join(tmp, "values.txt")
        grid.save(gpath)
        p3.save(vpath)
        back = hf.SphereGrid.load(gpath)
        assert back.checksum == grid.checksum
        assert hf.SampledFunction.load(back, vpath).max_abs_diff(p3) == 0.0
        try:
            hf.SampledFunction.load(hf.SphereGrid(3, 4), vpath)
        except hf.IntegrityError:
            pass
        else:
            raise AssertionError("values bound to another grid were accepted")

    # errors
    for call, exc in [
        (lambda: hf.eval_legendre(2, 3, 1.5), hf.DomainError),
        (lambda: hf.filtrate(hf.SampledFunction.zonal(hf.SphereGrid(3, 4), 3), 0.5), hf.CapabilityError),
        (lambda: hf.SampledFunction(grid, [1.0, 2.0]), hf.ContractError),
        (lambda: hf.SphereGrid.load("/nonexistent/grid.txt"), OSError),
    ]:
        try:
            call()
        except exc:
            pass
        else:
            raise AssertionError(f"expected {exc.__name__}")

    ok, report = hf.run_checks("polynomials")
    assert ok, report
    print("smoke test passed")


if __name__ == "__main__":
    main()
