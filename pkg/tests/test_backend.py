import numpy as np

from cdsurface import _backend


def _random_inputs(rng, n=24, m=20, N=3, r=2):
    c = lambda *s: rng.standard_normal(s) + 1j * rng.standard_normal(s)
    return {
        "A": c(N, n, r, r), "B": c(N, m, r, r),
        "cw": c(n), "Lw": c(n, r, r), "K": c(n, m, r, r),
        "Rz": c(m, r, r), "cz": c(m),
        "u": c(n), "Ks": c(n, m), "v": c(m),
    }


def test_kernel_table_backends_agree(rng):
    d = _random_inputs(rng)
    a = _backend.kernel_table(d["A"], d["B"])
    b = _backend.kernel_table_numpy(d["A"], d["B"])
    np.testing.assert_allclose(a, b, atol=1e-12)


def test_double_contract_backends_agree(rng):
    d = _random_inputs(rng)
    args = (d["cw"], d["Lw"], d["K"], d["Rz"], d["cz"])
    np.testing.assert_allclose(_backend.double_contract(*args),
                               _backend.double_contract_numpy(*args),
                               atol=1e-12)


def test_scalar_double_contract_backends_agree(rng):
    d = _random_inputs(rng)
    args = (d["u"], d["Ks"], d["v"])
    np.testing.assert_allclose(_backend.scalar_double_contract(*args),
                               _backend.scalar_double_contract_numpy(*args),
                               atol=1e-12)
