"""Regenerate the high-precision constants frozen into the test suite.

Every number a test compares against at tight tolerance was computed here
with 40-digit arithmetic and pasted in as a literal, so the tests never
depend on the package's own floating-point path.  Requires mpmath.

    python3 tools/reference_values.py
"""

from mpmath import mp, mpf, exp, log, sqrt, pi, euler

mp.dps = 40

HBAR_CGS = mpf("6.62607015e-27") / (2 * pi)
KB_CGS = mpf("1.380649e-16")


def show(name: str, value) -> None:
    print(f"{name} = {mp.nstr(value, 17, strip_zeros=False)}")


# thermal wavelength of 1 g at 300 K, and 1 cm measured in it
lam = HBAR_CGS / sqrt(mpf(1) * KB_CGS * 300)
show("thermal_wavelength_1g_300K_cgs", lam)
show("inverse_wavelength_1cm", 1 / lam)

# kT/(hbar gamma) at 1 K and gamma = 1e11 / s
show("classicality_1K_1e11", KB_CGS * 1 / (HBAR_CGS * mpf("1e11")))

# fringe weight relative to the direct terms at d = 5 sigma
show("exp_minus_25_over_8", exp(mpf(-25) / 8))

# single-packet peak height at unit variance
show("inv_sqrt_2pi", 1 / sqrt(2 * pi))

# attenuation with sigma = 1, d = 2, s = 1 (w^2 = 2), and plain exp(-1)
show("exp_minus_quarter", exp(mpf(-1) / 4))
show("exp_minus_one", exp(-mpf(1)))

# cold-bath attenuation at t = 0.1 with m = zeta = sigma = d = 1
t, tau0 = mpf("0.1"), sqrt(8 * pi)
show("low_t_attenuation_at_0p1", exp((t / tau0) ** 2 * (log(t) + euler - mpf(3) / 2)))

# longitudinal polarization after one T1, starting depolarized, at
# hbar omega / k T = 2 ln 3 (occupation exactly 1/8, equilibrium -4/5)
p0 = mpf(-4) / 5
show("p_z_after_one_t1", p0 * (1 - exp(-mpf(1))))

# temperature ratio making sinh(hbar omega / k T) exactly one
show("arcsinh_one", log(1 + sqrt(mpf(2))))

show("euler_gamma", +euler)
