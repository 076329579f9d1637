#!/usr/bin/env python3
"""Independent evaluation of the frozen reference numbers used by the C++ tests.

Everything here is computed with mpmath at 50 digits straight from the defining
formulas, without touching the C++ code paths.  Re-run after changing the
bundled coefficients in data/xenon_srpcf.yaml and update the frozen constants.
"""
import mpmath as mp

mp.mp.dps = 50

C = mp.mpf(299792458)
J01 = mp.mpf("2.405")

# Xenon, Boerzsoenyi et al. (2008): B, C[um^2] at 273.15 K, 1 bar
XE = [(mp.mpf("103701.61e-8"), mp.mpf("12.75e-3")), (mp.mpf("31228.61e-8"), mp.mpf("0.561e-3"))]
# Fused silica, Malitson (1965): B, lambda_r[um]
SI = [(mp.mpf("0.6961663"), mp.mpf("0.0684043") ** 2),
      (mp.mpf("0.4079426"), mp.mpf("0.1162414") ** 2),
      (mp.mpf("0.8974794"), mp.mpf("9.896161") ** 2)]
T_REF = mp.mpf("273.15")


def sellmeier(terms, lam_nm):
    l2 = (mp.mpf(lam_nm) / 1000) ** 2
    return mp.sqrt(1 + sum(b * l2 / (l2 - c) for b, c in terms))


def n_gas(lam_nm, p_bar, t_k=293):
    return 1 + (sellmeier(XE, lam_nm) - 1) * mp.mpf(p_bar) * T_REF / mp.mpf(t_k)


def n_si(lam_nm):
    return sellmeier(SI, lam_nm)


def neff(lam_nm, p_bar, r_um, t_nm, resonant=True):
    lam = mp.mpf(lam_nm) * mp.mpf("1e-9")
    r = mp.mpf(r_um) * mp.mpf("1e-6")
    k0 = 2 * mp.pi / lam
    ng, ns = n_gas(lam_nm, p_bar), n_si(lam_nm)
    n = ng - J01 ** 2 / (2 * k0 ** 2 * ng * r ** 2)
    if resonant:
        psi = k0 * mp.mpf(t_nm) * mp.mpf("1e-9") * mp.sqrt(ns ** 2 - ng ** 2)
        eps = ns ** 2 / ng ** 2
        n -= J01 ** 2 / (k0 ** 3 * ng ** 2 * r ** 3) * mp.cot(psi) / mp.sqrt(eps - 1) * (eps + 1) / 2
    return n


def resonance(t_nm, m, p_bar=0):
    """Solve lambda = 2 t sqrt(n_si^2 - n_gas^2) / m with a bracketing root finder."""
    f = lambda lam: lam - 2 * mp.mpf(t_nm) * mp.sqrt(n_si(lam) ** 2 - n_gas(lam, p_bar) ** 2) / m
    return mp.findroot(f, (150 if m > 2 else 220, 1500), solver="anderson")


def beta2_fs2_per_mm(lam_nm, p_bar, r_um, t_nm, resonant=True):
    w0 = 2 * mp.pi * C / (mp.mpf(lam_nm) * mp.mpf("1e-9"))
    beta = lambda w: w / C * neff(2 * mp.pi * C / w * mp.mpf("1e9"), p_bar, r_um, t_nm, resonant)
    return mp.diff(beta, w0, 2) * mp.mpf("1e27")


def main():
    print("gas_index(400 nm, 1 bar, 293 K)      =", mp.nstr(n_gas(400, 1), 20))
    print("gas_index(800 nm, 1 bar, 293 K) - 1  =", mp.nstr(n_gas(800, 1) - 1, 20))
    print("silica_index(589 nm)                 =", mp.nstr(n_si(589), 20))
    print("neff vacuum baseline 800 nm          =", mp.nstr(neff(800, 0, "10.25", 300, False), 20))
    print("neff vacuum baseline 800 nm - 1      =", mp.nstr(neff(800, 0, "10.25", 300, False) - 1, 20))
    for t in (300, 320, 340):
        print(f"lambda_1 (t={t}, vacuum)             =", mp.nstr(resonance(t, 1), 15))
    print("lambda_2 (t=300, vacuum)             =", mp.nstr(resonance(300, 2), 15))
    print("lambda_3 (t=300, vacuum)             =", mp.nstr(resonance(300, 3), 15))
    # nonlinear coefficient: gamma = 2 pi n2 / (lambda_p * k * pi R^2)
    n2, k, r, lp = mp.mpf("5.2e-23"), mp.mpf("1.5"), mp.mpf("10.25e-6"), mp.mpf("400e-9")
    gamma = 2 * mp.pi * n2 / (lp * k * mp.pi * r ** 2)
    print("gamma(1 bar) [1/(W km)]              =", mp.nstr(gamma * 1000, 15))
    # Gaussian peak power
    peak = 2 * mp.sqrt(mp.log(2) / mp.pi) * mp.mpf("0.140") / (mp.mpf("76e6") * mp.mpf("6.7e-12"))
    print("peak power [W]                       =", mp.nstr(peak, 15))
    # pump single-pulse spectral FWHM (time-bandwidth 2 ln2 / pi)
    dnu = 2 * mp.log(2) / mp.pi / mp.mpf("6.7e-12")
    print("pump spectral FWHM [GHz]             =", mp.nstr(dnu / 1e9, 15))
    print("pair envelope FWHM [GHz]             =", mp.nstr(mp.sqrt(2) * dnu / 1e9, 15))
    print("beta2 vacuum baseline 800 [fs2/mm]   =", mp.nstr(beta2_fs2_per_mm(800, 0, "10.25", 300, False), 15))
    print("beta2 analytic capillary  [fs2/mm]   =",
          mp.nstr(-J01 ** 2 * C / ((mp.mpf("10.25e-6")) ** 2 * (2 * mp.pi * C / mp.mpf("800e-9")) ** 3) * mp.mpf("1e27"), 15))
    # resonant minus baseline index midway (in wavelength) between lambda_2 and lambda_1, t = 300 nm, vacuum
    mid = (resonance(300, 1) + resonance(300, 2)) / 2
    print("lambda midway (t=300, vacuum) [nm]   =", mp.nstr(mid, 15))
    print("n_res - n_base at that midpoint      =",
          mp.nstr(neff(mid, 0, "10.25", 300) - neff(mid, 0, "10.25", 300, False), 15))
    # vacuum resonant ZDW between the m=2 and m=1 resonances
    zdw = mp.findroot(lambda l: beta2_fs2_per_mm(l, 0, "10.25", 300), (340, 420), solver="anderson")
    print("ZDW vacuum resonant [nm]             =", mp.nstr(zdw, 10))


if __name__ == "__main__":
    main()
