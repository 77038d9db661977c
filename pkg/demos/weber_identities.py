"""Weber functions as squares of Siegel functions.

The three Weber functions are eta quotients.  Their squares agree with the
three Siegel functions of level 2 up to explicit eighth roots of unity, and
the product of those Siegel functions is the constant 2 zeta_8.  We check
all of this with certified enclosures at a handful of CM points.
"""

from cmunits.numerics import QuadSurd, root_of_unity
from cmunits.quadforms import theta_K
from cmunits.siegel import SiegelIndex, eval_gamma2, eval_siegel, eval_weber

PREC = 200
G01, G10, G11 = SiegelIndex(0, 1, 2), SiegelIndex(1, 0, 2), SiegelIndex(1, 1, 2)
POINTS = {
    "theta_-7": theta_K(-7),
    "theta_-8": theta_K(-8),
    "theta_-11": theta_K(-11),
    "i": QuadSurd(0, 1, 1, -1),
    "(1 + 6i)/3": QuadSurd(1, 6, 3, -1),
}


def main():
    z8 = lambda k: root_of_unity(8, k, PREC)
    for name, tau in POINTS.items():
        f, f1, f2 = (eval_weber(k, tau, PREC) for k in ("f", "f1", "f2"))
        g01, g10, g11 = (eval_siegel(i, tau, PREC) for i in (G01, G10, G11))
        checks = {
            "f^2 = z8^5 g(1/2,1/2)": (f * f).overlaps(z8(5) * g11),
            "f1^2 = -g(1/2,0)": (f1 * f1).overlaps(-g10),
            "f2^2 = z8^6 g(0,1/2)": (f2 * f2).overlaps(z8(6) * g01),
            "g g g = 2 z8": (g01 * g10 * g11).overlaps(2 * z8(1)),
        }
        print(f"{name:>11}: " + ", ".join(f"{k} {'ok' if v else 'FAILS'}" for k, v in checks.items()))

    # gamma_2 from any of the three level-2 functions
    tau = theta_K(-11)
    for idx in (G01, G10, G11):
        g4 = eval_siegel(idx, tau, PREC) ** 4
        print(f"(g{idx}^12 + 16)/g^4 at theta_-11 =", ((g4**3 + 16) / g4).re.decimal(15))
    print("gamma_2(theta_-11) =", eval_gamma2(tau, PREC).re.decimal(15))


if __name__ == "__main__":
    main()
