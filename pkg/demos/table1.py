"""Singular moduli of the nine class-number-one fields.

For each field we evaluate j and its cube root gamma_2 at theta_K as balls,
then read off the integer each ball pins down.  The only inputs are the
discriminants; every digit printed below is computed.
"""

from cmunits.invariants import recognize_with_retry
from cmunits.quadforms import theta_K
from cmunits.siegel import eval_gamma2, eval_j

DISCRIMINANTS = [-3, -4, -7, -8, -11, -19, -43, -67, -163]


def integer_value(fn, tau):
    # a one-point "polynomial" X - v; recognition doubles precision if needed
    poly = recognize_with_retry(lambda prec: [fn(tau, prec)], max_prec=1024)
    return -poly.coeffs[1], poly.precision_used


def main():
    print(f"{'d':>5} {'j(theta_K)':>22} {'gamma_2':>9}  bits")
    for d in DISCRIMINANTS:
        tau = theta_K(d)
        j, bits = integer_value(eval_j, tau)
        g2, _ = integer_value(eval_gamma2, tau)
        assert g2**3 == j
        print(f"{d:>5} {j:>22} {g2:>9}  {bits}")

    # the integer part alone takes 58 bits
    tau = theta_K(-163)
    ball = eval_j(tau, 256)
    print("\nj(theta_-163) enclosure:", ball.re.decimal(30))


if __name__ == "__main__":
    main()
