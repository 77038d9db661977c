"""Conjugating a level-2 Siegel value with explicit reciprocity matrices.

Take K = Q(sqrt(-11)).  The group W of matrices coming from (O_K/2)^* has
three elements; acting on the index (0, 1/2) gives the three conjugates of
g(0,1/2)(theta_K)^12 over the Hilbert class field (here K itself, since
h = 1).  Their product is a rational integer, and so is the cubic they
satisfy.
"""

from cmunits.invariants import conjugates_over_HK, ray_class_degree, recognize_with_retry
from cmunits.modlevel import GL2ModN, decompose, gl2_action
from cmunits.reciprocity import gal_over_HK, kernel, relative_galois, w_group
from cmunits.siegel import SiegelIndex

D = -11


def main():
    print(f"W mod 2 for d = {D}:", [str(m) for m in w_group(2, D)])
    print("unit image:", [str(m) for m in kernel(2, D)])
    reps = gal_over_HK(2, D)
    print(f"[K_(2) : H_K] = {len(reps)} (degree formula gives {ray_class_degree(2, D)})")

    base = SiegelIndex(0, 1, 2)
    for alpha in reps:
        print(f"  {alpha}: (0,1/2) -> {gl2_action(base, alpha)}")

    cubic = recognize_with_retry(lambda p: conjugates_over_HK(2, D, p))
    print("cubic with these roots:", cubic.coeffs, f"(found at {cubic.precision_used} bits)")
    print("so the norm to K is", -cubic.coeffs[-1])

    # one level up: Gal(K_(8)/K_(2)) and the SL2 part of its elements
    rel = relative_galois(8, 2, D)
    print(f"\n#Gal(K_(8)/K_(2)) = {len(rel)}")
    for m in (GL2ModN(8, 5, 4, 4, 1), GL2ModN(8, 7, 6, 2, 1)):
        alpha1, dval = decompose(m)
        print(f"  {m} = {alpha1} * diag(1, {dval}) mod 8; in the group: {m in rel}")


if __name__ == "__main__":
    main()
