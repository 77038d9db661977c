"""The class-number-one problem at desk scale.

Three cases, split by how 2 and 3 behave in K.  In the first two an
explicit Siegel-function norm would have absolute value < 1 for large |d|,
which is impossible for a nonzero algebraic integer; we certify that bound
with balls and search the small window by counting reduced forms.  In the
third case the real generator of degree three leads to a Diophantine
condition whose integer solutions give the gamma_2 values directly.
"""

from cmunits.classnum import (
    class_number_one_search,
    class_number_two_split_search,
    heegner_solutions,
    match_discriminant,
)


def main():
    res = class_number_one_search()
    print("fields found by case:", res.found)
    worst = max(res.certificates, key=lambda c: c.bound_value.upper())
    print(f"{len(res.certificates)} tail certificates; largest bound {worst.bound_value.decimal(8)} at d = {worst.d}")

    print("\ncubics X^3 + aX^2 + bX + c whose fourth powers satisfy X^3 - gX - 16:")
    for h in sorted(heegner_solutions(1000), key=lambda h: h.gamma):
        print(f"  a={h.a:>4} b={h.b:>6} c={h.c:>2}  gamma_2 = {h.gamma:>8}  d = {match_discriminant(h.gamma)}")

    cn2 = class_number_two_split_search()
    print("\nclass number two with 2 split:", cn2.found["cn2_split"],
          f"(tail bound {cn2.certificates[0].bound_value.decimal(6)} < 1)")


if __name__ == "__main__":
    main()
