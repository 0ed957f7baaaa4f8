"""Exact E s0 for half-integer beta by symbolic integration (sympy).

Independent of the package's quadrature: the inner and outer trigonometric
integrals are done in closed form. d=4, beta=1 takes a few minutes.

    python scripts/symbolic_oracle.py 3 1
    python scripts/symbolic_oracle.py 4 0
"""

import sys

import sympy as sp


def expected_s0_exact(d: int, beta) -> sp.Expr:
    b = sp.Rational(beta)
    phi, theta = sp.symbols("phi theta", real=True)
    half = sp.Rational(1, 2)
    if d == 3:
        inner_power, outer_power, base = 2 * b + 3, 4 * b + 6, sp.Integer(2)
        const = (6 * sp.gamma(b + 5 * half) ** 2 * sp.gamma(2 * b + 4)
                 / (sp.pi ** (3 * half) * sp.gamma(b + 2) ** 2 * sp.gamma(2 * b + 7 * half)))
    elif d == 4:
        inner_power, outer_power, base = 2 * b + 4, 6 * b + 12, 3 * half
        const = (5 * sp.gamma(b + 3) ** 2 * sp.gamma(3 * b + 7)
                 / (sp.pi ** (3 * half) * sp.gamma(b + 5 * half) ** 2
                    * sp.gamma(3 * b + 13 * half)))
    else:
        raise ValueError("d must be 3 or 4")
    inner = sp.integrate(sp.cos(theta) ** inner_power, (theta, -sp.pi / 2, phi))
    outer = sp.integrate(sp.expand(sp.cos(phi) ** outer_power * inner ** 2),
                         (phi, -sp.pi / 2, sp.pi / 2))
    return sp.nsimplify(sp.simplify(base - const * outer))


if __name__ == "__main__":
    d, beta = int(sys.argv[1]), sys.argv[2]
    value = expected_s0_exact(d, beta)
    print(value, sp.N(value, 20))
