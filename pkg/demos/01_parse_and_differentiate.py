#!/usr/bin/env python3
"""Parsing entire functions and taking symbolic derivatives.

The expression grammar covers decimal and imaginary literals, the
variable z, arithmetic, integer powers, and the entire primitives
exp/sin/cos.  Denominators must be nonzero constants and exponents
literal non-negative integers, so everything that parses is entire.
"""

import numpy as np

from orbitplane import NonEntireError, evaluate, parse

examples = [
    "cos(z) + z",
    "-10*z*exp(-z) - 0.5*z",
    "(2+3i)*z^4 - sin(z)/2",
]

for source in examples:
    f = parse(source)
    print(f"source     : {source}")
    print(f"canonical  : {f.to_source()}")
    print(f"derivative : {f.derivative().to_source()}")
    z = 0.6 - 0.3j
    h = 1e-6
    fd = (f(z + h) - f(z - h)) / (2 * h)
    print(f"f({z}) = {f(z):.6g}")
    print(f"f'({z}) = {f.derivative()(z):.6g}  (finite diff {fd:.6g})")
    print()

print("entirety is enforced at parse time:")
for bad in ("1/z", "z^-1", "z^(0.5)"):
    try:
        parse(bad)
    except NonEntireError as err:
        print(f"  {bad!r:12} -> {err}")

print()
print("evaluation is vectorized over numpy arrays:")
f = parse("cos(z) + z")
grid = np.linspace(0, np.pi, 5) + 0.25j
print(" ", np.round(evaluate(f, grid), 4))

print()
print("overflow saturates instead of raising, so escape loops stay total:")
from orbitplane import evaluate_with_overflow

value, flagged = evaluate_with_overflow(parse("exp(z)"), 1e6)
print(f"  exp(1e6) -> |value| = {abs(value):.3e}, overflowed = {flagged}")
