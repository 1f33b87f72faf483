"""Arithmetic in F_9 and F_25 with integer-encoded elements.

An element is stored as an int whose base-p digits are its polynomial
coefficients, constant term first. F_9 uses the modulus t^2 + 1 by default,
so the element 3 (= t) squares to 2 (= -1).
"""

from polarinc import make_field

F9 = make_field(9)
print(F9.describe())

t = 3
print("t * t =", F9.mul(t, t), "(that is -1)")
print("1/t =", F9.inv(t), "; check:", F9.mul(t, F9.inv(t)))

# squares are exactly half the nonzero elements
squares = sorted({F9.mul(x, x) for x in range(1, 9)})
print("nonzero squares:", squares)
print("chi over F_9:", [F9.chi(a).name for a in range(9)])
print("canonical nonsquare:", F9.canonical_nonsquare)

F25 = make_field(25)
print()
print(F25.describe())
a, b = 7, 18
print(f"(a+b)^5 = {F25.pow(F25.add(a, b), 5)}, a^5 + b^5 = {F25.add(F25.pow(a, 5), F25.pow(b, 5))}")
