"""Write the Hall plane of order 9 (the translation plane over the nearfield
of order 9) in the plane file format.

GF(9) = GF(3)[i]/(i^2 + 1), with a + b i stored as the pair (a, b).
The nearfield product is x * y = x y when y is a square, x^3 y otherwise.
"""
import itertools
import sys

F = [(a, b) for a in range(3) for b in range(3)]


def add(x, y):
    return ((x[0] + y[0]) % 3, (x[1] + y[1]) % 3)


def mul(x, y):
    # (a + b i)(c + d i) with i^2 = -1
    return ((x[0] * y[0] - x[1] * y[1]) % 3, (x[0] * y[1] + x[1] * y[0]) % 3)


def cube(x):
    return mul(x, mul(x, x))


ZERO = (0, 0)
squares = {mul(x, x) for x in F if x != ZERO}


def near(x, y):
    if y == ZERO or y in squares:
        return mul(x, y)
    return mul(cube(x), y)


def main(path):
    pts = {}
    for x, y in itertools.product(F, F):
        pts[("a", x, y)] = len(pts)
    for m in F:
        pts[("s", m)] = len(pts)
    pts[("inf",)] = len(pts)
    lines = []
    for m, b in itertools.product(F, F):
        line = [pts[("a", x, add(near(x, m), b))] for x in F] + [pts[("s", m)]]
        lines.append(sorted(line))
    for c in F:
        lines.append(sorted([pts[("a", c, y)] for y in F] + [pts[("inf",)]]))
    lines.append(sorted([pts[("s", m)] for m in F] + [pts[("inf",)]]))
    lines.sort()
    with open(path, "w") as out:
        out.write("# Hall plane of order 9: translation plane over the order-9 nearfield\n")
        out.write(f"plane v1 order=9 points={len(pts)} lines={len(lines)}\n")
        for line in lines:
            out.write(" ".join(map(str, line)) + "\n")


if __name__ == "__main__":
    main(sys.argv[1])
