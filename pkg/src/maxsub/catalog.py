"""Builtin group catalog with fixed, documented generator permutations.

Every builtin is a permutation group on 0-based points; the generators
below are frozen so that serialized handles and seeded computations are
reproducible across runs.

    sym:n       (1 2), (1 2 ... n)
    alt:n       (1 2 3), and (1 ... n) for odd n / (2 ... n) for even n
    cyc:n       (1 2 ... n)
    dih:n       rotation (1 ... n) and the reflection fixing point 1
    sl:2,3      SL(2,3) acting on the 8 nonzero vectors of GF(3)^2
    psl:2,7     PSL(2,7) on the projective line over GF(7) (8 points)
    agl:1,8     AGL(1,8) = translations and multiplications of GF(8)
    agammal:1,8 AGammaL(1,8) = AGL(1,8) plus the Frobenius map x -> x^2
    agl:3,2     AGL(3,2) = translations of GF(2)^3 extended by GL(3,2)
"""

from __future__ import annotations

from .group import group_from_generators
from .perms import Permutation

# GF(8) = GF(2)[a]/(a^3 + a + 1); element i = bits (b0, b1, b2) = b0 + b1*a + b2*a^2
_GF8_MUL_A = [0, 2, 4, 6, 3, 1, 7, 5]  # multiplication by a


def _gf8_add(x, y):
    return x ^ y


def _gf8_mul_by_a(x):
    return _GF8_MUL_A[x]


def _gf8_square(x):
    # squaring is linear over GF(2); precompute by repeated doubling
    table = [0] * 8
    for i in range(8):
        # write i in the basis, square each basis element: a^2, a^4 = a^2+a
        b0 = i & 1
        b1 = (i >> 1) & 1
        b2 = (i >> 2) & 1
        acc = 0
        if b0:
            acc ^= 1        # 1^2 = 1
        if b1:
            acc ^= 4        # a^2
        if b2:
            acc ^= 6        # a^4 = a^2 + a
        table[i] = acc
    return table[x]


def sym(n):
    if n < 1:
        raise ValueError("sym:n needs n >= 1")
    gens = []
    if n >= 2:
        gens.append(Permutation.from_cycles(n, [(0, 1)]))
    if n >= 3:
        gens.append(Permutation.from_cycles(n, [tuple(range(n))]))
    import math
    return group_from_generators(max(n, 1), gens, name=f"sym:{n}",
                                 known_order=math.factorial(n))


def alt(n):
    if n < 1:
        raise ValueError("alt:n needs n >= 1")
    import math
    gens = []
    if n >= 3:
        gens.append(Permutation.from_cycles(n, [(0, 1, 2)]))
    if n >= 4:
        if n % 2 == 1:
            gens.append(Permutation.from_cycles(n, [tuple(range(n))]))
        else:
            gens.append(Permutation.from_cycles(n, [tuple(range(1, n))]))
    order = math.factorial(n) // 2 if n >= 3 else 1
    return group_from_generators(max(n, 1), gens, name=f"alt:{n}",
                                 known_order=order)


def cyc(n):
    if n < 1:
        raise ValueError("cyc:n needs n >= 1")
    gens = [] if n == 1 else [Permutation.from_cycles(n, [tuple(range(n))])]
    return group_from_generators(max(n, 1), gens, name=f"cyc:{n}",
                                 known_order=n)


def dih(n):
    """Dihedral group of order 2n on n points (n >= 3)."""
    if n < 3:
        raise ValueError("dih:n needs n >= 3")
    rot = Permutation.from_cycles(n, [tuple(range(n))])
    refl = Permutation([(n - i) % n for i in range(n)])
    return group_from_generators(n, [rot, refl], name=f"dih:{n}",
                                 known_order=2 * n)


def _matrix_action_perm(mat, points, apply_fn):
    index = {pt: i for i, pt in enumerate(points)}
    return Permutation([index[apply_fn(mat, pt)] for pt in points])


def sl23():
    """SL(2,3) on the 8 nonzero vectors of GF(3)^2."""
    points = [(x, y) for x in range(3) for y in range(3) if (x, y) != (0, 0)]

    def apply(mat, v):
        a, b, c, d = mat
        x, y = v
        return ((a * x + c * y) % 3, (b * x + d * y) % 3)

    g1 = _matrix_action_perm((1, 1, 0, 1), points, apply)
    g2 = _matrix_action_perm((0, 2, 1, 0), points, apply)
    return group_from_generators(8, [g1, g2], name="sl:2,3", known_order=24)


def psl27():
    """PSL(2,7) on the projective line {0..6, inf} over GF(7)."""
    # points 0..6 are field elements, point 7 is infinity
    def mobius_add(x):  # z -> z + 1
        return 7 if x == 7 else (x + 1) % 7

    def mobius_inv(x):  # z -> -1/z
        if x == 7:
            return 0
        if x == 0:
            return 7
        return (-pow(x, 5, 7)) % 7  # inverse mod 7 via z^5 = z^-1

    t = Permutation([mobius_add(x) for x in range(8)])
    s = Permutation([mobius_inv(x) for x in range(8)])
    return group_from_generators(8, [t, s], name="psl:2,7", known_order=168)


def agl18():
    """AGL(1,8): x -> x + 1 and x -> a*x on the 8 field elements."""
    t = Permutation([_gf8_add(x, 1) for x in range(8)])
    m = Permutation([_gf8_mul_by_a(x) for x in range(8)])
    return group_from_generators(8, [t, m], name="agl:1,8", known_order=56)


def agammal18():
    """AGammaL(1,8): AGL(1,8) extended by the Frobenius x -> x^2."""
    t = Permutation([_gf8_add(x, 1) for x in range(8)])
    m = Permutation([_gf8_mul_by_a(x) for x in range(8)])
    f = Permutation([_gf8_square(x) for x in range(8)])
    return group_from_generators(8, [t, m, f], name="agammal:1,8",
                                 known_order=168)


def agl32():
    """AGL(3,2) on GF(2)^3 (points = integers 0..7 as bit vectors)."""
    # translation by e1, and two generators of GL(3,2) acting on bits
    t = Permutation([x ^ 1 for x in range(8)])

    def linear(mat):
        out = []
        for x in range(8):
            bits = [(x >> k) & 1 for k in range(3)]
            y = 0
            for row in range(3):
                v = sum(mat[row][k] * bits[k] for k in range(3)) % 2
                y |= v << row
            out.append(y)
        return Permutation(out)

    # standard generators of GL(3,2): a cyclic shift and a transvection
    shift = linear([[0, 0, 1], [1, 0, 0], [0, 1, 0]])
    transvect = linear([[1, 1, 0], [0, 1, 0], [0, 0, 1]])
    return group_from_generators(8, [t, shift, transvect], name="agl:3,2",
                                 known_order=1344)


BUILTINS = {
    "sl:2,3": sl23,
    "psl:2,7": psl27,
    "agl:1,8": agl18,
    "agammal:1,8": agammal18,
    "agl:3,2": agl32,
}


def builtin(spec):
    """Resolve a builtin spec string like "sym:5" or "agl:3,2"."""
    if spec in BUILTINS:
        return BUILTINS[spec]()
    head, _, tail = spec.partition(":")
    families = {"sym": sym, "alt": alt, "cyc": cyc, "dih": dih}
    if head in families and tail.isdigit():
        return families[head](int(tail))
    raise KeyError(f"unknown builtin group {spec!r}")
