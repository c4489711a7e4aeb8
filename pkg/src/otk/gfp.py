"""Polynomials over the prime field GF(p).

A polynomial a_0 + a_1 X + ... + a_n X^n is a list [a_0, ..., a_n] of
integers in {0, ..., p-1} with a_n != 0; the zero polynomial is [].
All functions are pure and take the modulus explicitly.

Factorization follows the classical pipeline: squarefree decomposition,
distinct-degree splitting, then Cantor-Zassenhaus equal-degree splitting
driven by an explicitly seeded random generator.
"""

from __future__ import annotations

import random


def trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def reduce(coeffs, p):
    """Reduce integer coefficients modulo p."""
    return trim([c % p for c in coeffs])


def degree(a):
    return len(a) - 1


def add(a, b, p):
    if len(a) < len(b):
        a, b = b, a
    r = list(a)
    for i, c in enumerate(b):
        r[i] = (r[i] + c) % p
    return trim(r)


def sub(a, b, p):
    return add(a, [(-c) % p for c in b], p)


def scale(a, c, p):
    return trim([(x * c) % p for x in a])


def mul(a, b, p):
    if not a or not b:
        return []
    r = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                r[i + j] += x * y
    return trim([c % p for c in r])


def divmod_(a, b, p):
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    a = list(a)
    db = len(b) - 1
    inv = pow(b[-1], -1, p)
    if len(a) <= db:
        return [], trim(a)
    q = [0] * (len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        c = (a[k] * inv) % p
        if c:
            q[k - db] = c
            for j, y in enumerate(b):
                a[k - db + j] = (a[k - db + j] - c * y) % p
    return trim(q), trim(a[:db])


def rem(a, b, p):
    return divmod_(a, b, p)[1]


def monic(a, p):
    if not a:
        return []
    return scale(a, pow(a[-1], -1, p), p)


def gcd(a, b, p):
    while b:
        a, b = b, rem(a, b, p)
    return monic(a, p)


def ext_gcd(a, b, p):
    """Return (g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = list(a), list(b)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = divmod_(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1, p), p)
        t0, t1 = t1, sub(t0, mul(q, t1, p), p)
    if not r0:
        return [], [], []
    inv = pow(r0[-1], -1, p)
    return scale(r0, inv, p), scale(s0, inv, p), scale(t0, inv, p)


def powmod(a, e, m, p):
    """a**e modulo the polynomial m."""
    result = [1]
    base = rem(a, m, p)
    while e:
        if e & 1:
            result = rem(mul(result, base, p), m, p)
        e >>= 1
        if e:
            base = rem(mul(base, base, p), m, p)
    return result


def deriv(a, p):
    return trim([(i * c) % p for i, c in enumerate(a)][1:])


def is_squarefree(a, p):
    if len(a) <= 1:
        return True
    return len(gcd(a, deriv(a, p), p)) == 1


def _pth_root(a, p):
    # a is a polynomial in X^p; coefficients are their own p-th roots in GF(p)
    return trim(a[::p])


def squarefree_decomposition(a, p):
    """Return [(b, m), ...] with a = lc * prod b**m, each b monic squarefree."""
    a = monic(a, p)
    if len(a) <= 1:
        return []
    out = []
    i = 1
    b = deriv(a, p)
    if b:
        c = gcd(a, b, p)
        w = divmod_(a, c, p)[0]
        while len(w) > 1:
            y = gcd(w, c, p)
            z = divmod_(w, y, p)[0]
            if len(z) > 1:
                out.append((z, i))
            i += 1
            w = y
            c = divmod_(c, y, p)[0]
        if len(c) > 1:
            for f, m in squarefree_decomposition(_pth_root(c, p), p):
                out.append((f, m * p))
    else:
        for f, m in squarefree_decomposition(_pth_root(a, p), p):
            out.append((f, m * p))
    return out


def distinct_degree(a, p):
    """Split monic squarefree a into [(g_d, d)] with g_d the product of its degree-d factors."""
    out = []
    x = [0, 1]
    h = x
    f = list(a)
    d = 0
    while len(f) - 1 >= 2 * (d + 1):
        d += 1
        h = powmod(h, p, f, p)
        g = gcd(f, sub(h, x, p), p)
        if len(g) > 1:
            out.append((g, d))
            f = divmod_(f, g, p)[0]
            h = rem(h, f, p)
    if len(f) > 1:
        out.append((f, len(f) - 1))
    return out


def equal_degree(f, d, p, rng):
    """Split monic squarefree f, all of whose factors have degree d."""
    n = len(f) - 1
    if n == d:
        return [f]
    while True:
        r = trim([rng.randrange(p) for _ in range(n)])
        if len(r) <= 1:
            continue
        if p == 2:
            t = r
            acc = r
            for _ in range(d - 1):
                t = rem(mul(t, t, p), f, p)
                acc = add(acc, t, p)
            g = gcd(f, acc, p)
        else:
            g = gcd(f, sub(powmod(r, (p**d - 1) // 2, f, p), [1], p), p)
        if 1 < len(g) < len(f):
            h = divmod_(f, g, p)[0]
            return equal_degree(g, d, p, rng) + equal_degree(h, d, p, rng)


def factor(a, p, seed=0):
    """Complete factorization of a over GF(p).

    Returns (lc, [(monic irreducible, multiplicity), ...]) sorted by degree
    and then coefficients.
    """
    a = trim([c % p for c in a])
    if not a:
        raise ValueError("cannot factor the zero polynomial")
    rng = random.Random(seed)
    lc = a[-1]
    out = []
    for sqf, mult in squarefree_decomposition(a, p):
        for g, d in distinct_degree(sqf, p):
            for h in equal_degree(g, d, p, rng):
                out.append((h, mult))
    out.sort(key=lambda fm: (len(fm[0]), fm[0][::-1], fm[1]))
    return lc, out


def degree_pattern(a, p, seed=0):
    """Sorted factor degrees of a squarefree a mod p, or None if not squarefree."""
    a = reduce(a, p)
    if not is_squarefree(a, p):
        return None
    degs = []
    for g, d in distinct_degree(monic(a, p), p):
        degs.extend([d] * ((len(g) - 1) // d))
    return sorted(degs)


def is_irreducible(a, p):
    a = reduce(a, p)
    n = len(a) - 1
    if n < 1:
        return False
    pat = degree_pattern(a, p)
    return pat == [n]
