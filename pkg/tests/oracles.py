"""Independent brute-force oracles used by the tests.

Nothing here calls into the code paths it checks: graphs are rebuilt from the
edge conditions by exhaustive pair search, and ring ranks come from symbolic
substitution of a hyperplane parametrization followed by sympy row reduction.
"""

import itertools

import sympy as sp


def brute_force_type_D_edges(n, gamma):
    """Apply the three edge conditions to every pair of labels."""
    perms = list(itertools.permutations(range(1, n + 1)))
    signs = list(itertools.product((0, 1), repeat=n))
    labels = [(p, s) for p in perms for s in signs]
    edges = set()
    for (p, s), (q, t) in itertools.combinations(labels, 2):
        diff = [k for k in range(n) if p[k] != q[k]]
        if len(diff) != 2:
            continue
        i, j = diff[0] + 1, diff[1] + 1
        if (i, j) not in gamma or p[i - 1] != q[j - 1] or p[j - 1] != q[i - 1]:
            continue
        if any(s[k] != t[k] for k in range(n) if k not in (i - 1, j - 1)):
            continue
        if (s[i - 1] + s[j - 1]) % 2 != (t[i - 1] + t[j - 1]) % 2:
            continue
        w = [0] * n
        w[i - 1] = 1
        w[j - 1] = 1 if s[i - 1] == t[i - 1] else -1
        edges.add(frozenset([(p, s), (q, t)]) | {("w", tuple(w), (i, j))})
    return labels, edges


def brute_force_type_A_edges(n, gamma):
    perms = list(itertools.permutations(range(1, n + 1)))
    edges = set()
    for p, q in itertools.combinations(perms, 2):
        diff = [k for k in range(n) if p[k] != q[k]]
        if len(diff) == 2 and (diff[0] + 1, diff[1] + 1) in gamma:
            edges.add(frozenset([p, q]))
    return perms, edges


def gkm_ring_dimension(num_vertices, edges, n, k):
    """Dimension of degree-k tuples (f_v) with f_u - f_v vanishing on every
    hyperplane weight . x = 0.

    ``edges`` is a list of ``(u, v, weight)``.
    """
    xs = sp.symbols(f"x1:{n + 1}")
    mons = sorted(sp.itermonomials(xs, k, k), key=sp.default_sort_key) if k else [sp.Integer(1)]
    unknowns = []
    polys = []
    for v in range(num_vertices):
        cs = sp.symbols(f"c{v}_0:{len(mons)}")
        unknowns.extend(cs)
        polys.append(sum(c * m for c, m in zip(cs, mons)))
    rows = []
    for u, v, w in edges:
        basis = sp.Matrix([list(w)]).nullspace()
        zs = sp.symbols(f"z0:{len(basis)}")
        point = sum((z * b for z, b in zip(zs, basis)), sp.zeros(n, 1))
        expr = sp.expand((polys[u] - polys[v]).subs(dict(zip(xs, point)), simultaneous=True))
        if expr == 0:
            continue
        for coeff in sp.Poly(expr, *zs).coeffs():
            rows.append([coeff.coeff(c) for c in unknowns])
    if not rows:
        return len(unknowns)
    return len(unknowns) - sp.Matrix(rows).rank()


def pfaffian_4x4(A):
    return A[0][1] * A[2][3] - A[0][2] * A[1][3] + A[0][3] * A[1][2]


def pfaffian_expansion(A):
    """Pfaffian by expansion along the first row (exponential, small sizes)."""
    m = len(A)
    if m == 0:
        return 1.0
    if m % 2:
        return 0.0
    total = 0.0
    rest = list(range(1, m))
    for pos, j in enumerate(rest):
        keep = [k for k in rest if k != j]
        sub = [[A[a][b] for b in keep] for a in keep]
        total += (-1) ** pos * A[0][j] * pfaffian_expansion(sub)
    return total
