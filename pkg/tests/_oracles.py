"""Slow, independent reference computations used to freeze expected values.

Nothing here goes through the library's arithmetic: matrices are decoded by
hand from the documented index layout and multiplied as nested lists.
"""
import itertools
import math


def tri_positions(k):
    return [(i, j) for i in range(k) for j in range(k) if i <= j]


def full_positions(k):
    return [(i, j) for i in range(k) for j in range(k)]


def matrix_of(index, positions, q, k):
    m = [[0] * k for _ in range(k)]
    for pos, (i, j) in enumerate(positions):
        m[i][j] = (index // q**pos) % q
    return m


def index_of(m, positions, q):
    return sum(m[i][j] * q**pos for pos, (i, j) in enumerate(positions))


def matmul(a, b, q):
    k = len(a)
    return [[sum(a[i][t] * b[t][j] for t in range(k)) % q for j in range(k)] for i in range(k)]


def matadd(a, b, q):
    return [[(x + y) % q for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


class MatrixOracle:
    """Arithmetic of T_k(F_q) or M_k(F_q) on element indices."""

    def __init__(self, k, q, triangular):
        self.k, self.q = k, q
        self.positions = tri_positions(k) if triangular else full_positions(k)
        self.order = q ** len(self.positions)

    def mat(self, x):
        return matrix_of(x, self.positions, self.q, self.k)

    def idx(self, m):
        return index_of(m, self.positions, self.q)

    def mul(self, x, y):
        return self.idx(matmul(self.mat(x), self.mat(y), self.q))

    def add(self, x, y):
        return self.idx(matadd(self.mat(x), self.mat(y), self.q))

    def unit(self, i, j):
        m = [[0] * self.k for _ in range(self.k)]
        m[i][j] = 1
        return self.idx(m)


def brute_force_right_ideals(oracle):
    """Every subset closed under + and right multiplication (tiny rings only)."""
    n = oracle.order
    add = [[oracle.add(x, y) for y in range(n)] for x in range(n)]
    mul = [[oracle.mul(x, y) for y in range(n)] for x in range(n)]
    found = []
    for bits in range(1, 1 << n):
        if not bits & 1:
            continue
        members = [x for x in range(n) if bits >> x & 1]
        if all(bits >> add[a][b] & 1 for a in members for b in members) and all(
            bits >> mul[a][r] & 1 for a in members for r in range(n)
        ):
            found.append(frozenset(members))
    return found


def f2_subspaces(dim):
    """All subspaces of F_2^dim, vectors encoded as ints."""
    start = frozenset({0})
    seen = {start}
    queue = [start]
    while queue:
        space = queue.pop()
        for v in range(1 << dim):
            if v not in space:
                bigger = frozenset(space | {s ^ v for s in space})
                if bigger not in seen:
                    seen.add(bigger)
                    queue.append(bigger)
    return seen


def t3f2_right_ideals():
    """Right ideals of T_3(F_2): subspaces closed under right mult by the unit matrices."""
    oracle = MatrixOracle(3, 2, True)
    basis = [oracle.unit(i, j) for i, j in oracle.positions]
    return [
        s
        for s in f2_subspaces(6)
        if all(oracle.mul(a, e) in s for a in s for e in basis)
    ]


def is_two_sided_oracle(oracle, members):
    return all(oracle.mul(r, a) in members for r in range(oracle.order) for a in members)


def spf_table(limit):
    spf = list(range(limit + 1))
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == p:
            for m in range(p * p, limit + 1, p):
                if spf[m] == m:
                    spf[m] = p
    return spf


def prime_parts(n, spf):
    parts = []
    while n > 1:
        p = spf[n]
        t = 0
        while n % p == 0:
            n //= p
            t += 1
        parts.append((p, t))
    return parts


def residue_idempotents(n):
    return [e for e in range(n) if e * e % n == e]


def subsets(xs):
    return itertools.chain.from_iterable(itertools.combinations(xs, r) for r in range(len(xs) + 1))
