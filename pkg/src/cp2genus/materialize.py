"""Integer matrix models of descriptors and the linear algebra behind them.

rep_of builds, for a descriptor with trivial ideal classes, an integer
matrix A with A^(p^2) = I realizing the action of g on Z^n: the type A
blocks are companion matrices, and each extension block is the pushout
(Lambda + X) / <(i0(y), -f(y))>, where i0 embeds E = phi_{p^2}(g)Lambda
into Lambda = Z[x]/(x^{p^2}-1) and f: E -> X encodes the extension
class through the image of phi_{p^2}(g).  Quotient bases and induced
actions come from Smith normal form with tracked transforms.

ext_group computes Ext(S, X) for the small coefficient modules X as the
cokernel of the restriction map Hom(Lambda, X) -> Hom(E, X), again via
Smith normal form.

All arithmetic is exact over Python integers; matrices are plain nested
lists.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import lattice
from .abelian import AbGroup
from .errors import Cp2Error, NontrivialClass
from .lattice import Faithfulness, LatticeDescriptor

IntMatrix = list  # list of rows, each a list of ints


# ---------------------------------------------------------------------------
# matrix utilities


def identity(n: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> IntMatrix:
    return [[0] * c for _ in range(r)]


def mat_mul(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    n, k, m = len(A), len(B), len(B[0]) if B else 0
    if A and len(A[0]) != k:
        raise Cp2Error("matrix dimensions do not match")
    out = zeros(n, m)
    for i in range(n):
        Ai = A[i]
        Oi = out[i]
        for t in range(k):
            a = Ai[t]
            if a:
                Bt = B[t]
                for j in range(m):
                    Oi[j] += a * Bt[j]
    return out


def mat_vec(A: IntMatrix, v: list) -> list:
    return [sum(A[i][j] * v[j] for j in range(len(v))) for i in range(len(A))]


def mat_add(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_sub(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_pow(A: IntMatrix, e: int) -> IntMatrix:
    result = identity(len(A))
    base = [row[:] for row in A]
    while e:
        if e & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        e >>= 1
    return result


def mat_eq(A: IntMatrix, B: IntMatrix) -> bool:
    return A == B


def block_diag(blocks: list) -> IntMatrix:
    n = sum(len(b) for b in blocks)
    out = zeros(n, n)
    at = 0
    for b in blocks:
        for i, row in enumerate(b):
            out[at + i][at : at + len(b)] = row[:]
        at += len(b)
    return out


def companion(monic: list) -> IntMatrix:
    """Companion matrix of a monic polynomial given by ascending
    coefficients [c0, ..., c_{n-1}, 1]."""
    if monic[-1] != 1:
        raise Cp2Error("companion needs a monic polynomial")
    n = len(monic) - 1
    M = zeros(n, n)
    for i in range(1, n):
        M[i][i - 1] = 1
    for i in range(n):
        M[i][n - 1] = -monic[i]
    return M


def bareiss_det(M: IntMatrix) -> int:
    """Exact determinant by fraction-free elimination."""
    n = len(M)
    if n == 0:
        return 1
    A = [row[:] for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Smith normal form


def _row_op(S, U, Uinv, i, j, T):
    """Rows i, j of S and U get T; columns i, j of Uinv get T^{-1} (det T = +-1)."""
    a, b, c, d = T
    det = a * d - b * c
    for X in (S, U):
        for col in range(len(X[0])):
            x, y = X[i][col], X[j][col]
            X[i][col] = a * x + b * y
            X[j][col] = c * x + d * y
    # T^{-1} = (1/det) [[d, -b], [-c, a]] with det = +-1
    ia, ib, ic, id_ = d * det, -b * det, -c * det, a * det
    for row in Uinv:
        x, y = row[i], row[j]
        row[i] = x * ia + y * ic
        row[j] = x * ib + y * id_


def _col_op(S, V, Vinv, i, j, T):
    a, b, c, d = T
    det = a * d - b * c
    for X in (S, V):
        for row in X:
            x, y = row[i], row[j]
            row[i] = a * x + c * y
            row[j] = b * x + d * y
    ia, ib, ic, id_ = d * det, -b * det, -c * det, a * det
    for col in range(len(Vinv[0])):
        x, y = Vinv[i][col], Vinv[j][col]
        Vinv[i][col] = ia * x + ib * y
        Vinv[j][col] = ic * x + id_ * y


def _xgcd(a: int, b: int):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _elim_transform(a: int, b: int):
    """Unimodular (x, y, z, w) sending (a, b) to (g, 0) with g = gcd.

    When a divides b the transform is a plain subtraction that leaves
    the pivot row/column untouched (important for termination).
    """
    if b % a == 0:
        return (1, 0, -(b // a), 1)
    g, x, y = _xgcd(a, b)
    if g < 0:
        g, x, y = -g, -x, -y
    return (x, y, -(b // g), a // g)


def snf_full(M: IntMatrix):
    """(S, U, V, Uinv, Vinv) with U M V = S in Smith normal form.

    S is diagonal with d_1 | d_2 | ..., all entries >= 0; U and V are
    unimodular with the returned exact inverses.
    """
    r = len(M)
    c = len(M[0]) if r else 0
    S = [row[:] for row in M]
    U, Uinv = identity(r), identity(r)
    V, Vinv = identity(c), identity(c)

    def clear_at(k):
        while True:
            # move a pivot to (k, k)
            if S[k][k] == 0:
                found = False
                for i in range(k, r):
                    for j in range(k, c):
                        if S[i][j] != 0:
                            if i != k:
                                _row_op(S, U, Uinv, k, i, (0, 1, 1, 0))
                            if j != k:
                                _col_op(S, V, Vinv, k, j, (0, 1, 1, 0))
                            found = True
                            break
                    if found:
                        break
                if not found:
                    return
            for i in range(k + 1, r):
                if S[i][k]:
                    x, y, z, w = _elim_transform(S[k][k], S[i][k])
                    _row_op(S, U, Uinv, k, i, (x, y, z, w))
            if all(S[k][j] == 0 for j in range(k + 1, c)):
                return
            for j in range(k + 1, c):
                if S[k][j]:
                    x, y, z, w = _elim_transform(S[k][k], S[k][j])
                    _col_op(S, V, Vinv, k, j, (x, z, y, w))
            if all(S[i][k] == 0 for i in range(k + 1, r)):
                return

    for k in range(min(r, c)):
        clear_at(k)

    # enforce the divisibility chain; each fix dirties only the trailing
    # block, which is re-diagonalized before the next scan
    while True:
        viol = None
        for k in range(min(r, c) - 1):
            a, b = S[k][k], S[k + 1][k + 1]
            if b != 0 and (a == 0 or b % a != 0):
                viol = k
                break
        if viol is None:
            break
        _col_op(S, V, Vinv, viol, viol + 1, (1, 0, 1, 1))  # col k += col k+1
        for k in range(viol, min(r, c)):
            clear_at(k)
    # normalize signs
    for k in range(min(r, c)):
        if S[k][k] < 0:
            for X in (S, U):
                X[k] = [-v for v in X[k]]
            for row in Uinv:
                row[k] = -row[k]
    return S, U, V, Uinv, Vinv


def snf(M: IntMatrix):
    """(S, U, V) with U M V = S in Smith normal form."""
    S, U, V, _, _ = snf_full(M)
    return S, U, V


def diagonal(S: IntMatrix) -> list:
    return [S[i][i] for i in range(min(len(S), len(S[0]) if S else 0))]


def mat_rank(M: IntMatrix) -> int:
    if not M or not M[0]:
        return 0
    return sum(1 for d in diagonal(snf_full(M)[0]) if d != 0)


def kernel_basis(M: IntMatrix) -> list:
    """Columns spanning the integer kernel lattice of M (saturated)."""
    r = len(M)
    c = len(M[0]) if r else 0
    S, U, V, Uinv, Vinv = snf_full(M)
    cols = []
    for j in range(c):
        d = S[j][j] if j < min(r, c) else 0
        if d == 0:
            cols.append([V[i][j] for i in range(c)])
    return cols


def solve_exact(A_cols: list, b: list) -> list:
    """Solve sum_i y_i * A_cols[i] = b exactly over Z; error when impossible."""
    n = len(b)
    k = len(A_cols)
    M = [[A_cols[j][i] for j in range(k)] for i in range(n)]
    S, U, V, _, _ = snf_full(M)
    rhs = mat_vec(U, b)
    y = [0] * k
    for i in range(n):
        d = S[i][i] if i < min(n, k) else 0
        if d == 0:
            if rhs[i] != 0:
                raise Cp2Error("no integral solution")
        else:
            if rhs[i] % d != 0:
                raise Cp2Error("no integral solution")
            y[i] = rhs[i] // d
    return mat_vec(V, y)


# ---------------------------------------------------------------------------
# integer polynomials (ascending coefficient lists)


def polymul_z(a: list, b: list) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def phi_p(p: int) -> list:
    return [1] * p


def phi_p2(p: int) -> list:
    out = [0] * (p * (p - 1) + 1)
    for i in range(p):
        out[i * p] = 1
    return out


def x_pow_minus_1(n: int) -> list:
    return [-1] + [0] * (n - 1) + [1]


# ---------------------------------------------------------------------------
# building blocks


def _component(p: int, name: str):
    """(rank, action of g) for a coefficient module."""
    if name == "Z":
        return 1, [[1]]
    if name == "R":
        return p - 1, companion(phi_p(p))
    if name == "E":
        return p, companion(x_pow_minus_1(p))
    raise Cp2Error(f"unknown component {name}")


_X_OF_KIND = {
    "Ec": ("Z",),
    "B": ("E",),
    "C": ("Z", "E"),
    "D": ("Z", "E"),
    "E": ("R",),
    "F": ("Z", "R"),
}


def _f0_vector(p: int, s) -> list:
    """The image of phi_{p^2}(g) under f: E -> X for the summand's class."""
    parts = []
    for name in _X_OF_KIND[s.kind]:
        if name == "Z":
            parts.append([1])
            continue
        rank, G = _component(p, name)
        lam_mat = mat_sub(G, identity(rank))
        # w = sum u_j (g-1)^j applied to 1, then another r applications of (g-1)
        vec = [0] * rank
        basis = [1] + [0] * (rank - 1)
        power = basis[:]
        for coef in s.u.coeffs:
            if coef:
                vec = [v + coef * w for v, w in zip(vec, power)]
            power = mat_vec(lam_mat, power)
        for _ in range(s.r):
            vec = mat_vec(lam_mat, vec)
        if s.kind == "D":
            nn = lattice.n0(p)
            vec = [nn * v for v in vec]
        parts.append(vec)
    out = []
    for part in parts:
        out.extend(part)
    return out


def _pushout_block(p: int, s) -> IntMatrix:
    """Action of g on (Lambda + X) / <(i0(y), -f(y)) : y in E>."""
    comps = _X_OF_KIND[s.kind]
    ranks_mats = [_component(p, c) for c in comps]
    x_rank = sum(rk for rk, _ in ranks_mats)
    G_X = block_diag([G for _, G in ranks_mats])
    N = p * p + x_rank
    G_L = block_diag([companion(x_pow_minus_1(p * p)), G_X])

    f0 = _f0_vector(p, s)
    # columns (i0(g^j * e), -g^j * f0), j = 0..p-1
    cols = []
    fj = f0
    for j in range(p):
        col = [0] * N
        for i in range(p):
            col[i * p + j] = 1
        for i, v in enumerate(fj):
            col[p * p + i] = -v
        cols.append(col)
        fj = mat_vec(G_X, fj)
    B = [[cols[j][i] for j in range(p)] for i in range(N)]

    S, U, _, Uinv, _ = snf_full(B)
    for i in range(p):
        if S[i][i] != 1:
            raise Cp2Error(
                "relation lattice is not a direct summand; "
                f"diagonal entry {S[i][i]} at {i}"
            )
    Gy = mat_mul(mat_mul(U, G_L), Uinv)
    for i in range(p, N):
        for j in range(p):
            if Gy[i][j] != 0:
                raise Cp2Error("relation lattice is not invariant under g")
    return [row[p:] for row in Gy[p:]]


@dataclass(frozen=True)
class IntegerRep:
    n: int
    matrix: tuple
    source: LatticeDescriptor


def _is_trivial_class(vec) -> bool:
    return vec is None or all(v == 0 for v in vec)


def rep_of(D: LatticeDescriptor) -> IntegerRep:
    """Materialize a trivial-class descriptor as an integer matrix."""
    p = D.p
    for s in D.summands:
        if not (_is_trivial_class(s.b) and _is_trivial_class(s.c)):
            raise NontrivialClass(
                "matrix models are built for trivial ideal classes only"
            )
    blocks = []
    for s in D.summands:
        if s.kind == "Z":
            blocks.append([[1]])
        elif s.kind == "b":
            blocks.append(companion(phi_p(p)))
        elif s.kind == "c":
            blocks.append(companion(phi_p2(p)))
        elif s.kind == "Eb":
            blocks.append(companion(x_pow_minus_1(p)))
        else:
            blocks.append(_pushout_block(p, s))
    A = block_diag(blocks) if blocks else []
    n = len(A)
    if not mat_eq(mat_pow(A, p * p), identity(n)):
        raise Cp2Error("internal error: built matrix does not satisfy A^(p^2) = I")
    return IntegerRep(n, tuple(tuple(row) for row in A), D)


# ---------------------------------------------------------------------------
# Ext groups


_EXT_COMPONENTS = {
    "Z": ("Z",),
    "R": ("R",),
    "E": ("E",),
    "Z+R": ("Z", "R"),
    "Z+E": ("Z", "E"),
}


def ext_group(x_name: str, p: int) -> AbGroup:
    """Ext(S, X) as the cokernel of Hom(Lambda, X) -> Hom(E, X).

    Hom(Lambda, X) is X itself; Hom(E, X) is the (g^p - 1)-torsion of X;
    the restriction map sends x to phi_{p^2}(g) * x.
    """
    if x_name not in _EXT_COMPONENTS:
        raise Cp2Error(f"unsupported coefficient module {x_name!r}")
    ranks_mats = [_component(p, c) for c in _EXT_COMPONENTS[x_name]]
    G = block_diag([M for _, M in ranks_mats])
    n = len(G)
    torsion = mat_sub(mat_pow(G, p), identity(n))
    K = kernel_basis(torsion)  # columns spanning Hom(E, X)
    phi_of_G = zeros(n, n)
    Gp = identity(n)
    step = mat_pow(G, p)
    for _ in range(p):
        phi_of_G = mat_add(phi_of_G, Gp)
        Gp = mat_mul(Gp, step)
    # express each image phi(G) e_i in the kernel basis
    cols = []
    for i in range(n):
        e = [1 if j == i else 0 for j in range(n)]
        cols.append(solve_exact(K, mat_vec(phi_of_G, e)))
    k = len(K)
    M_map = [[cols[j][i] for j in range(n)] for i in range(k)]
    S = snf_full(M_map)[0]
    diag = diagonal(S)
    if len([d for d in diag if d != 0]) != k:
        raise Cp2Error("Ext group is not finite; inconsistent input")
    return AbGroup(tuple(d for d in diag if d > 1))


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class RepCheck:
    name: str
    ok: bool
    detail: str


@dataclass(frozen=True)
class RepReport:
    checks: tuple

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)


def charpoly(A: IntMatrix) -> list:
    """Characteristic polynomial det(xI - A), ascending coefficients.

    Division-free (Berkowitz), exact over Z.
    """
    n = len(A)
    coeffs = [1]  # descending while building
    for i in range(n):
        Bsub = [row[:i] for row in A[:i]]
        R = A[i][:i]
        Ccol = [A[j][i] for j in range(i)]
        a = A[i][i]
        t = [1, -a]
        v = Ccol[:]
        for _ in range(i):
            t.append(-sum(R[j] * v[j] for j in range(i)))
            v = mat_vec(Bsub, v) if i else []
        new = [0] * (len(coeffs) + 1)
        for d in range(len(new)):
            s = 0
            for j in range(len(t)):
                if 0 <= d - j < len(coeffs):
                    s += t[j] * coeffs[d - j]
            new[d] = s
        coeffs = new
    return list(reversed(coeffs))


def predicted_charpoly(D: LatticeDescriptor) -> list:
    p = D.p
    factor_of = {
        "Z": [[-1, 1]],
        "b": [phi_p(p)],
        "c": [phi_p2(p)],
        "Eb": [x_pow_minus_1(p)],
        "Ec": [[-1, 1], phi_p2(p)],
        "B": [x_pow_minus_1(p), phi_p2(p)],
        "C": [[-1, 1], x_pow_minus_1(p), phi_p2(p)],
        "D": [[-1, 1], x_pow_minus_1(p), phi_p2(p)],
        "E": [phi_p(p), phi_p2(p)],
        "F": [[-1, 1], phi_p(p), phi_p2(p)],
    }
    poly = [1]
    for s in D.summands:
        for f in factor_of[s.kind]:
            poly = polymul_z(poly, f)
    return poly


def multiplicative_order(A: IntMatrix, p: int) -> int:
    n = len(A)
    if mat_eq(A, identity(n)):
        return 1
    if mat_eq(mat_pow(A, p), identity(n)):
        return p
    if mat_eq(mat_pow(A, p * p), identity(n)):
        return p * p
    raise Cp2Error(f"matrix order does not divide {p * p}")


def validate_rep(rep: IntegerRep) -> RepReport:
    """Check the matrix model against everything the descriptor predicts."""
    D = rep.source
    p = D.p
    A = [list(row) for row in rep.matrix]
    n = rep.n
    checks = []

    ok = mat_eq(mat_pow(A, p * p), identity(n))
    checks.append(RepCheck("power_identity", ok, f"A^{p*p} == I: {ok}"))

    det = bareiss_det(A)
    checks.append(RepCheck("unimodular", abs(det) == 1, f"det(A) = {det}"))

    expected_order = {
        Faithfulness.TRIVIAL: 1,
        Faithfulness.ORDER_P: p,
        Faithfulness.FAITHFUL: p * p,
    }[lattice.faithfulness(D)]
    try:
        order = multiplicative_order(A, p)
    except Cp2Error:
        order = 0
    checks.append(
        RepCheck(
            "order",
            order == expected_order,
            f"order(A) = {order}, expected {expected_order}",
        )
    )

    got = charpoly(A)
    want = predicted_charpoly(D)
    checks.append(
        RepCheck("char_poly", got == want, f"char poly matches prediction: {got == want}")
    )

    n_counts = lattice.counts(D)
    expected_fixed = (
        n_counts["Z"]
        + n_counts["Eb"]
        + n_counts["Ec"]
        + n_counts["B"]
        + 2 * (n_counts["C"] + n_counts["D"])
        + n_counts["F"]
    )
    fixed = n - mat_rank(mat_sub(A, identity(n)))
    checks.append(
        RepCheck(
            "fixed_rank",
            fixed == expected_fixed,
            f"rank ker(A - I) = {fixed}, expected {expected_fixed}",
        )
    )
    return RepReport(tuple(checks))
