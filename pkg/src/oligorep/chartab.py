"""Exact character tables of finite groups.

Dixon's modular method: compute the table of a permutation group over a
prime field F_p with p = 1 (mod group exponent), split the class algebra
into common eigenvectors, read off degrees and character values mod p,
then lift to exact cyclotomic integers through eigenvalue multiplicities.
Both orthogonality relations are verified exactly before a table is
handed out; a table that fails them is a bug, not a result, hence
InvariantViolation rather than a value error.

Symmetric groups additionally get an independent construction from
partition combinatorics (hook lengths, Murnaghan-Nakahama border strips)
whose values are computed lazily; it scales far past the point where
materializing group elements stops being reasonable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from sympy import isprime
from sympy.ntheory.residue_ntheory import primitive_root, sqrt_mod
from sympy.polys.specialpolys import cyclotomic_poly
from sympy import Poly, Symbol

from .errors import InvariantViolation, NotACharacter
from .permgrp import (
    PermGroup,
    compose,
    cycle_type,
    identity,
    inverse,
    perm_order,
    power,
)


# ---------------------------------------------------------------------------
# Cyclotomic integers
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _phi_data(e: int):
    """Degree of the e-th cyclotomic polynomial and reduction rows.

    rows[j] expresses zeta_e^j in the power basis 1, zeta, ..., zeta^(d-1)
    as a sparse {exponent: coeff} dict, for 0 <= j <= 2e - 2 (enough for
    products of reduced elements and for Galois twists).
    """
    x = Symbol("x")
    coeffs = Poly(cyclotomic_poly(e, x), x).all_coeffs()
    deg = len(coeffs) - 1
    top = {}
    for i, c in enumerate(coeffs[1:]):
        if c:
            top[deg - 1 - i] = -int(c)
    rows: list = [{0: 1}]
    for _ in range(1, 2 * e - 1):
        acc: dict = {}
        for exp, c in rows[-1].items():
            if exp + 1 < deg:
                acc[exp + 1] = acc.get(exp + 1, 0) + c
            else:
                for k, v in top.items():
                    acc[k] = acc.get(k, 0) + c * v
        rows.append({k: v for k, v in acc.items() if v})
    return deg, tuple(rows)


def _make_cyc(e: int, acc: dict) -> "Cyc":
    return Cyc(e, tuple(sorted((k, v) for k, v in acc.items() if v)))


@dataclass(frozen=True)
class Cyc:
    """Element of Z[zeta_e] in the power basis, stored sparsely.

    terms is a sorted tuple of (exponent, coefficient) pairs with exponent
    below deg(Phi_e) and nonzero integer coefficients.
    """

    e: int
    terms: tuple

    @staticmethod
    def from_int(e: int, n: int) -> "Cyc":
        return Cyc(e, ((0, n),) if n else ())

    @staticmethod
    def root(e: int, k: int) -> "Cyc":
        """zeta_e^k, reduced."""
        k %= e
        deg, rows = _phi_data(e)
        if k < deg:
            return Cyc(e, ((k, 1),))
        return _make_cyc(e, dict(rows[k]))

    def _coerce(self, other):
        if isinstance(other, int):
            return Cyc.from_int(self.e, other)
        if isinstance(other, Cyc):
            if other.e != self.e:
                raise ValueError("mixed cyclotomic orders")
            return other
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = dict(self.terms)
        for k, v in other.terms:
            acc[k] = acc.get(k, 0) + v
        return _make_cyc(self.e, acc)

    __radd__ = __add__

    def __neg__(self):
        return Cyc(self.e, tuple((k, -v) for k, v in self.terms))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return Cyc(self.e, ())
            return Cyc(self.e, tuple((k, v * other) for k, v in self.terms))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        deg, rows = _phi_data(self.e)
        acc: dict = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                s = e1 + e2
                c = c1 * c2
                if s < deg:
                    acc[s] = acc.get(s, 0) + c
                else:
                    for k, v in rows[s].items():
                        acc[k] = acc.get(k, 0) + c * v
        return _make_cyc(self.e, acc)

    __rmul__ = __mul__

    def galois(self, j: int) -> "Cyc":
        """Apply zeta -> zeta^j; j must be prime to e for an automorphism."""
        deg, rows = _phi_data(self.e)
        acc: dict = {}
        for exp, c in self.terms:
            k = (exp * j) % self.e
            if k < deg:
                acc[k] = acc.get(k, 0) + c
            else:
                for k2, v in rows[k].items():
                    acc[k2] = acc.get(k2, 0) + c * v
        return _make_cyc(self.e, acc)

    def conj(self) -> "Cyc":
        return self.galois(self.e - 1)

    def is_int(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0] == 0)

    def as_int(self) -> int:
        if not self.terms:
            return 0
        if len(self.terms) == 1 and self.terms[0][0] == 0:
            return self.terms[0][1]
        raise ValueError(f"not a rational integer: {self!r}")

    def to_complex(self) -> complex:
        import cmath

        return sum(
            c * cmath.exp(2j * cmath.pi * k / self.e) for k, c in self.terms
        ) + 0j

    def __eq__(self, other):
        if isinstance(other, int):
            return self.is_int() and self.as_int() == other
        if isinstance(other, Cyc):
            return self.e == other.e and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        if self.is_int():
            return hash(self.as_int())
        return hash((self.e, self.terms))

    def __repr__(self):
        if self.is_int():
            return f"Cyc({self.as_int()})"
        body = " + ".join(f"{c}*z{self.e}^{k}" for k, c in self.terms)
        return f"Cyc({body})"


def value_sort_key(v) -> tuple:
    """Total order on table values: descending in leading coefficients so
    the all-ones (trivial) row precedes the sign row among equal degrees."""
    if isinstance(v, int):
        v = Cyc.from_int(1, v)
    return tuple((exp, -c) for exp, c in v.terms)


def _serialize_value(v):
    if isinstance(v, int):
        return v
    if v.is_int():
        return v.as_int()
    deg, _ = _phi_data(v.e)
    dense = [0] * deg
    for k, c in v.terms:
        dense[k] = c
    return {"order": v.e, "coeffs": dense}


# ---------------------------------------------------------------------------
# Mod-p linear algebra
# ---------------------------------------------------------------------------

def _mat_mul(a, b, p):
    n, m, r = len(a), len(b[0]), len(b)
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for k in range(r):
            c = ai[k]
            if c:
                bk = b[k]
                for j in range(m):
                    oi[j] = (oi[j] + c * bk[j]) % p
    return out


def _mat_vec(a, v, p):
    return [sum(a[i][j] * v[j] for j in range(len(v))) % p for i in range(len(a))]


def _charpoly_modp(b, p):
    """Monic characteristic polynomial of b over F_p (Faddeev-LeVerrier).

    Needs p > dim, which the prime selection guarantees.
    """
    d = len(b)
    cs = [1]
    mk = [[int(i == j) for j in range(d)] for i in range(d)]
    for k in range(1, d + 1):
        am = _mat_mul(b, mk, p)
        tr = sum(am[i][i] for i in range(d)) % p
        ck = (-tr) * pow(k, p - 2, p) % p
        cs.append(ck)
        if k < d:
            mk = [
                [(am[i][j] + (ck if i == j else 0)) % p for j in range(d)]
                for i in range(d)
            ]
    return cs


def _poly_roots_modp(cs, p):
    roots = []
    for lam in range(p):
        acc = 0
        for c in cs:
            acc = (acc * lam + c) % p
        if acc == 0:
            roots.append(lam)
    return roots


def _rref_modp(mat, p):
    rows = [r[:] for r in mat]
    n, m = len(rows), len(rows[0])
    pivots = []
    r = 0
    for c in range(m):
        pr = next((i for i in range(r, n) if rows[i][c]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = pow(rows[r][c], p - 2, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(n):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(rows[i][j] - f * rows[r][j]) % p for j in range(m)]
        pivots.append(c)
        r += 1
        if r == n:
            break
    return rows[:r], pivots


def _nullspace_modp(mat, p):
    rows, pivots = _rref_modp(mat, p)
    m = len(mat[0])
    pivset = set(pivots)
    basis = []
    for c in range(m):
        if c in pivset:
            continue
        v = [0] * m
        v[c] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-rows[i][c]) % p
        basis.append(v)
    return basis


# ---------------------------------------------------------------------------
# Dixon's method
# ---------------------------------------------------------------------------

def _choose_prime(order: int, exponent: int, num_classes: int) -> int:
    # p = 1 (mod e) so F_p contains the needed roots of unity; p > 2*sqrt(|G|)
    # so degrees and multiplicities lift uniquely; p > k keeps the
    # characteristic-polynomial divisions valid.
    floor = max(math.isqrt(4 * order) + 1, num_classes + 1, 3)
    p = exponent + 1
    while p < floor or not isprime(p):
        p += exponent
    return p


class CharacterTable:
    """Exact character table with deterministic class and row order.

    Classes sorted by (size, element order, cycle type, representative);
    rows by (degree, value vector) under value_sort_key.  Values are Cyc
    over Q(zeta_e), e the group exponent.
    """

    def __init__(self, group: PermGroup, classes, class_index, exponent,
                 prime, degrees, rows):
        self.group = group
        self.classes = classes
        self.class_index = class_index
        self.exponent = exponent
        self.prime = prime
        self.degrees = degrees
        self.rows = rows
        self.group_order = group.order
        self.num_classes = len(classes)
        self.class_sizes = tuple(c.size for c in classes)
        self.class_orders = tuple(c.order for c in classes)
        self._tstar = tuple(
            class_index[inverse(c.rep)] for c in classes
        )

    def value(self, i: int, t: int) -> Cyc:
        return self.rows[i][t]

    def class_of_perm(self, g: tuple) -> int:
        return self.class_index[tuple(g)]

    def perm_character(self, action) -> tuple:
        """Fixed-point counts of class representatives under the action."""
        vals = []
        for c in self.classes:
            if hasattr(action, "character_value"):
                vals.append(action.character_value(c.rep))
            else:
                img = action.act(c.rep)
                vals.append(sum(1 for i, x in enumerate(img) if x == i))
        return tuple(vals)

    def decompose(self, values) -> tuple:
        if len(values) != self.num_classes:
            raise NotACharacter(
                f"expected {self.num_classes} class values, got {len(values)}"
            )
        order = self.group_order
        mults = []
        for i in range(self.num_classes):
            acc = Cyc.from_int(self.exponent, 0)
            for t in range(self.num_classes):
                v = values[t]
                if isinstance(v, int) and v == 0:
                    continue
                acc = acc + self.rows[i][self._tstar[t]] * v * self.class_sizes[t]
            if not acc.is_int():
                raise NotACharacter(f"inner product with row {i} is irrational")
            num = acc.as_int()
            if num % order:
                raise NotACharacter(
                    f"multiplicity of row {i} is {num}/{order}, not integral"
                )
            m = num // order
            if m < 0:
                raise NotACharacter(f"multiplicity of row {i} is negative: {m}")
            mults.append(m)
        return tuple(mults)

    def export(self) -> dict:
        return {
            "group_order": self.group_order,
            "exponent": self.exponent,
            "prime": self.prime,
            "classes": [
                {
                    "size": c.size,
                    "order": c.order,
                    "cycle_type": list(c.cycle_type),
                    "rep": list(c.rep),
                }
                for c in self.classes
            ],
            "degrees": list(self.degrees),
            "irreps": [
                [_serialize_value(v) for v in row] for row in self.rows
            ],
        }


def character_table(group: PermGroup, limit: int | None = 25000) -> CharacterTable:
    """Exact character table by Dixon's modular method."""
    classes, class_index = group.class_data(limit)
    k = len(classes)
    order = group.order
    if classes[0].order != 1:
        raise InvariantViolation("identity class did not sort first")
    exponent = math.lcm(*(c.order for c in classes))
    p = _choose_prime(order, exponent, k)
    z = primitive_root(p)

    reps = [c.rep for c in classes]
    sizes = [c.size for c in classes]

    # class multiplication coefficients a[r][s][t] = #{(x,y) in C_r x C_s :
    # xy = rep_t}; for each x the partner y = x^-1 rep_t is forced
    mats = [[[0] * k for _ in range(k)] for _ in range(k)]
    for x in group.elements(limit):
        r = class_index[x]
        xi = inverse(x)
        row = mats[r]
        for t in range(k):
            s = class_index[compose(xi, reps[t])]
            row[s][t] += 1

    # split F_p^k into common eigenvectors of the class matrices
    spaces = [_rref_modp([[int(i == j) for j in range(k)] for i in range(k)], p)]
    for r in range(k):
        if all(len(rows) == 1 for rows, _ in spaces):
            break
        a = [[mats[r][s][t] % p for t in range(k)] for s in range(k)]
        nxt = []
        for rows, pivots in spaces:
            d = len(rows)
            if d == 1:
                nxt.append((rows, pivots))
                continue
            images = [_mat_vec(a, w, p) for w in rows]
            # invariance lets us read restricted coordinates off pivots
            b = [[images[j][pivots[i]] for j in range(d)] for i in range(d)]
            split_dim = 0
            for lam in _poly_roots_modp(_charpoly_modp(b, p), p):
                shifted = [
                    [(b[i][j] - (lam if i == j else 0)) % p for j in range(d)]
                    for i in range(d)
                ]
                block = _nullspace_modp(shifted, p)
                if not block:
                    continue
                lifted = [
                    [
                        sum(cv * rows[j][c] for j, cv in enumerate(coords))
                        % p
                        for c in range(k)
                    ]
                    for coords in block
                ]
                nxt.append(_rref_modp(lifted, p))
                split_dim += len(block)
            if split_dim != d:
                raise InvariantViolation(
                    "class matrix restriction is not diagonalizable"
                )
        spaces = nxt
    if any(len(rows) != 1 for rows, _ in spaces):
        raise InvariantViolation("class algebra did not split into lines")

    omegas = []
    for rows, _ in spaces:
        v = rows[0]
        if v[0] == 0:
            raise InvariantViolation("eigenvector vanishes at the identity class")
        inv0 = pow(v[0], p - 2, p)
        omegas.append([x * inv0 % p for x in v])

    tstar = [class_index[inverse(reps[t])] for t in range(k)]
    inv_sizes = [pow(n, p - 2, p) for n in sizes]

    chars_p = []
    degrees = []
    for w in omegas:
        s = sum(w[t] * w[tstar[t]] % p * inv_sizes[t] for t in range(k)) % p
        dsq = order % p * pow(s, p - 2, p) % p
        d = sqrt_mod(dsq, p)
        if d is None:
            raise InvariantViolation("degree is not a square mod p")
        d = min(d, p - d)
        degrees.append(d)
        chars_p.append([d * w[t] % p * inv_sizes[t] % p for t in range(k)])
    if sum(d * d for d in degrees) != order:
        raise InvariantViolation("degrees fail sum-of-squares identity")

    # lift to Z[zeta_e]: chi(g) = sum_j m_j zeta_o^j with m_j the eigenvalue
    # multiplicities, recovered by discrete Fourier inversion mod p
    pow_classes = []
    for t in range(k):
        o = classes[t].order
        pow_classes.append([class_index[power(reps[t], l)] for l in range(o)])
    z_e = pow(z, (p - 1) // exponent, p)

    rows_exact = []
    for i in range(k):
        chi = chars_p[i]
        row = []
        for t in range(k):
            o = classes[t].order
            z_o = pow(z, (p - 1) // o, p)
            inv_o = pow(o, p - 2, p)
            val = Cyc.from_int(exponent, 0)
            msum = 0
            for j in range(o):
                acc = 0
                for l in range(o):
                    acc = (acc + chi[pow_classes[t][l]]
                           * pow(z_o, (-j * l) % (p - 1), p)) % p
                m = acc * inv_o % p
                msum += m
                if m:
                    val = val + Cyc.root(exponent, j * (exponent // o)) * m
            if msum != degrees[i]:
                raise InvariantViolation(
                    "eigenvalue multiplicities do not sum to the degree"
                )
            back = sum(
                c * pow(z_e, exp, p) for exp, c in val.terms
            ) % p
            if back != chi[t]:
                raise InvariantViolation("cyclotomic lift disagrees mod p")
            row.append(val)
        rows_exact.append(row)

    order_idx = sorted(
        range(k),
        key=lambda i: (degrees[i], tuple(value_sort_key(v) for v in rows_exact[i])),
    )
    degrees = tuple(degrees[i] for i in order_idx)
    rows_exact = tuple(tuple(rows_exact[i]) for i in order_idx)

    table = CharacterTable(group, classes, class_index, exponent, p,
                           degrees, rows_exact)
    _verify_orthogonality(table)
    return table


def _verify_orthogonality(table: CharacterTable) -> None:
    k = table.num_classes
    order = table.group_order
    rows = table.rows
    sizes = table.class_sizes
    tstar = table._tstar
    for i in range(k):
        for j in range(i, k):
            acc = Cyc.from_int(table.exponent, 0)
            for t in range(k):
                acc = acc + rows[i][t] * rows[j][tstar[t]] * sizes[t]
            expect = order if i == j else 0
            if acc != expect:
                raise InvariantViolation(
                    f"row orthogonality fails at ({i}, {j}): {acc!r}"
                )
    for s in range(k):
        for t in range(s, k):
            acc = Cyc.from_int(table.exponent, 0)
            for i in range(k):
                acc = acc + rows[i][s] * rows[i][tstar[t]]
            expect = order // sizes[t] if s == t else 0
            if acc != expect:
                raise InvariantViolation(
                    f"column orthogonality fails at ({s}, {t}): {acc!r}"
                )


# ---------------------------------------------------------------------------
# Symmetric groups via partitions
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def partitions_of(m: int) -> tuple:
    """All partitions of m as descending tuples, lexicographically descending."""
    if m == 0:
        return ((),)
    out = []

    def rec(remaining, cap, prefix):
        if remaining == 0:
            out.append(prefix)
            return
        for part in range(min(cap, remaining), 0, -1):
            rec(remaining - part, part, prefix + (part,))

    rec(m, m, ())
    return tuple(out)


def _z_lambda(lam: tuple) -> int:
    z = 1
    mult: dict = {}
    for part in lam:
        mult[part] = mult.get(part, 0) + 1
    for part, m in mult.items():
        z *= part**m * math.factorial(m)
    return z


def _conjugate(lam: tuple) -> tuple:
    if not lam:
        return ()
    return tuple(
        sum(1 for part in lam if part > j) for j in range(lam[0])
    )


def hook_degree(lam: tuple) -> int:
    m = sum(lam)
    conj = _conjugate(lam)
    prod = 1
    for i, li in enumerate(lam):
        for j in range(li):
            prod *= li - j + conj[j] - i - 1
    return math.factorial(m) // prod


@lru_cache(maxsize=None)
def mn_value(lam: tuple, mu: tuple) -> int:
    """Character value chi_lam(mu) by border-strip removal on beta numbers."""
    if not mu:
        return 1
    k, rest = mu[0], mu[1:]
    n = len(lam)
    beta = [lam[i] + n - 1 - i for i in range(n)]
    bset = set(beta)
    total = 0
    for b in beta:
        c = b - k
        if c < 0 or c in bset:
            continue
        height = sum(1 for x in beta if c < x < b)
        nb = sorted((x if x != b else c for x in beta), reverse=True)
        nlam = tuple(
            part for part in (nb[i] - (n - 1 - i) for i in range(n)) if part
        )
        total += (-1) ** height * mn_value(nlam, rest)
    return total


class SymmetricCharacterTable:
    """Character table of S_m indexed by partitions, values computed lazily.

    Same class ordering convention as CharacterTable; rows are ordered by
    (degree, partition descending) instead of full value vectors so that
    a row's identity never forces evaluating the whole table.
    """

    def __init__(self, m: int):
        self.m = m
        self.group_order = math.factorial(m)
        parts = partitions_of(m)
        classes = sorted(
            parts,
            key=lambda lam: (
                self.group_order // _z_lambda(lam),
                math.lcm(*lam) if lam else 1,
                lam,
            ),
        )
        self.class_partitions = tuple(classes)
        self.class_sizes = tuple(
            self.group_order // _z_lambda(lam) for lam in classes
        )
        self.class_orders = tuple(
            math.lcm(*lam) if lam else 1 for lam in classes
        )
        self._class_idx = {lam: i for i, lam in enumerate(classes)}
        irreps = sorted(
            parts, key=lambda lam: (hook_degree(lam), tuple(-p for p in lam))
        )
        self.irrep_partitions = tuple(irreps)
        self.degrees = tuple(hook_degree(lam) for lam in irreps)
        self.num_classes = len(classes)

    def value(self, i: int, t: int) -> int:
        return mn_value(self.irrep_partitions[i], self.class_partitions[t])

    def class_of_perm(self, g: tuple) -> int:
        return self._class_idx[cycle_type(g)]

    def class_of_partition(self, lam: tuple) -> int:
        return self._class_idx[tuple(sorted(lam, reverse=True))]

    def perm_character(self, action) -> tuple:
        vals = []
        for lam in self.class_partitions:
            rep = _partition_rep(self.m, lam)
            if hasattr(action, "character_value"):
                vals.append(action.character_value(rep))
            else:
                img = action.act(rep)
                vals.append(sum(1 for i, x in enumerate(img) if x == i))
        return tuple(vals)

    def decompose(self, values) -> tuple:
        if len(values) != self.num_classes:
            raise NotACharacter(
                f"expected {self.num_classes} class values, got {len(values)}"
            )
        vals = []
        for v in values:
            if isinstance(v, Cyc):
                if not v.is_int():
                    raise NotACharacter("symmetric group characters are rational")
                v = v.as_int()
            vals.append(v)
        mults = []
        for i in range(self.num_classes):
            acc = 0
            for t in range(self.num_classes):
                if vals[t] == 0:
                    continue
                acc += self.class_sizes[t] * vals[t] * self.value(i, t)
            if acc % self.group_order:
                raise NotACharacter(
                    f"multiplicity of row {i} is not integral"
                )
            m = acc // self.group_order
            if m < 0:
                raise NotACharacter(f"multiplicity of row {i} is negative: {m}")
            mults.append(m)
        return tuple(mults)

    def regular_decomposition(self) -> tuple:
        return self.degrees

    def export(self) -> dict:
        return {
            "group_order": self.group_order,
            "classes": [
                {
                    "partition": list(lam),
                    "size": self.class_sizes[t],
                    "order": self.class_orders[t],
                }
                for t, lam in enumerate(self.class_partitions)
            ],
            "degrees": list(self.degrees),
            "irrep_partitions": [list(lam) for lam in self.irrep_partitions],
            "irreps": [
                [self.value(i, t) for t in range(self.num_classes)]
                for i in range(self.num_classes)
            ],
        }


def _partition_rep(m: int, lam: tuple) -> tuple:
    out = list(range(m))
    start = 0
    for part in lam:
        for i in range(part):
            out[start + i] = start + (i + 1) % part
        start += part
    return tuple(out)


def symmetric_character_table(m: int) -> SymmetricCharacterTable:
    return SymmetricCharacterTable(m)
