"""Exact integer spectra and characteristic polynomials.

No floating point enters any integrality decision.  Two exact routes:

* char_poly: characteristic polynomial over Z via modular Hessenberg
  reduction and CRT, with a rigorous coefficient bound, so the result is
  deterministic and exact (default cap 512 vertices).

* integer_spectrum: first attempts an integral-spectrum certificate that
  avoids the full CRT cost: candidate integer eigenvalues are read off the
  characteristic polynomial mod one prime, then certified by checking
  prod_t (A - t I) = 0 over Z (via enough primes to cover a rigorous
  operator-norm bound).  A symmetric matrix passing that check is
  diagonalizable with spectrum inside the candidate set, and the mod-p
  multiplicities are then exact.  When certification fails the spectrum is
  not fully integral and the exact char_poly supplies the residual.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import CapacityError
from .graphs import Graph

try:  # numba accelerates mod-p Hessenberg; the numpy fallback is exact too
    from numba import njit

    _HAVE_NUMBA = True
except Exception:  # pragma: no cover
    _HAVE_NUMBA = False

CHAR_POLY_CAP = 512

# 30-bit primes for CRT (descending)
_PRIMES30: list[int] = []


def _primes30(count: int) -> list[int]:
    global _PRIMES30
    p = _PRIMES30[-1] - 2 if _PRIMES30 else (1 << 30) - 1
    while len(_PRIMES30) < count:
        while not _is_prime(p):
            p -= 2
        _PRIMES30.append(p)
        p -= 2
    return _PRIMES30[:count]


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if p % q == 0:
            return p == q
    d = p - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(r - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Spectrum:
    """Entries (eigenvalue, multiplicity) strictly decreasing; or a residual.

    `entries` is complete when `residual` is None: multiplicities sum to n.
    Otherwise `residual` holds the integer-root-free factor of the
    characteristic polynomial (coefficients from highest degree down).
    """

    entries: tuple[tuple[int, int], ...]
    residual: tuple[int, ...] | None = None

    @property
    def integral(self) -> bool:
        return self.residual is None

    def multiplicity(self, eigenvalue: int) -> int:
        for ev, m in self.entries:
            if ev == eigenvalue:
                return m
        return 0

    def as_dict(self) -> dict[int, int]:
        return dict(self.entries)


def _adjacency_matrix(X: Graph) -> np.ndarray:
    a = np.zeros((X.n, X.n), dtype=np.int64)
    for v in range(X.n):
        row = X.adj[v]
        while row:
            b = row & -row
            a[v, b.bit_length() - 1] = 1
            row ^= b
    return a


def _charpoly_mod_py(M: np.ndarray, p: int) -> list[int]:
    """Characteristic polynomial of M mod p (pure numpy, exact)."""
    n = M.shape[0]
    H = (M % p).astype(np.int64).copy()
    # similarity reduction to upper Hessenberg with pivoting
    for c in range(n - 2):
        piv = -1
        for r in range(c + 1, n):
            if H[r, c] % p:
                piv = r
                break
        if piv == -1:
            continue
        if piv != c + 1:
            H[[c + 1, piv]] = H[[piv, c + 1]]
            H[:, [c + 1, piv]] = H[:, [piv, c + 1]]
        inv = pow(int(H[c + 1, c]), p - 2, p)
        for r in range(c + 2, n):
            if H[r, c] % p:
                f = int(H[r, c]) * inv % p
                H[r, :] = (H[r, :] - f * H[c + 1, :]) % p
                H[:, c + 1] = (H[:, c + 1] + f * H[:, r]) % p
    # leading-minor recurrence for det(xI - H)
    polys = [np.array([1], dtype=object)]
    for k in range(1, n + 1):
        prev = polys[k - 1]
        poly = np.zeros(k + 1, dtype=object)
        poly[:-1] += prev  # x * prev
        poly[1:] = (poly[1:] - int(H[k - 1, k - 1]) % p * prev) % p
        poly[0] %= p
        beta = 1
        for i in range(1, k):
            beta = beta * int(H[k - i, k - i - 1]) % p
            coeff = int(H[k - 1 - i, k - 1]) * beta % p
            if coeff:
                sub = polys[k - 1 - i]
                poly[k + 1 - len(sub) :] = (poly[k + 1 - len(sub) :] - coeff * sub) % p
        polys.append(poly % p)
    return [int(c) % p for c in polys[n]]


if _HAVE_NUMBA:

    @njit(cache=True)
    def _charpoly_mod_nb(H, p):  # pragma: no cover - exercised via wrapper
        n = H.shape[0]
        for i in range(n):
            for j in range(n):
                H[i, j] %= p
        for c in range(n - 2):
            piv = -1
            for r in range(c + 1, n):
                if H[r, c] != 0:
                    piv = r
                    break
            if piv == -1:
                continue
            if piv != c + 1:
                for j in range(n):
                    t = H[c + 1, j]
                    H[c + 1, j] = H[piv, j]
                    H[piv, j] = t
                for i in range(n):
                    t = H[i, c + 1]
                    H[i, c + 1] = H[i, piv]
                    H[i, piv] = t
            # modular inverse by Fermat
            inv = 1
            b = H[c + 1, c] % p
            e = p - 2
            while e:
                if e & 1:
                    inv = inv * b % p
                b = b * b % p
                e >>= 1
            for r in range(c + 2, n):
                if H[r, c] != 0:
                    f = H[r, c] * inv % p
                    for j in range(n):
                        H[r, j] = (H[r, j] - f * H[c + 1, j]) % p
                    for i in range(n):
                        H[i, c + 1] = (H[i, c + 1] + f * H[i, r]) % p
        polys = np.zeros((n + 1, n + 1), dtype=np.int64)
        polys[0, n] = 1  # coefficients stored low-degree at the right
        for k in range(1, n + 1):
            # x * prev
            for j in range(n - k, n):
                polys[k, j] = polys[k - 1, j + 1]
            a = H[k - 1, k - 1] % p
            for j in range(n - k, n + 1):
                polys[k, j] = (polys[k, j] - a * polys[k - 1, j]) % p
            beta = 1
            for i in range(1, k):
                beta = beta * H[k - i, k - i - 1] % p
                coeff = H[k - 1 - i, k - 1] * beta % p
                if coeff != 0:
                    for j in range(n + 1):
                        polys[k, j] = (polys[k, j] - coeff * polys[k - 1 - i, j]) % p
        out = np.zeros(n + 1, dtype=np.int64)
        for j in range(n + 1):
            out[j] = polys[n, j] % p
        return out


def _charpoly_mod(a: np.ndarray, p: int) -> list[int]:
    """char poly of `a` mod p, coefficients highest degree first."""
    if _HAVE_NUMBA:
        res = _charpoly_mod_nb(a.astype(np.int64).copy(), p)
        return [int(x) for x in res]
    return _charpoly_mod_py(a, p)


def char_poly(X: Graph, cap: int = CHAR_POLY_CAP) -> list[int]:
    """Exact integer coefficients of det(xI - A), highest degree first.

    Modular Hessenberg + CRT; the prime count covers the bound
    |coeff| <= (1 + max_degree)^n, so the lift is exact.
    """
    n = X.n
    if n > cap:
        raise CapacityError(f"{n} vertices exceeds char_poly cap {cap}")
    if n == 0:
        return [1]
    a = _adjacency_matrix(X)
    delta = max(X.degrees())
    bound_bits = int(n * np.log2(1 + delta)) + 3 if delta else 2
    primes = []
    acc_bits = 0
    idx = 0
    while acc_bits <= bound_bits:
        primes = _primes30(idx + 1)
        acc_bits += primes[idx].bit_length() - 1
        idx += 1
    primes = primes[:idx]
    residues = [_charpoly_mod(a, p) for p in primes]
    coeffs = []
    modulus = 1
    for p in primes:
        modulus *= p
    for k in range(n + 1):
        x = 0
        for p, res in zip(primes, residues):
            mp = modulus // p
            x += res[k] * mp * pow(mp % p, p - 2, p)
        x %= modulus
        if x > modulus // 2:
            x -= modulus
        coeffs.append(x)
    assert coeffs[0] == 1
    return coeffs


def charpoly_cofactor_oracle(X: Graph):
    """Naive exact char poly by cofactor expansion of det(xI - A).

    Exponential; only usable for tiny graphs (independent cross-check).
    Returns coefficients highest degree first.
    """
    n = X.n

    # polynomial entries: dict degree -> coeff
    def padd(a, b):
        out = dict(a)
        for k, v in b.items():
            out[k] = out.get(k, 0) + v
            if not out[k]:
                del out[k]
        return out

    def pmul(a, b):
        out: dict[int, int] = {}
        for i, x in a.items():
            for j, y in b.items():
                k = i + j
                out[k] = out.get(k, 0) + x * y
                if not out[k]:
                    del out[k]
        return out

    def pneg(a):
        return {k: -v for k, v in a.items()}

    mat = [
        [
            {1: 1} if i == j else ({0: -1} if X.has_edge(i, j) else {})
            for j in range(n)
        ]
        for i in range(n)
    ]

    def det(rows, cols):
        if not cols:
            return {0: 1}
        r = rows[0]
        total: dict[int, int] = {}
        for idx, c in enumerate(cols):
            entry = mat[r][c]
            if not entry:
                continue
            sub = det(rows[1:], cols[:idx] + cols[idx + 1 :])
            term = pmul(entry, sub)
            total = padd(total, term if idx % 2 == 0 else pneg(term))
        return total

    d = det(list(range(n)), list(range(n)))
    return [d.get(k, 0) for k in range(n, -1, -1)]


def _poly_eval_mod(coeffs: list[int], x: int, p: int) -> int:
    acc = 0
    for c in coeffs:
        acc = (acc * x + c) % p
    return acc


def _synth_div_int(coeffs: list[int], t: int) -> tuple[list[int], int]:
    """Divide by (x - t) over Z; returns (quotient, remainder)."""
    out = []
    acc = 0
    for c in coeffs:
        acc = acc * t + c
        out.append(acc)
    return out[:-1], out[-1]


def _certified_integral(X: Graph) -> Spectrum | None:
    """Integral spectrum with exact certificates, or None if not certified."""
    n = X.n
    if n == 0:
        return Spectrum(())
    delta = max(X.degrees())
    if delta == 0:
        return Spectrum(((0, n),))
    # candidate roots and multiplicities from char poly mod one prime
    p0 = _primes30(1)[0]
    a = _adjacency_matrix(X)
    cp = _charpoly_mod(a, p0)
    cand: list[tuple[int, int]] = []
    total = 0
    rest = list(cp)
    for t in range(delta, -delta - 1, -1):
        m = 0
        while _poly_eval_mod(rest, t % p0, p0) == 0 and len(rest) > 1:
            # synthetic division mod p0
            q = []
            acc = 0
            for c in rest:
                acc = (acc * t + c) % p0
                q.append(acc)
            rest = q[:-1]
            m += 1
        if m:
            cand.append((t, m))
            total += m
    if total != n:
        return None
    # certificate: prod_t (A - tI)^{1} == 0 over Z (t over distinct candidates)
    ts = [t for t, _ in cand]
    norm_bound = 1
    for t in ts:
        norm_bound *= delta + abs(t)
    needed = 2 * norm_bound + 1
    # float64 matmul is exact while p^2 * n < 2^53
    pbits = (52 - n.bit_length()) // 2
    if pbits < 8:
        return None
    prime = (1 << pbits) - 1
    prod_primes: list[int] = []
    mod_acc = 1
    while mod_acc < needed:
        while not _is_prime(prime):
            prime -= 2
        prod_primes.append(prime)
        mod_acc *= prime
        prime -= 2
    af = a.astype(np.float64)
    ident = np.eye(n, dtype=np.float64)
    for p in prod_primes:
        m = ident.copy()
        for t in ts:
            m = m @ ((af - t * ident) % p)
            m %= p
        if m.any():
            return None
    entries = tuple(sorted(cand, key=lambda e: -e[0]))
    return Spectrum(entries)


def integer_spectrum(X: Graph, cap: int = CHAR_POLY_CAP) -> Spectrum:
    """Exact integer spectrum, or entries plus the integer-root-free residual.

    The integral case is certified without floating point (see module doc);
    the non-integral case needs the exact char_poly and so is subject to its
    vertex cap.
    """
    certified = _certified_integral(X)
    if certified is not None:
        return certified
    coeffs = char_poly(X, cap=cap)
    delta = max(X.degrees()) if X.n else 0
    entries = []
    rest = coeffs
    for t in range(delta, -delta - 1, -1):
        m = 0
        while len(rest) > 1:
            q, r = _synth_div_int(rest, t)
            if r != 0:
                break
            rest = q
            m += 1
        if m:
            entries.append((t, m))
    if len(rest) == 1:
        return Spectrum(tuple(entries))
    return Spectrum(tuple(entries), tuple(rest))


def cube_spectrum(d: int) -> Spectrum:
    """Spectrum of the d-dimensional hypercube: d - 2i with multiplicity C(d, i)."""
    if d < 0:
        raise ValueError("dimension must be nonnegative")
    return Spectrum(tuple((d - 2 * i, comb(d, i)) for i in range(d + 1)))


def is_submultiset_of_cube(s: Spectrum, d: int) -> bool:
    """Each eigenvalue multiplicity fits inside the d-cube's spectrum."""
    if not s.integral:
        return False
    cube = cube_spectrum(d).as_dict()
    return all(cube.get(ev, 0) >= m for ev, m in s.entries)
