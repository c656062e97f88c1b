"""McMurchie-Davidson one- and two-electron integrals over contracted Gaussians.

Handles arbitrary Cartesian angular momentum via the Hermite expansion
recursions; the benchmark basis only exercises s and p functions.  All
quantities in atomic units.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import gamma, gammainc

from sto3g import CHARGE, BasisFunction


def hermite_coefficients(l1: int, l2: int, a: float, b: float, ab: float) -> np.ndarray:
    """E_t^{l1 l2} for one Cartesian direction; ab = A - B along it."""
    p = a + b
    mu = a * b / p
    e = np.zeros((l1 + 1, l2 + 1, l1 + l2 + 1))
    e[0, 0, 0] = math.exp(-mu * ab * ab)
    for i in range(1, l1 + 1):
        for t in range(i + 1):
            e[i, 0, t] = (
                (1.0 / (2 * p)) * (e[i - 1, 0, t - 1] if t > 0 else 0.0)
                - (mu * ab / a) * e[i - 1, 0, t]
                + (t + 1) * (e[i - 1, 0, t + 1] if t + 1 <= i - 1 else 0.0)
            )
    for j in range(1, l2 + 1):
        for i in range(l1 + 1):
            for t in range(i + j + 1):
                e[i, j, t] = (
                    (1.0 / (2 * p)) * (e[i, j - 1, t - 1] if t > 0 else 0.0)
                    + (mu * ab / b) * e[i, j - 1, t]
                    + (t + 1)
                    * (e[i, j - 1, t + 1] if t + 1 <= i + j - 1 else 0.0)
                )
    return e


def boys(n_max: int, x: float) -> np.ndarray:
    """F_0..F_n at x."""
    out = np.empty(n_max + 1)
    if x < 1e-12:
        for n in range(n_max + 1):
            out[n] = 1.0 / (2 * n + 1) - x / (2 * n + 3)
        return out
    for n in range(n_max + 1):
        a = n + 0.5
        out[n] = 0.5 * x ** (-a) * gamma(a) * gammainc(a, x)
    return out


def hermite_integrals(t_max: tuple[int, int, int], p: float,
                      pc: np.ndarray) -> np.ndarray:
    """R_{tuv}(p, PC) auxiliary Hermite Coulomb integrals."""
    tx, ty, tz = t_max
    n_max = tx + ty + tz
    x = p * float(pc @ pc)
    f = boys(n_max, x)
    r = np.zeros((n_max + 1, tx + 1, ty + 1, tz + 1))
    for n in range(n_max + 1):
        r[n, 0, 0, 0] = (-2.0 * p) ** n * f[n]
    for t in range(1, tx + 1):
        for n in range(n_max - t + 1):
            r[n, t, 0, 0] = (t - 1) * (r[n + 1, t - 2, 0, 0] if t > 1 else 0.0) \
                + pc[0] * r[n + 1, t - 1, 0, 0]
    for u in range(1, ty + 1):
        for t in range(tx + 1):
            for n in range(n_max - t - u + 1):
                r[n, t, u, 0] = (u - 1) * (r[n + 1, t, u - 2, 0] if u > 1 else 0.0) \
                    + pc[1] * r[n + 1, t, u - 1, 0]
    for v in range(1, tz + 1):
        for u in range(ty + 1):
            for t in range(tx + 1):
                for n in range(n_max - t - u - v + 1):
                    r[n, t, u, v] = (v - 1) * (r[n + 1, t, u, v - 2] if v > 1 else 0.0) \
                        + pc[2] * r[n + 1, t, u, v - 1]
    return r[0]


def _pair_data(f1: BasisFunction, f2: BasisFunction, a: float, b: float):
    p = a + b
    A = np.asarray(f1.center)
    B = np.asarray(f2.center)
    P = (a * A + b * B) / p
    es = [
        hermite_coefficients(f1.powers[d], f2.powers[d], a, b, float(A[d] - B[d]))
        for d in range(3)
    ]
    return p, P, es


def overlap_primitive(f1, f2, a, b) -> float:
    p, _, es = _pair_data(f1, f2, a, b)
    val = 1.0
    for d in range(3):
        val *= es[d][f1.powers[d], f2.powers[d], 0]
    return val * (math.pi / p) ** 1.5


def _contracted(f1: BasisFunction, f2: BasisFunction, primitive_fn) -> float:
    total = 0.0
    for p1 in f1.primitives:
        for p2 in f2.primitives:
            total += (
                p1.coefficient
                * p2.coefficient
                * primitive_fn(f1, f2, p1.exponent, p2.exponent)
            )
    return total


def overlap(f1: BasisFunction, f2: BasisFunction) -> float:
    return _contracted(f1, f2, overlap_primitive)


def kinetic_primitive(f1, f2, a, b) -> float:
    """Kinetic energy via angular-momentum shifts of the ket."""
    l2 = f2.powers

    def shifted(d, delta):
        powers = list(l2)
        powers[d] += delta
        if powers[d] < 0:
            return 0.0
        g = BasisFunction(f2.center, tuple(powers), (), f2.atom_index)
        return overlap_primitive(f1, g, a, b)

    term = b * (2 * sum(l2) + 3) * overlap_primitive(f1, f2, a, b)
    term -= 2.0 * b * b * sum(shifted(d, 2) for d in range(3))
    term -= 0.5 * sum(l2[d] * (l2[d] - 1) * shifted(d, -2) for d in range(3))
    return term


def kinetic(f1: BasisFunction, f2: BasisFunction) -> float:
    return _contracted(f1, f2, kinetic_primitive)


def nuclear_attraction(f1: BasisFunction, f2: BasisFunction,
                       atoms: list[tuple[str, tuple[float, float, float]]]) -> float:
    total = 0.0
    tmax = tuple(f1.powers[d] + f2.powers[d] for d in range(3))
    for p1 in f1.primitives:
        for p2 in f2.primitives:
            a, b = p1.exponent, p2.exponent
            p, P, es = _pair_data(f1, f2, a, b)
            pref = 2.0 * math.pi / p * p1.coefficient * p2.coefficient
            for element, center in atoms:
                r = hermite_integrals(tmax, p, P - np.asarray(center))
                acc = 0.0
                for t in range(f1.powers[0] + f2.powers[0] + 1):
                    for u in range(f1.powers[1] + f2.powers[1] + 1):
                        for v in range(f1.powers[2] + f2.powers[2] + 1):
                            acc += (
                                es[0][f1.powers[0], f2.powers[0], t]
                                * es[1][f1.powers[1], f2.powers[1], u]
                                * es[2][f1.powers[2], f2.powers[2], v]
                                * r[t, u, v]
                            )
                total -= CHARGE[element] * pref * acc
    return total


def dipole_z(f1: BasisFunction, f2: BasisFunction) -> float:
    """<f1| z |f2> about the origin."""

    def primitive(f1, f2, a, b):
        p, _, es = _pair_data(f1, f2, a, b)
        sx = es[0][f1.powers[0], f2.powers[0], 0]
        sy = es[1][f1.powers[1], f2.powers[1], 0]
        raised = BasisFunction(
            f2.center, (f2.powers[0], f2.powers[1], f2.powers[2] + 1), (),
            f2.atom_index,
        )
        ez = hermite_coefficients(f1.powers[2], f2.powers[2] + 1, a, b,
                                  f1.center[2] - f2.center[2])
        sz_raised = ez[f1.powers[2], f2.powers[2] + 1, 0]
        sz_plain = es[2][f1.powers[2], f2.powers[2], 0]
        one_d = sz_raised + f2.center[2] * sz_plain
        return sx * sy * one_d * (math.pi / p) ** 1.5

    return _contracted(f1, f2, primitive)


def electron_repulsion(f1, f2, f3, f4) -> float:
    """(f1 f2 | f3 f4) in chemists' notation."""
    l12 = tuple(f1.powers[d] + f2.powers[d] for d in range(3))
    l34 = tuple(f3.powers[d] + f4.powers[d] for d in range(3))
    tmax = tuple(l12[d] + l34[d] for d in range(3))
    total = 0.0
    for p1 in f1.primitives:
        for p2 in f2.primitives:
            a, b = p1.exponent, p2.exponent
            p, P, es1 = _pair_data(f1, f2, a, b)
            for p3 in f3.primitives:
                for p4 in f4.primitives:
                    c, d = p3.exponent, p4.exponent
                    q, Q, es2 = _pair_data(f3, f4, c, d)
                    alpha = p * q / (p + q)
                    pref = (
                        2.0 * math.pi**2.5
                        / (p * q * math.sqrt(p + q))
                        * p1.coefficient * p2.coefficient
                        * p3.coefficient * p4.coefficient
                    )
                    r = hermite_integrals(tmax, alpha, P - Q)
                    acc = 0.0
                    for t in range(l12[0] + 1):
                        for u in range(l12[1] + 1):
                            for v in range(l12[2] + 1):
                                e1 = (
                                    es1[0][f1.powers[0], f2.powers[0], t]
                                    * es1[1][f1.powers[1], f2.powers[1], u]
                                    * es1[2][f1.powers[2], f2.powers[2], v]
                                )
                                if e1 == 0.0:
                                    continue
                                for tt in range(l34[0] + 1):
                                    for uu in range(l34[1] + 1):
                                        for vv in range(l34[2] + 1):
                                            e2 = (
                                                es2[0][f3.powers[0], f4.powers[0], tt]
                                                * es2[1][f3.powers[1], f4.powers[1], uu]
                                                * es2[2][f3.powers[2], f4.powers[2], vv]
                                            )
                                            if e2 == 0.0:
                                                continue
                                            sign = (-1.0) ** (tt + uu + vv)
                                            acc += e1 * e2 * sign * r[t + tt, u + uu, v + vv]
                    total += pref * acc
    return total


def ao_integrals(basis: list[BasisFunction],
                 atoms: list[tuple[str, tuple[float, float, float]]]):
    """All AO matrices/tensors: S, T, V, z-dipole, and the full ERI tensor."""
    n = len(basis)
    s = np.zeros((n, n))
    t = np.zeros((n, n))
    v = np.zeros((n, n))
    dz = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1):
            s[i, j] = s[j, i] = overlap(basis[i], basis[j])
            t[i, j] = t[j, i] = kinetic(basis[i], basis[j])
            v[i, j] = v[j, i] = nuclear_attraction(basis[i], basis[j], atoms)
            dz[i, j] = dz[j, i] = dipole_z(basis[i], basis[j])
    eri = np.zeros((n, n, n, n))
    for i in range(n):
        for j in range(i + 1):
            ij = i * (i + 1) // 2 + j
            for k in range(n):
                for l in range(k + 1):
                    kl = k * (k + 1) // 2 + l
                    if ij < kl:
                        continue
                    value = electron_repulsion(basis[i], basis[j], basis[k], basis[l])
                    for a, b in ((i, j), (j, i)):
                        for c, d in ((k, l), (l, k)):
                            eri[a, b, c, d] = value
                            eri[c, d, a, b] = value
    return s, t, v, dz, eri
