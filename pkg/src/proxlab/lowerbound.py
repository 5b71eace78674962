"""Threshold degree via linear programming, the sign-polynomial query
sampler, and the forrelation correlation quantity.

The LP searches, for increasing degree d, for coefficients alpha_S with
f(x) * sum_S alpha_S * prod_{i in S} x_i >= 1 on every domain point (the
normalised form of strict sign representation).  Feasible solutions are
re-verified in exact rational arithmetic; infeasibility at d-1 can be
certified by an explicit distribution with zero correlation against all
monomials of degree < d, checked exactly.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog

from .amplify import ConfigurationError


@dataclass
class PartialBooleanFunction:
    """f: X -> {1,-1} on an explicit domain X subset of {1,-1}^n."""

    points: np.ndarray  # |X| x n entries in {1,-1}
    values: np.ndarray  # |X| entries in {1,-1}

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.int64)
        vals = np.asarray(self.values, dtype=np.int64)
        if pts.ndim != 2 or not np.isin(pts, (1, -1)).all():
            raise ConfigurationError("domain points must be +-1 vectors")
        if not np.isin(vals, (1, -1)).all() or len(vals) != len(pts):
            raise ConfigurationError("values must be +-1, one per point")
        if len({tuple(p) for p in pts}) != len(pts):
            raise ConfigurationError("domain points must be distinct")
        self.points = pts
        self.values = vals

    @property
    def n(self):
        return self.points.shape[1]

    @classmethod
    def total(cls, n, fn):
        pts = np.array(list(itertools.product((1, -1), repeat=n)), dtype=np.int64)
        vals = np.array([fn(p) for p in pts], dtype=np.int64)
        return cls(points=pts, values=vals)


def parity_function(n):
    return PartialBooleanFunction.total(n, lambda p: int(np.prod(p)))


def from_bit_sets(member_bits, far_bits):
    """Partial function -1 on the property rows, +1 on the far rows
    (rows are 0/1 vectors; bit b maps to the sign (-1)^b)."""
    member = 1 - 2 * np.asarray(member_bits, dtype=np.int64)
    far = 1 - 2 * np.asarray(far_bits, dtype=np.int64)
    pts = np.vstack((member, far))
    vals = np.array([-1] * len(member) + [1] * len(far), dtype=np.int64)
    return PartialBooleanFunction(points=pts, values=vals)


def monomials_up_to(n, degree):
    out = []
    for d in range(degree + 1):
        out.extend(itertools.combinations(range(n), d))
    return out


def _design_matrix(points, monos):
    cols = []
    for s in monos:
        if not s:
            cols.append(np.ones(len(points), dtype=np.int64))
        else:
            cols.append(np.prod(points[:, s], axis=1))
    return np.stack(cols, axis=1)


@dataclass
class SignPolynomial:
    """Sparse real polynomial over +-1 variables sign-representing f."""

    n: int
    degree: int
    coeffs: dict  # tuple(sorted indices) -> float

    def evaluate(self, x):
        x = np.asarray(x)
        total = 0.0
        for s, a in self.coeffs.items():
            total += a * (np.prod(x[list(s)]) if s else 1.0)
        return total

    def evaluate_exact(self, x):
        x = np.asarray(x)
        total = Fraction(0)
        for s, a in self.coeffs.items():
            mono = int(np.prod(x[list(s)])) if s else 1
            total += Fraction(a) * mono
        return total


def sign_represents(poly, f):
    """Exact rational check that sgn(P(x)) == f(x) on every domain point."""
    for x, v in zip(f.points, f.values):
        val = poly.evaluate_exact(x)
        if val == 0 or (val > 0) != (v > 0):
            return False
    return True


def _feasible_at_degree(f, degree):
    monos = monomials_up_to(f.n, degree)
    m = _design_matrix(f.points, monos)
    # constraints: f(x) * P(x) >= 1  <=>  -(f(x) * row) @ alpha <= -1
    a_ub = -(f.values[:, None] * m).astype(float)
    b_ub = -np.ones(len(f.points))
    res = linprog(c=np.zeros(len(monos)), A_ub=a_ub, b_ub=b_ub,
                  bounds=[(None, None)] * len(monos), method="highs")
    if res.status == 0:
        coeffs = {s: float(a) for s, a in zip(monos, res.x) if a != 0.0}
        if not coeffs:
            coeffs = {(): 0.0}
        return SignPolynomial(n=f.n, degree=degree, coeffs=coeffs)
    if res.status == 2:
        return None
    raise RuntimeError(f"LP solver failed at degree {degree}: {res.message}")


def threshold_degree(f, max_degree=None):
    """Smallest degree whose sign-representation LP is feasible, with an
    exactly re-verified witness polynomial."""
    if f.n > 14:
        raise ConfigurationError("monomial basis capped at n <= 14")
    top = f.n if max_degree is None else max_degree
    for d in range(top + 1):
        poly = _feasible_at_degree(f, d)
        if poly is None:
            continue
        if not sign_represents(poly, f):
            raise RuntimeError(f"LP witness at degree {d} failed the exact sign check")
        return d, poly
    raise RuntimeError("no sign representation up to the degree cap; "
                       "total functions are always representable at d = n")


def verify_zero_correlation(f, weights, degree):
    """Exact check that a rational distribution on the domain has zero
    correlation with f against every monomial of degree <= `degree`.
    Such a witness certifies thrdeg(f) > degree."""
    w = [Fraction(x) for x in weights]
    if any(x < 0 for x in w) or sum(w) != 1:
        raise ConfigurationError("weights must form a distribution")
    for s in monomials_up_to(f.n, degree):
        total = Fraction(0)
        for wt, x, v in zip(w, f.points, f.values):
            mono = int(np.prod(x[list(s)])) if s else 1
            total += wt * v * mono
        if total != 0:
            return False
    return True


def uniform_weights(f):
    return [Fraction(1, len(f.points))] * len(f.points)


@dataclass
class UPPSampler:
    """Randomised query algorithm drawn from a sign polynomial: query the
    monomial S with probability |alpha_S| / sum |alpha_T| and output
    sgn(alpha_S) * prod_{i in S} x_i."""

    poly: SignPolynomial

    def __post_init__(self):
        items = [(s, a) for s, a in self.poly.coeffs.items() if a != 0.0]
        if not items:
            raise ConfigurationError("zero polynomial cannot drive a sampler")
        self.monomials = [s for s, _ in items]
        self.signs = np.array([1 if a > 0 else -1 for _, a in items])
        weights = np.array([abs(a) for _, a in items])
        self.probabilities = weights / weights.sum()

    @property
    def max_queries(self):
        return max(len(s) for s in self.monomials)

    def sample(self, x, rng):
        """One draw; returns (output, queries made)."""
        idx = int(rng.choice(len(self.monomials), p=self.probabilities))
        s = self.monomials[idx]
        x = np.asarray(x)
        val = int(np.prod(x[list(s)])) if s else 1
        return int(self.signs[idx]) * val, len(s)

    def exact_bias(self, x):
        """E[output] on input x, exactly (rational)."""
        total = Fraction(0)
        norm = Fraction(0)
        for s, a in self.poly.coeffs.items():
            fa = Fraction(a)
            norm += abs(fa)
            mono = int(np.prod(np.asarray(x)[list(s)])) if s else 1
            total += fa * mono
        return total / norm


def upp_sampler(poly, f=None):
    """Build the sampler; when f is supplied, verify the strict-bias
    contract sgn(E[output]) == f(x) exactly on every domain point."""
    sampler = UPPSampler(poly=poly)
    if f is not None:
        for x, v in zip(f.points, f.values):
            bias = sampler.exact_bias(x)
            if bias == 0 or (bias > 0) != (v > 0):
                raise RuntimeError("sampler bias sign disagrees with f")
    return sampler


# ---------------------------------------------------------------------------
# forrelation


def walsh_hadamard(vec):
    """Unnormalised Walsh-Hadamard transform, in place on a copy."""
    v = np.asarray(vec, dtype=np.float64).copy()
    n = len(v)
    if n & (n - 1):
        raise ConfigurationError("transform length must be a power of two")
    h = 1
    while h < n:
        for start in range(0, n, 2 * h):
            a = v[start:start + h].copy()
            b = v[start + h:start + 2 * h].copy()
            v[start:start + h] = a + b
            v[start + h:start + 2 * h] = a - b
        h *= 2
    return v


def forrelation_phi(f, g):
    """(n/2)^(-3/2) * sum_{x,y} f(x) (-1)^(x.y) g(y) via the fast transform."""
    f = np.asarray(f, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    if len(f) != len(g):
        raise ConfigurationError("tables must have equal length")
    n = len(f)
    if n & (n - 1) or n == 0:
        raise ConfigurationError("table length must be a power of two")
    return float(f @ walsh_hadamard(g)) / n ** 1.5


def forrelation_phi_direct(f, g):
    """Reference double loop over (x, y) with explicit bit inner products."""
    f = np.asarray(f, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    n = len(f)
    if n & (n - 1) or n == 0:
        raise ConfigurationError("table length must be a power of two")
    total = 0.0
    for x in range(n):
        for y in range(n):
            total += f[x] * (-1) ** bin(x & y).count("1") * g[y]
    return total / n ** 1.5


# ---------------------------------------------------------------------------
# truth-table text files


def load_truth_table(path, mask_path=None):
    """One +-1 value per line in lexicographic order of {0,1}^n; optional
    mask file (one 0/1 per line) restricts the domain."""
    with open(path) as fh:
        vals = [int(line) for line in fh if line.strip()]
    size = len(vals)
    n = size.bit_length() - 1
    if 2 ** n != size:
        raise ConfigurationError(f"table length {size} is not a power of two")
    if any(v not in (1, -1) for v in vals):
        raise ConfigurationError("table entries must be +1 or -1")
    mask = [1] * size
    if mask_path is not None:
        with open(mask_path) as fh:
            mask = [int(line) for line in fh if line.strip()]
        if len(mask) != size:
            raise ConfigurationError("mask length must match the table")
    pts = []
    out = []
    for i in range(size):
        if mask[i]:
            bits = [(i >> (n - 1 - b)) & 1 for b in range(n)]
            pts.append([1 - 2 * b for b in bits])
            out.append(vals[i])
    return PartialBooleanFunction(points=np.array(pts, dtype=np.int64),
                                  values=np.array(out, dtype=np.int64))
