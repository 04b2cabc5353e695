"""Exact sampling from the Polya-Gamma PG(1, z) distribution.

Used to augment Bernoulli-logit likelihoods: with omega_i ~ PG(1, f_i) the
conditional for f is Gaussian, so both the linear and the tree-ensemble
samplers get conjugate updates whose stationary distribution is the exact
logistic posterior (no approximation step).

The sampler follows the alternating-series accept/reject construction on the
Jacobi-theta representation: proposals come from a truncated exponential on
(t, inf) or a truncated inverse-Gaussian on (0, t] with t = 0.64, and the
target density is squeezed between partial sums of a_n coefficients. Accepted
values are divided by four to land on the PG(1, z) scale.
"""

from __future__ import annotations

import math

import numpy as np

_TRUNC = 0.64
_LOG_HALF = math.log(0.5)
_SQRT_2PI = math.sqrt(2.0 * math.pi)


def pg_mean(z: float) -> float:
    """E[PG(1, z)] = tanh(z/2) / (2z), continuous at z = 0 with value 1/4."""
    z = abs(z)
    if z < 1e-8:
        return 0.25 - z * z / 48.0
    return math.tanh(z / 2.0) / (2.0 * z)


def pg_variance(z: float) -> float:
    """Var[PG(1, z)]; equals 1/24 at z = 0."""
    z = abs(z)
    if z < 1e-4:
        return 1.0 / 24.0 - z * z / 60.0 * 0.5
    sech_half = 1.0 / math.cosh(z / 2.0)
    return (math.sinh(z) - z) * sech_half * sech_half / (4.0 * z ** 3)


def _log_norm_cdf(x: float) -> float:
    if x > -37.0:
        return _LOG_HALF + math.log(math.erfc(-x / math.sqrt(2.0)))
    # asymptotic tail; erfc underflows below this point
    return -0.5 * x * x - math.log(-x) - math.log(_SQRT_2PI)


def _exp_tail_probability(z: float) -> float:
    """P(proposal comes from the exponential branch), computed on log scale."""
    t = _TRUNC
    fz = 0.125 * math.pi * math.pi + 0.5 * z * z
    b = (t * z - 1.0) / math.sqrt(t)
    a = -(t * z + 1.0) / math.sqrt(t)
    x0 = math.log(fz) + fz * t
    xb = x0 - z + _log_norm_cdf(b)
    xa = x0 + z + _log_norm_cdf(a)
    log_qdivp = math.log(4.0 / math.pi) + np.logaddexp(xb, xa)
    # 1 / (1 + exp(L)) without overflow
    if log_qdivp > 0:
        return math.exp(-log_qdivp) / (1.0 + math.exp(-log_qdivp))
    return 1.0 / (1.0 + math.exp(log_qdivp))


def _coef(n: int, x: float) -> float:
    """Alternating-series coefficient a_n(x), left form below t, right above."""
    k = (n + 0.5) * math.pi
    if x > _TRUNC:
        return k * math.exp(-0.5 * k * k * x)
    if x > 0:
        expnt = (-1.5 * (math.log(0.5 * math.pi) + math.log(x)) + math.log(k)
                 - 2.0 * (n + 0.5) * (n + 0.5) / x)
        return math.exp(expnt)
    return 0.0


def _truncated_inverse_gaussian(rng: np.random.Generator, z: float) -> float:
    """IG(mu = 1/z, lambda = 1) restricted to (0, t]."""
    t = _TRUNC
    if z < 1.0 / t:
        # mean beyond the window: rejection from the chi-square tail
        while True:
            while True:
                e1 = rng.exponential()
                e2 = rng.exponential()
                if e1 * e1 <= 2.0 * e2 / t:
                    break
            x = t / ((1.0 + e1 * t) ** 2)
            if rng.random() <= math.exp(-0.5 * z * z * x):
                return x
    mu = 1.0 / z
    while True:
        y = rng.standard_normal() ** 2
        x = mu + 0.5 * mu * mu * y - 0.5 * mu * math.sqrt(4.0 * mu * y + (mu * y) ** 2)
        if rng.random() > mu / (mu + x):
            x = mu * mu / x
        if x <= t:
            return x


def draw_pg1(rng: np.random.Generator, z: float) -> float:
    """One exact draw from PG(1, z)."""
    half_z = abs(z) * 0.5
    fz = 0.125 * math.pi * math.pi + 0.5 * half_z * half_z
    p_exp = _exp_tail_probability(half_z)
    while True:
        if rng.random() < p_exp:
            x = _TRUNC + rng.exponential() / fz
        else:
            x = _truncated_inverse_gaussian(rng, half_z)
        s = _coef(0, x)
        y = rng.random() * s
        n = 0
        while True:
            n += 1
            if n % 2 == 1:
                s -= _coef(n, x)
                if y <= s:
                    return 0.25 * x
            else:
                s += _coef(n, x)
                if y > s:
                    break


def draw_pg1_vector(rng: np.random.Generator, z: np.ndarray) -> np.ndarray:
    """Independent PG(1, z_i) draws for a vector of tilts."""
    flat = np.asarray(z, dtype=float).ravel()
    out = np.empty(flat.shape[0])
    for i in range(flat.shape[0]):
        out[i] = draw_pg1(rng, flat[i])
    return out.reshape(np.shape(z))
