# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled simulation kernel.

Bit-for-bit mirror of the pure-Python driver for the fixed-horizon
policies (gdp_ncb / ncb, ldp_ncb, adap_ucb, ldp_ucb, ucb1): identical
draw order against the same PCG64 stream and identical floating-point
expression structure, so both backends return equal traces.  The anytime
wrapper stays in Python (cold path).
"""

import numpy as np

cimport numpy as cnp
from cpython.pycapsule cimport PyCapsule_GetPointer, PyCapsule_IsValid
from libc.math cimport INFINITY, copysign, fabs, isfinite, log, pow, sqrt
from numpy.random cimport bitgen_t
from numpy.random.c_distributions cimport random_standard_uniform
from scipy.special.cython_special cimport betaincinv

cnp.import_array()

ctypedef cnp.int64_t i64

cdef double MIN_UNIFORM = 2.0 ** -53
cdef double TINY_MEAN = 1e-300

KERNEL_POLICIES = ("gdp_ncb", "ncb", "ldp_ncb", "adap_ucb", "ldp_ucb", "ucb1")

cdef int CODE_GDP = 0
cdef int CODE_LDP = 1
cdef int CODE_ADAP = 2
cdef int CODE_LDP_UCB = 3
cdef int CODE_UCB1 = 4

cdef int WARM_START_PULLS = 4  # keep equal to policies.WARM_START_PULLS


# -- draws -------------------------------------------------------------------

cdef inline double _uniform(bitgen_t *rng) noexcept nogil:
    return random_standard_uniform(rng)


cdef inline double _uniform_open(bitgen_t *rng) noexcept nogil:
    cdef double u = random_standard_uniform(rng)
    return u if u > 0.0 else MIN_UNIFORM


cdef inline int _uniform_arm(bitgen_t *rng, int k) noexcept nogil:
    cdef int i = <int> (random_standard_uniform(rng) * k)
    return i if i < k else k - 1


cdef inline double _lap(bitgen_t *rng, double b) noexcept nogil:
    cdef double u = _uniform_open(rng)
    cdef double d = u - 0.5
    return -b * copysign(1.0, d) * log(1.0 - 2.0 * fabs(d))


cdef inline double _reward(bitgen_t *rng, int kind, double pa, double pb, double pc) noexcept nogil:
    cdef double u = random_standard_uniform(rng)
    if kind == 0:  # bernoulli
        return 1.0 if (pa >= TINY_MEAN and u < pa) else 0.0
    elif kind == 3:  # uniform01
        return u
    elif kind == 2:  # two_point(lo, hi, p)
        return pb if u < pc else pa
    elif kind == 4:  # constant
        return pa
    else:  # beta(a, b): exact inverse CDF
        return betaincinv(pa, pb, u if u > 0.0 else MIN_UNIFORM)


cdef inline double _clip01(double v) noexcept nogil:
    if v < 0.0:
        return 0.0
    if v > 1.0:
        return 1.0
    return v


# -- indices (expression-identical to dpncb.indices) --------------------------

cdef inline double _ncb_gdp(double mu, double n, double log_t, double eps,
                            double c, double alpha) noexcept nogil:
    return (mu
            + 2.0 * c * sqrt(2.0 * mu * log_t / n)
            + alpha * log_t * log_t / (eps * n)
            + 4.0 * sqrt(2.0 * alpha / eps) * pow(log_t, 1.5) / n)


cdef inline double _ncb_ldp(double mu, double n, double log_t, double eps,
                            double c, double alpha) noexcept nogil:
    return (mu
            + 2.0 * c * sqrt(2.0 * mu * log_t / n)
            + sqrt(8.0 * alpha * log_t / n) / eps
            + 4.0 * c * pow(2.0 * alpha, 0.25) * pow(log_t, 0.75) / (sqrt(eps) * pow(n, 0.75)))


cdef inline bint _crossed_ldp(double n, double mu, double log_t, double eps,
                              double c, double alpha) noexcept nogil:
    cdef double lhs = n * mu
    cdef double g = sqrt(8.0 * n * alpha * log_t) / eps
    cdef double rhs
    if lhs - g <= 0.0:
        return 0
    rhs = g + 1600.0 * (c * c * log_t + n * log_t * log_t / ((lhs - g) * eps * eps))
    return lhs >= rhs


# -- policy loops --------------------------------------------------------------

cdef i64 _run_gdp(bitgen_t *rng, int k, i64 T, double eps, double c, double alpha,
                  int[:] kinds, double[:] pa, double[:] pb, double[:] pc,
                  i64[:] N1, double[:] mu_hat, double[:] mu_tilde,
                  i64[:] n_rel, i64[:] N2,
                  i64[:] arms, double[:] rewards) noexcept nogil:
    cdef double log_t = log(<double> T)
    cdef double threshold = 1600.0 * (c * c * log_t + log_t * log_t / eps)
    cdef bint private = isfinite(eps)
    cdef int phase = 1
    cdef i64 t = 1, tau = T
    cdef bint ep_active = 0
    cdef int ep_arm = 0
    cdef i64 ep_target = 0, ep_pulls = 0, n_a = 0
    cdef double ep_mean = 0.0, x, v, best, dn, rel
    cdef int a, i
    cdef i64 r
    for r in range(T):
        # select
        if phase == 1:
            a = _uniform_arm(rng, k)
        elif ep_active:
            a = ep_arm
        else:
            best = -INFINITY
            a = 0
            for i in range(k):
                if n_rel[i] == 0:
                    v = INFINITY
                else:
                    v = _ncb_gdp(mu_tilde[i], <double> n_rel[i], log_t, eps, c, alpha)
                if v > best:
                    best = v
                    a = i
            ep_arm = a
            ep_target = 2 * N2[a]
            ep_pulls = 0
            ep_mean = mu_hat[a]
            N2[a] = 0
            ep_active = 1
        # environment reward
        x = _reward(rng, kinds[a], pa[a], pb[a], pc[a])
        arms[r] = a
        rewards[r] = x
        # observe
        if phase == 1:
            N1[a] += 1
            dn = <double> N1[a]
            mu_hat[a] = mu_hat[a] * ((dn - 1.0) / dn) + x / dn
            if private:
                mu_tilde[a] = mu_hat[a] + _lap(rng, log_t / (eps * dn))
            else:
                mu_tilde[a] = mu_hat[a]
            t += 1
            if N1[a] * mu_tilde[a] >= threshold or t > T:
                phase = 2
                tau = t - 1
                for i in range(k):
                    mu_tilde[i] = _clip01(mu_tilde[i])
                    n_rel[i] = N1[i]
                    N2[i] = 1
                ep_active = 0
        else:
            N2[a] += 1
            n_a = N1[a] + N2[a]
            dn = <double> n_a
            ep_mean = ep_mean * ((dn - 1.0) / dn) + x / dn
            ep_pulls += 1
            t += 1
            if ep_pulls == ep_target:
                if private:
                    rel = ep_mean + _lap(rng, log_t / (eps * dn))
                else:
                    rel = ep_mean
                mu_tilde[a] = _clip01(rel)
                n_rel[a] = n_a
                ep_active = 0
    return tau


cdef i64 _run_ldp(bitgen_t *rng, int k, i64 T, double eps, double c, double alpha,
                  int[:] kinds, double[:] pa, double[:] pb, double[:] pc,
                  i64[:] N, double[:] mu_tilde,
                  i64[:] arms, double[:] rewards) noexcept nogil:
    cdef double log_t = log(<double> T)
    cdef bint add_noise = isfinite(eps)
    cdef double b = 1.0 / eps if add_noise else 0.0
    cdef int phase = 1
    cdef i64 t = 1, tau = T
    cdef double x, obs, v, best, dn
    cdef int a, i
    cdef i64 r
    for r in range(T):
        if phase == 1:
            a = _uniform_arm(rng, k)
        else:
            best = -INFINITY
            a = 0
            for i in range(k):
                if N[i] == 0:
                    v = INFINITY
                else:
                    v = _ncb_ldp(mu_tilde[i], <double> N[i], log_t, eps, c, alpha)
                if v > best:
                    best = v
                    a = i
        x = _reward(rng, kinds[a], pa[a], pb[a], pc[a])
        arms[r] = a
        rewards[r] = x
        obs = x + _lap(rng, b) if add_noise else x
        N[a] += 1
        dn = <double> N[a]
        mu_tilde[a] = mu_tilde[a] * ((dn - 1.0) / dn) + obs / dn
        if phase == 2:
            mu_tilde[a] = _clip01(mu_tilde[a])
        t += 1
        if phase == 1:
            if _crossed_ldp(dn, mu_tilde[a], log_t, eps, c, alpha) or t > T:
                phase = 2
                tau = t - 1
                for i in range(k):
                    mu_tilde[i] = _clip01(mu_tilde[i])
    return tau


cdef void _run_adap(bitgen_t *rng, int k, i64 T, double eps,
                    int[:] kinds, double[:] pa, double[:] pb, double[:] pc,
                    i64[:] n, double[:] mu_t,
                    i64[:] arms, double[:] rewards) noexcept nogil:
    cdef i64 warm_end = WARM_START_PULLS * k
    cdef i64 t = 1
    cdef bint ep_active = 0
    cdef int ep_arm = 0
    cdef i64 ep_target = 0, ep_pulls = 0
    cdef double ep_sum = 0.0, warm_sum = 0.0
    cdef double x, v, best, log_t, rel
    cdef int a, i
    cdef i64 r
    for r in range(T):
        if t <= warm_end:
            a = <int> ((t - 1) / WARM_START_PULLS)
        elif ep_active:
            a = ep_arm
        else:
            log_t = log(<double> t)
            best = -INFINITY
            a = 0
            for i in range(k):
                v = mu_t[i] + sqrt(log_t / <double> n[i]) + log_t / (eps * <double> n[i])
                if v > best:
                    best = v
                    a = i
            ep_arm = a
            ep_target = 2 * n[a]
            ep_pulls = 0
            ep_sum = 0.0
            ep_active = 1
        x = _reward(rng, kinds[a], pa[a], pb[a], pc[a])
        arms[r] = a
        rewards[r] = x
        if t <= warm_end:
            warm_sum += x
            if t % WARM_START_PULLS == 0:
                rel = warm_sum / WARM_START_PULLS
                if isfinite(eps):
                    rel = rel + _lap(rng, 1.0 / (eps * WARM_START_PULLS))
                mu_t[a] = rel
                n[a] = WARM_START_PULLS
                warm_sum = 0.0
            t += 1
        else:
            ep_sum += x
            ep_pulls += 1
            t += 1
            if ep_pulls == ep_target:
                rel = ep_sum / <double> ep_target
                if isfinite(eps):
                    rel = rel + _lap(rng, 1.0 / (eps * <double> ep_target))
                mu_t[a] = rel
                n[a] = ep_target
                ep_active = 0


cdef void _run_index_ucb(bitgen_t *rng, int k, i64 T, double eps, bint privatize,
                         int[:] kinds, double[:] pa, double[:] pb, double[:] pc,
                         i64[:] n, double[:] mu,
                         i64[:] arms, double[:] rewards) noexcept nogil:
    # privatize=1 -> ldp_ucb index; privatize=0 -> ucb1 index
    cdef bint add_noise = privatize and isfinite(eps)
    cdef double b = 1.0 / eps if add_noise else 0.0
    cdef i64 t = 1
    cdef double x, obs, v, best, log_t, dn
    cdef int a, i
    cdef i64 r
    for r in range(T):
        if t <= k:
            a = <int> (t - 1)
        else:
            log_t = log(<double> t)
            best = -INFINITY
            a = 0
            for i in range(k):
                if privatize:
                    v = mu[i] + (1.0 + 1.0 / eps) * sqrt(2.0 * log_t / <double> n[i])
                else:
                    v = mu[i] + sqrt(2.0 * log_t / <double> n[i])
                if v > best:
                    best = v
                    a = i
        x = _reward(rng, kinds[a], pa[a], pb[a], pc[a])
        arms[r] = a
        rewards[r] = x
        obs = x + _lap(rng, b) if add_noise else x
        n[a] += 1
        dn = <double> n[a]
        mu[a] = mu[a] * ((dn - 1.0) / dn) + obs / dn
        t += 1


# -- entry point ---------------------------------------------------------------

cdef bitgen_t *_get_bitgen(object bit_generator) except NULL:
    capsule = bit_generator.capsule
    if not PyCapsule_IsValid(capsule, "BitGenerator"):
        raise ValueError("invalid BitGenerator capsule")
    return <bitgen_t *> PyCapsule_GetPointer(capsule, "BitGenerator")


def run_policy(str name, int k, i64 T, double epsilon, double c, double alpha,
               cnp.ndarray kinds, cnp.ndarray pa, cnp.ndarray pb, cnp.ndarray pc,
               object bit_generator):
    """Simulate T rounds; returns (arms, rewards, tau)."""
    cdef cnp.ndarray arms = np.empty(T, dtype=np.int64)
    cdef cnp.ndarray rewards = np.empty(T, dtype=np.float64)
    cdef int[:] kv = kinds
    cdef double[:] pav = pa, pbv = pb, pcv = pc
    cdef i64[:] armv = arms
    cdef double[:] rewv = rewards
    cdef bitgen_t *rng = _get_bitgen(bit_generator)
    cdef i64 tau = -1
    cdef double eps = epsilon

    cdef i64[:] c1, c2, c3
    cdef double[:] d1, d2

    if name == "gdp_ncb" or name == "ncb":
        if name == "ncb":
            eps = INFINITY
        c1 = np.zeros(k, dtype=np.int64)   # N1
        c2 = np.zeros(k, dtype=np.int64)   # n_rel
        c3 = np.zeros(k, dtype=np.int64)   # N2
        d1 = np.zeros(k, dtype=np.float64)  # mu_hat
        d2 = np.zeros(k, dtype=np.float64)  # mu_tilde
        with bit_generator.lock, nogil:
            tau = _run_gdp(rng, k, T, eps, c, alpha, kv, pav, pbv, pcv,
                           c1, d1, d2, c2, c3, armv, rewv)
    elif name == "ldp_ncb":
        c1 = np.zeros(k, dtype=np.int64)
        d1 = np.zeros(k, dtype=np.float64)
        with bit_generator.lock, nogil:
            tau = _run_ldp(rng, k, T, eps, c, alpha, kv, pav, pbv, pcv,
                           c1, d1, armv, rewv)
    elif name == "adap_ucb":
        c1 = np.zeros(k, dtype=np.int64)
        d1 = np.zeros(k, dtype=np.float64)
        with bit_generator.lock, nogil:
            _run_adap(rng, k, T, eps, kv, pav, pbv, pcv, c1, d1, armv, rewv)
    elif name == "ldp_ucb" or name == "ucb1":
        c1 = np.zeros(k, dtype=np.int64)
        d1 = np.zeros(k, dtype=np.float64)
        with bit_generator.lock, nogil:
            _run_index_ucb(rng, k, T, eps, name == "ldp_ucb",
                           kv, pav, pbv, pcv, c1, d1, armv, rewv)
    else:
        raise ValueError(f"kernel does not implement policy {name!r}")
    return arms, rewards, int(tau)
