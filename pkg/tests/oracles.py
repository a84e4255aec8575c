"""Independent high-precision oracle for every closed-form quantity.

Each function re-derives its formula from scratch with 50-digit mpmath
arithmetic; the implementation under test never feeds these (only the
same published formulas do), so agreement to 1e-9 relative error is a
genuine two-route check.
"""

import mpmath as mp

mp.mp.dps = 50


def ncb_nonprivate(mu_hat, n, T):
    mu, n, T = mp.mpf(mu_hat), mp.mpf(n), mp.mpf(T)
    return mu + 4 * mp.sqrt(mu * mp.log(T) / n)


def ncb_gdp(mu, n, T, eps, c, alpha):
    mu, n, T, eps, c, alpha = map(mp.mpf, (mu, n, T, eps, c, alpha))
    lt = mp.log(T)
    return (
        mu
        + 2 * c * mp.sqrt(2 * mu * lt / n)
        + alpha * lt**2 / (eps * n)
        + 4 * mp.sqrt(2 * alpha / eps) * lt ** mp.mpf("1.5") / n
    )


def ncb_ldp(mu, n, T, eps, c, alpha):
    mu, n, T, eps, c, alpha = map(mp.mpf, (mu, n, T, eps, c, alpha))
    lt = mp.log(T)
    return (
        mu
        + 2 * c * mp.sqrt(2 * mu * lt / n)
        + mp.sqrt(8 * alpha * lt / n) / eps
        + 4 * c * (2 * alpha) ** mp.mpf("0.25") * lt ** mp.mpf("0.75") / (mp.sqrt(eps) * n ** mp.mpf("0.75"))
    )


def phase1_threshold_gdp(T, eps, c):
    T, eps, c = map(mp.mpf, (T, eps, c))
    lt = mp.log(T)
    return 1600 * (c**2 * lt + lt**2 / eps)


def ldp_stop_sides(n, mu, T, eps, c, alpha):
    """(lhs, rhs) of the local stopping test; rhs is None when unguarded."""
    n, mu, T, eps, c, alpha = map(mp.mpf, (n, mu, T, eps, c, alpha))
    lt = mp.log(T)
    lhs = n * mu
    g = mp.sqrt(8 * n * alpha * lt) / eps
    if lhs - g <= 0:
        return lhs, None
    rhs = g + 1600 * (c**2 * lt + n * lt**2 / ((lhs - g) * eps**2))
    return lhs, rhs


def gdp_release_scale(T, eps, n):
    return mp.log(mp.mpf(T)) / (mp.mpf(eps) * mp.mpf(n))


def exploration_budget_S(mu_star, T, eps, model, c=3):
    mu, T, eps, c = map(mp.mpf, (mu_star, T, eps, c))
    lt = mp.log(T)
    base = c**2 * lt / mu
    if model == "global":
        return base + lt**2 / (mu * eps)
    return base + (lt / (mu * eps)) ** 2


def laplace_quantile(b, u):
    b, u = mp.mpf(b), mp.mpf(u)
    d = u - mp.mpf("0.5")
    return -b * mp.sign(d) * mp.log(1 - 2 * abs(d)) if d != 0 else mp.mpf(0)


def rel_err(value, oracle):
    value, oracle = mp.mpf(value), mp.mpf(oracle)
    if oracle == 0:
        return abs(value)
    return abs(value - oracle) / abs(oracle)
