"""Step-wise classical optimizers for the variational loop.

Each optimizer is driven one iteration at a time: ``start(f, x0)`` returns
the first iterate, and each ``step()`` advances to the next iterate,
returning ``(x, f(x))``. ``converged`` reports optimizer-native termination.
"""
from __future__ import annotations

import numpy as np


class NelderMead:
    """Downhill simplex with adaptive coefficients for higher dimension."""

    def __init__(self, initial_step: float = 0.1, xatol: float = 1e-8, fatol: float = 1e-12, adaptive: bool = True):
        self.initial_step = initial_step
        self.xatol = xatol
        self.fatol = fatol
        self.adaptive = adaptive

    def start(self, f, x0):
        self.f = f
        x0 = np.asarray(x0, dtype=float)
        n = len(x0)
        if self.adaptive and n > 1:
            self.alpha, self.gamma = 1.0, 1.0 + 2.0 / n
            self.rho, self.sigma = 0.75 - 1.0 / (2.0 * n), 1.0 - 1.0 / n
        else:
            self.alpha, self.gamma, self.rho, self.sigma = 1.0, 2.0, 0.5, 0.5
        sim = [x0]
        for i in range(n):
            v = x0.copy()
            v[i] += self.initial_step
            sim.append(v)
        self.sim = np.array(sim)
        self.fs = np.array([f(v) for v in self.sim])
        self._sort()
        return self.sim[0].copy(), float(self.fs[0])

    def _sort(self):
        order = np.argsort(self.fs, kind="stable")
        self.sim, self.fs = self.sim[order], self.fs[order]

    def step(self):
        f = self.f
        sim, fs = self.sim, self.fs
        centroid = sim[:-1].mean(axis=0)
        xr = centroid + self.alpha * (centroid - sim[-1])
        fr = f(xr)
        if fr < fs[0]:
            xe = centroid + self.gamma * (xr - centroid)
            fe = f(xe)
            sim[-1], fs[-1] = (xe, fe) if fe < fr else (xr, fr)
        elif fr < fs[-2]:
            sim[-1], fs[-1] = xr, fr
        else:
            if fr < fs[-1]:
                xc = centroid + self.rho * (xr - centroid)
                fc = f(xc)
                accept = fc <= fr
            else:
                xc = centroid + self.rho * (sim[-1] - centroid)
                fc = f(xc)
                accept = fc < fs[-1]
            if accept:
                sim[-1], fs[-1] = xc, fc
            else:
                for i in range(1, len(sim)):
                    sim[i] = sim[0] + self.sigma * (sim[i] - sim[0])
                    fs[i] = f(sim[i])
        self._sort()
        return self.sim[0].copy(), float(self.fs[0])

    @property
    def converged(self) -> bool:
        size = np.max(np.abs(self.sim[1:] - self.sim[0]))
        spread = np.max(np.abs(self.fs[1:] - self.fs[0]))
        return size <= self.xatol and spread <= self.fatol


def central_gradient(f, x, h: float = 1e-5):
    g = np.zeros_like(x)
    for i in range(len(x)):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (f(x + e) - f(x - e)) / (2.0 * h)
    return g


class GradientDescent:
    """Fixed-rate descent on central finite-difference gradients."""

    def __init__(self, learning_rate: float = 0.2, fd_step: float = 1e-5, gtol: float = 1e-9):
        self.learning_rate = learning_rate
        self.fd_step = fd_step
        self.gtol = gtol

    def start(self, f, x0):
        self.f = f
        self.x = np.asarray(x0, dtype=float).copy()
        self.fx = f(self.x)
        self.gnorm = np.inf
        return self.x.copy(), float(self.fx)

    def step(self):
        g = central_gradient(self.f, self.x, self.fd_step)
        self.gnorm = float(np.linalg.norm(g))
        self.x = self.x - self.learning_rate * g
        self.fx = self.f(self.x)
        return self.x.copy(), float(self.fx)

    @property
    def converged(self) -> bool:
        return self.gnorm < self.gtol


class SPSA:
    """Simultaneous perturbation stochastic approximation.

    Gains ``a_k = a / (k + 1 + A)^alpha`` and ``c_k = c / (k + 1)^gamma`` with
    the usual exponents 0.602 and 0.101.
    """

    def __init__(self, a: float = 1.0, c: float = 0.1, A: float = 10.0, alpha: float = 0.602,
                 gamma: float = 0.101, rng=None):
        self.a, self.c, self.A = a, c, A
        self.alpha, self.gamma = alpha, gamma
        self.rng = rng if rng is not None else np.random.default_rng(0)

    def start(self, f, x0):
        self.f = f
        self.k = 0
        self.x = np.asarray(x0, dtype=float).copy()
        return self.x.copy(), float(f(self.x))

    def step(self):
        ak = self.a / (self.k + 1 + self.A) ** self.alpha
        ck = self.c / (self.k + 1) ** self.gamma
        delta = self.rng.choice([-1.0, 1.0], size=self.x.shape)
        diff = self.f(self.x + ck * delta) - self.f(self.x - ck * delta)
        self.x = self.x - ak * diff / (2.0 * ck) * delta
        self.k += 1
        return self.x.copy(), float(self.f(self.x))

    @property
    def converged(self) -> bool:
        return False


def make_optimizer(name: str, seed=None, **opts):
    name = name.lower()
    if name in ("nelder-mead", "nm"):
        return NelderMead(**opts)
    if name in ("gradient", "gd", "finite-diff-gradient-descent"):
        return GradientDescent(**opts)
    if name == "spsa":
        return SPSA(rng=np.random.default_rng(seed), **opts)
    raise ValueError(f"unknown optimizer {name!r}")
