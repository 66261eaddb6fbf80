"""Floating-point integrands on truncations of the counting measure on N.

Two smooth but non-polyhedral families:

* ``f(n, x) = 2^n x_n^2`` with ``mu({n}) = 2^-n``, so ``I_f(x) = ||x||^2``;
* ``f(n, x) = |x_n|^(1 + 1/n)`` with ``mu({n}) = 1``.

Powers of two scale floats exactly, so the first family reproduces its
identities to rounding of the final sum. The exact core never consumes these
values; only :func:`gateaux_correspondence` talks to it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import NotInteriorPoint
from .functions import is_differentiable_at
from .geometry import interior_contains
from .integral import IntegralInstance
from .rational import add, smul, vec, zeros
from .report import CheckReport


@dataclass(frozen=True)
class AnalyticIntegrand:
    """Atom-indexed smooth integrand on R^d; atoms are ``1..d``."""

    value: Callable[[int, np.ndarray], float]
    gradient: Callable[[int, np.ndarray], np.ndarray]
    conjugate: Callable[[int, np.ndarray], float]
    dim: int
    weights: np.ndarray

    def integral(self, x: np.ndarray) -> float:
        return math.fsum(self.weights[n - 1] * self.value(n, x) for n in range(1, self.dim + 1))

    def integral_gradient(self, x: np.ndarray) -> np.ndarray:
        g = np.zeros(self.dim)
        for n in range(1, self.dim + 1):
            g += self.weights[n - 1] * self.gradient(n, x)
        return g

    def convexity_violations(self, rng: np.random.Generator, trials: int = 100, tol: float = 1e-9) -> int:
        """Midpoint-inequality failures of ``I_f`` on random pairs."""
        bad = 0
        for _ in range(trials):
            a, b = rng.normal(size=self.dim), rng.normal(size=self.dim)
            mid = self.integral((a + b) / 2)
            if mid > (self.integral(a) + self.integral(b)) / 2 + tol * (1 + abs(mid)):
                bad += 1
        return bad


L2_MAX_DIM = 1000  # 2^(n+1) has to stay a finite double


def l2_integrand(d: int) -> AnalyticIntegrand:
    if not 1 <= d <= L2_MAX_DIM:
        raise ValueError(f"l2 truncation level must lie in [1, {L2_MAX_DIM}]")

    def val(n, x):
        return math.ldexp(x[n - 1] ** 2, n)

    def grad(n, x):
        g = np.zeros(len(x))
        g[n - 1] = math.ldexp(x[n - 1], n + 1)
        return g

    def conj(n, s):
        # (c y^2)^* = s_n^2 / (4c), finite only along e_n
        others = np.delete(s, n - 1)
        return math.ldexp(s[n - 1] ** 2, -n - 2) if not np.any(others) else math.inf

    w = np.array([math.ldexp(1.0, -n) for n in range(1, d + 1)])
    return AnalyticIntegrand(val, grad, conj, d, w)


def l1_integrand(d: int) -> AnalyticIntegrand:
    def val(n, x):
        return abs(x[n - 1]) ** (1 + 1 / n)

    def grad(n, x):
        g = np.zeros(len(x))
        g[n - 1] = (1 + 1 / n) * abs(x[n - 1]) ** (1 / n) * math.copysign(1.0, x[n - 1])
        return g

    def conj(n, s):
        # |y|^p has conjugate (p - 1) (|s| / p)^(p / (p - 1)) with p = 1 + 1/n
        others = np.delete(s, n - 1)
        if np.any(others):
            return math.inf
        p = 1 + 1 / n
        return (p - 1) * (abs(s[n - 1]) / p) ** (p / (p - 1))

    return AnalyticIntegrand(val, grad, conj, d, np.ones(d))


def l2_example(d: int, x: Optional[Sequence[float]] = None, divergence_dims: Sequence[int] = (10, 100, 1000)) -> CheckReport:
    if d < 1:
        raise ValueError("d must be positive")
    rep = CheckReport("l2_example", arithmetic="float")
    x = np.ones(d) / math.sqrt(d) if x is None else np.asarray(x, dtype=float)
    F = l2_integrand(d)
    val = F.integral(x)
    norm2 = math.fsum(float(c) ** 2 for c in x)
    rel = abs(val - norm2) / max(1.0, norm2)
    grad_err = float(np.max(np.abs(F.integral_gradient(x) - 2 * x))) if d else 0.0
    rep.witnesses.append({"I_f": val, "norm_squared": norm2, "relative_error": rel, "gradient_error_inf": grad_err})
    if rel >= 1e-12:
        rep.fail("I_f differs from the squared norm", relative_error=rel)
    if grad_err >= 1e-12:
        rep.fail("assembled gradient differs from 2x", gradient_error=grad_err)
    surrogate = [divergence_surrogate(D) for D in divergence_dims]
    rep.witnesses.append({"dims": list(divergence_dims), "surrogate": surrogate})
    if any(b <= a for a, b in zip(surrogate, surrogate[1:])):
        rep.fail("surrogate is not increasing in the truncation level", surrogate=surrogate)
    rep.notes = ["binary floating point; truncation of l2 to R^d", "growth of the surrogate is a trend, not a limit"]
    return rep


def divergence_surrogate(d: int) -> float:
    """``sum_n mu_n ||grad f_n(x)||`` at ``x_n = 1/n``, which equals ``2 sum 1/n``."""
    F = l2_integrand(d)
    x = 1.0 / np.arange(1, d + 1)
    return math.fsum(F.weights[n - 1] * float(np.abs(F.gradient(n, x)).sum()) for n in range(1, d + 1))


def frechet_quotient(n: int) -> float:
    """``(I_f(e_n / n) - I_f(0) - <grad I_f(0), e_n> / n) / (1/n)`` for the l1 family."""
    h = 1.0 / n
    # only atom n sees e_n / n; the gradient at 0 vanishes
    return (abs(h) ** (1 + 1 / n) - 0.0 - h * 0.0) / h


def gateaux_quotient(n: int, h: float) -> float:
    """``(I_f(h e_n) - I_f(0)) / h = |h|^(1/n)`` along the fixed direction ``e_n``."""
    return abs(h) ** (1 + 1 / n) / abs(h)


def gateaux_step_needed(n: int, tol: float) -> float:
    """``log10`` of the largest step with quotient below ``tol``: ``n * log10(tol)``."""
    return n * math.log10(tol)


def gateaux_quotient_log10(n: int, log10_h: float) -> float:
    """``|h|^(1/n)`` for ``h = 10^log10_h``; steps far below the float range stay usable."""
    return 10.0 ** (log10_h / n)


def l1_example(n_max: int, step: Optional[float] = None, gateaux_tol: float = 1e-3) -> CheckReport:
    """Frechet quotients along ``e_n / n`` and Gateaux quotients along fixed ``e_n``.

    With ``step=None`` each direction gets its own step, one decade below
    :func:`gateaux_step_needed`. A fixed ``step`` applies to every ``n``.
    """
    if n_max < 1:
        raise ValueError("n_max must be positive")
    rep = CheckReport("l1_example", arithmetic="float")
    ns = np.arange(1, n_max + 1)
    fq = np.array([frechet_quotient(int(n)) for n in ns])
    target = ns.astype(float) ** (-1.0 / ns)
    err = float(np.max(np.abs(fq - target)))
    if step is None:
        gq = np.array([gateaux_quotient_log10(int(n), gateaux_step_needed(int(n), gateaux_tol) - 1) for n in ns])
    else:
        gq = np.array([gateaux_quotient(int(n), step) for n in ns])
    above = [int(n) for n, g in zip(ns, gq) if g >= gateaux_tol]
    rep.witnesses.append({
        "frechet_error": err,
        "frechet_last": float(fq[-1]),
        "gateaux_step": "per-direction" if step is None else step,
        "gateaux_max": float(gq.max()),
        "gateaux_first_above_tol": above[0] if above else None,
        "gradient_at_zero": [0.0] * min(n_max, 8),
    })
    if err >= 1e-12:
        rep.fail("Frechet quotients differ from n^(-1/n)", error=err)
    if n_max >= 1000 and fq[999] <= 0.99:
        rep.fail("Frechet quotient at n = 1000 does not exceed 0.99", value=float(fq[999]))
    if above:
        rep.fail(
            f"Gateaux quotient |h|^(1/n) at h = {step:g} stays above {gateaux_tol:g} from n = {above[0]} on",
            count=len(above),
            log10_step_needed_at_first=gateaux_step_needed(above[0], gateaux_tol),
        )
    rep.notes = ["binary floating point; truncation of l1 to R^n_max", "Gateaux quotient along e_n is |h|^(1/n)"]
    return rep


def gateaux_correspondence(inst: IntegralInstance, x) -> CheckReport:
    """Differentiability of ``I_f`` at an interior point versus that of every atom."""
    x = vec(x)
    if not interior_contains(inst.dom_If, x):
        raise NotInteriorPoint("x must be interior to dom I_f")
    rep = CheckReport("gateaux_correspondence")
    whole, grad = is_differentiable_at(inst.I_f, x)
    atoms = [is_differentiable_at(f, x) for f in inst.functions]
    every = all(ok for ok, _ in atoms)
    rep.witnesses.append({"I_f": whole, "atoms": [ok for ok, _ in atoms]})
    if whole != every:
        return rep.fail("differentiability of I_f and of the atoms disagree", I_f=whole, atoms=[ok for ok, _ in atoms])
    if whole:
        total = zeros(inst.dim)
        for w, (_, g) in zip(inst.weights, atoms):
            total = add(total, smul(w, g))
        if total != grad:
            return rep.fail("gradient of I_f is not the weighted sum of atom gradients", gradient=grad, summed=total)
        rep.witnesses.append({"gradient": grad})
    return rep
