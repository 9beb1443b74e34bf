"""Maximum-entropy transition kernels for a single short step.

The transition probability for a displacement dx is selected by maximizing
relative entropy against a uniform prior subject to two moment constraints:
a fixed expected squared displacement and a fixed expected displacement along
the gradient of a drift potential.  The closed-form solution is an isotropic
Gaussian; this module builds it, and also solves the discretized variational
problem directly (Newton iteration on the multipliers) so the closed form can
be certified against a brute-force maximizer.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import erf

from ._core import standard_normals
from .errors import DomainError, GridMismatchError, NumericalError
from .grids import Grid

PROBABILITY_TOLERANCE = 1e-12
NEWTON_TOLERANCE = 1e-10
NEWTON_MAX_ITER = 100
SUPPORT_MASS_TOLERANCE = 1e-9


@dataclass(frozen=True)
class ConstraintSpec:
    """Moment constraints defining one entropic step.

    kappa is the expected squared displacement <dx.dx>; kappa_prime the
    expected displacement projected on the drift gradient <dx>.grad_phi.
    The multiplier conjugate to kappa_prime is conventionally absorbed into
    the drift potential, so grad_phi here is already the rescaled gradient.
    """

    kappa: float
    kappa_prime: float
    dimension: int
    drift_gradient: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "drift_gradient", np.atleast_1d(np.asarray(self.drift_gradient, dtype=np.float64))
        )
        if self.kappa <= 0:
            raise DomainError("kappa must be positive")
        if self.dimension < 1:
            raise DomainError("dimension must be at least 1")
        if self.drift_gradient.shape != (self.dimension,):
            raise DomainError(
                f"drift_gradient must have {self.dimension} components, got {self.drift_gradient.shape}"
            )
        if not np.all(np.isfinite(self.drift_gradient)):
            raise DomainError("drift_gradient must be finite")

    @classmethod
    def from_multiplier(cls, alpha, drift_gradient):
        """Constraints whose maximum-entropy solution has multiplier alpha.

        This is the primary workflow: alpha is the operative input and the
        constraint values are the implied diagnostics.
        """
        kernel = build_kernel_from_gradient(drift_gradient, alpha)
        kappa, kappa_prime = kernel_moments(kernel)
        return cls(kappa, kappa_prime, kernel.dimension, kernel.drift_gradient)


@dataclass(frozen=True)
class GaussianKernel:
    """Closed-form maximum-entropy step distribution.

    Isotropic Gaussian in the displacement: mean drift_gradient/alpha and
    variance 1/alpha per component.
    """

    alpha: float
    mean: np.ndarray

    def __post_init__(self):
        if self.alpha <= 0:
            raise DomainError("alpha must be positive")
        object.__setattr__(self, "mean", np.atleast_1d(np.asarray(self.mean, dtype=np.float64)))
        if not np.all(np.isfinite(self.mean)):
            raise DomainError("kernel mean must be finite")

    @property
    def covariance_scale(self):
        return 1.0 / self.alpha

    @property
    def dimension(self):
        return self.mean.size

    @property
    def drift_gradient(self):
        return self.mean * self.alpha


@dataclass(frozen=True)
class DiscretizedKernel:
    """A step distribution as per-cell masses on a displacement grid."""

    support: Grid
    probabilities: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probabilities, dtype=np.float64)
        object.__setattr__(self, "probabilities", p)
        if p.shape != (self.support.n_cells,):
            raise DomainError("probabilities must match the support grid")
        if np.any(p < 0):
            raise DomainError("probabilities must be nonnegative")
        if abs(p.sum() - 1.0) > PROBABILITY_TOLERANCE:
            raise DomainError(f"total mass {p.sum()} deviates from 1 beyond tolerance")


def build_kernel(spec, alpha):
    """Closed-form entropy maximizer for the given constraints and multiplier."""
    if alpha <= 0:
        raise DomainError("alpha must be positive")
    return GaussianKernel(alpha, spec.drift_gradient / alpha)


def build_kernel_from_gradient(drift_gradient, alpha):
    """Convenience constructor straight from the drift gradient."""
    if alpha <= 0:
        raise DomainError("alpha must be positive")
    grad = np.atleast_1d(np.asarray(drift_gradient, dtype=np.float64))
    return GaussianKernel(alpha, grad / alpha)


def kernel_moments(kernel):
    """Implied constraint values (kappa, kappa_prime) of a Gaussian kernel.

    <dx.dx> = d/alpha + |grad_phi|^2/alpha^2 and <dx>.grad_phi =
    |grad_phi|^2/alpha.
    """
    mean_sq = float(np.dot(kernel.mean, kernel.mean))
    kappa = kernel.dimension / kernel.alpha + mean_sq
    kappa_prime = kernel.alpha * mean_sq
    return kappa, kappa_prime


def sample_displacements(kernel, count, seed):
    """Draw `count` displacement vectors, shape (count, dimension).

    Component c uses counter stream c of the seeded Philox generator, so the
    draw is reproducible and independent of chunking.
    """
    if count < 0:
        raise DomainError("count must be nonnegative")
    sigma = np.sqrt(kernel.covariance_scale)
    out = np.empty((count, kernel.dimension))
    for c in range(kernel.dimension):
        out[:, c] = kernel.mean[c] + sigma * standard_normals(seed, c, count)
    return out


def relative_entropy(p, q):
    """Entropy of p relative to q, -sum p log(p/q), in nats.

    Nonpositive for normalized distributions, zero iff p == q.
    """
    if p.support != q.support:
        raise GridMismatchError("kernels live on different supports")
    mask = p.probabilities > 0
    if np.any(q.probabilities[mask] <= 0):
        raise DomainError("q must be strictly positive wherever p is")
    pm = p.probabilities[mask]
    qm = q.probabilities[mask]
    return float(-np.sum(pm * np.log(pm / qm)))


def total_variation_distance(p, q):
    if p.support != q.support:
        raise GridMismatchError("kernels live on different supports")
    return 0.5 * float(np.abs(p.probabilities - q.probabilities).sum())


def discretize_kernel(kernel, support):
    """Cell masses of the analytic Gaussian on a 1-D displacement grid."""
    if kernel.dimension != 1:
        raise DomainError("discretization is supported in one dimension only")
    x = support.centers
    log_w = -0.5 * kernel.alpha * (x - kernel.mean[0]) ** 2
    w = np.exp(log_w - log_w.max())
    return DiscretizedKernel(support, w / w.sum())


def uniform_kernel(support):
    n = support.n_cells
    return DiscretizedKernel(support, np.full(n, 1.0 / n))


def analytic_multipliers(spec):
    """Continuum multipliers (alpha, alpha_prime) solving the constraints.

    One-dimensional closed form: the Gaussian mean is kappa_prime/g and the
    variance kappa - mean^2.
    """
    if spec.dimension != 1:
        raise DomainError("multiplier solving is supported in one dimension only")
    g = float(spec.drift_gradient[0])
    if g == 0.0:
        if abs(spec.kappa_prime) > 0:
            raise DomainError("kappa_prime must vanish when the drift gradient does")
        return 1.0 / spec.kappa, 1.0
    mu = spec.kappa_prime / g
    var = spec.kappa - mu * mu
    if var <= 0:
        raise DomainError("constraints are infeasible: implied variance is nonpositive")
    alpha = 1.0 / var
    return alpha, mu * alpha / g


def oracle_support(spec, n_cells=None, half_width_sigmas=8.0, points_per_sigma=8):
    """Displacement grid wide and fine enough for the brute-force maximizer.

    Extends half_width_sigmas standard deviations either side of the implied
    mean, with at least points_per_sigma cells per standard deviation.
    """
    alpha, alpha_prime = analytic_multipliers(spec)
    sigma = 1.0 / np.sqrt(alpha)
    mu = alpha_prime * float(spec.drift_gradient[0]) / alpha
    half = half_width_sigmas * sigma
    if n_cells is None:
        n_cells = int(np.ceil(2 * half_width_sigmas * points_per_sigma))
    return Grid(mu - half, mu + half, n_cells)


@dataclass(frozen=True)
class MaxEntSolution:
    """Brute-force maximizer output: multipliers plus the distribution."""

    alpha: float
    alpha_prime: float
    kernel: DiscretizedKernel
    iterations: int
    residual: float


def _exp_family(x, g, alpha, alpha_prime):
    log_w = -0.5 * alpha * x * x + alpha_prime * g * x
    w = np.exp(log_w - log_w.max())
    return w / w.sum()


def solve_multipliers(spec, support):
    """Newton iteration on the discretized exponential family.

    Matches the two constraint moments on the support grid to tolerance
    1e-10, with damped steps if a trial update overshoots.
    """
    if spec.dimension != 1:
        raise DomainError("the discretized maximizer is one-dimensional")
    alpha0, _ = analytic_multipliers(spec)
    sigma = 1.0 / np.sqrt(alpha0)
    mu0 = spec.kappa_prime / spec.drift_gradient[0] if spec.drift_gradient[0] else 0.0
    tail = 1.0 - 0.5 * (
        erf((support.x_max - mu0) / (np.sqrt(2) * sigma))
        - erf((support.x_min - mu0) / (np.sqrt(2) * sigma))
    )
    if tail > SUPPORT_MASS_TOLERANCE:
        raise DomainError(
            f"support holds too little of the analytic mass (tail {tail:.2e})"
        )

    x = support.centers
    g = float(spec.drift_gradient[0])
    target = np.array([spec.kappa, spec.kappa_prime])
    theta = np.array([alpha0, 1.0 if g else 0.0])

    def residual(th):
        p = _exp_family(x, g, th[0], th[1])
        m1 = float(p @ (x * x))
        m2 = float(p @ (g * x))
        return np.array([m1 - target[0], m2 - target[1]]), p

    res, p = residual(theta)
    for iteration in range(1, NEWTON_MAX_ITER + 1):
        if np.max(np.abs(res)) < NEWTON_TOLERANCE:
            return MaxEntSolution(
                float(theta[0]), float(theta[1]),
                DiscretizedKernel(support, p), iteration - 1, float(np.max(np.abs(res))),
            )
        x2 = x * x
        e_x2 = float(p @ x2)
        e_x = float(p @ x)
        cov_x2_x2 = float(p @ (x2 * x2)) - e_x2 * e_x2
        cov_x2_x = float(p @ (x2 * x)) - e_x2 * e_x
        var_x = float(p @ x2) - e_x * e_x
        jac = np.array(
            [
                [-0.5 * cov_x2_x2, g * cov_x2_x],
                [-0.5 * g * cov_x2_x, g * g * var_x],
            ]
        )
        if g == 0.0:
            # the drift direction is degenerate; keep alpha_prime fixed
            step = np.array([res[0] / (0.5 * cov_x2_x2), 0.0])
        else:
            try:
                step = -np.linalg.solve(jac, res)
            except np.linalg.LinAlgError:
                step = -np.linalg.lstsq(jac, res, rcond=None)[0]
        # damp until the residual actually decreases and alpha stays positive
        scale = 1.0
        for _ in range(40):
            trial = theta + scale * step
            if trial[0] > 0:
                trial_res, trial_p = residual(trial)
                if np.max(np.abs(trial_res)) < np.max(np.abs(res)):
                    theta, res, p = trial, trial_res, trial_p
                    break
            scale *= 0.5
        else:
            raise NumericalError(
                f"damped Newton stalled at residuals {res} after {iteration} iterations"
            )
    raise NumericalError(
        f"multiplier iteration did not converge in {NEWTON_MAX_ITER} steps; "
        f"residuals {res}"
    )


def maximize_entropy_oracle(spec, support):
    """Discrete distribution maximizing relative entropy under the constraints.

    Brute-force counterpart of build_kernel: Newton on the multipliers of the
    discretized exponential family against the uniform prior.
    """
    return solve_multipliers(spec, support).kernel
