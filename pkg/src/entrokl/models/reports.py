"""Report models emitted by the condition checks, diagnostics and experiments.

Every report serializes with ``model_dump(mode="json")``; field names are
part of the JSON contract.
"""

from __future__ import annotations

from typing import Annotated, Any, Literal

from pydantic import BaseModel, ConfigDict, Field

from entrokl.models.base import FunctionalKind, LocalKind, NnMethod

DIVERGENT = "divergent"


class Report(BaseModel):
    """Base for all JSON reports."""

    model_config = ConfigDict(frozen=True)

    def is_failure(self) -> bool:
        """Whether the report signals a failed check or a divergent estimate."""
        return False


class EstimateSummary(Report):
    """Output of the estimate command.

    Attributes:
        h_n: Entropy estimate in nats
        n: Sample size
        dim: Dimension
        log_rho_bar: Mean log nearest-neighbor distance
        method: Nearest-neighbor backend
        duplicates_handled: True when jitter removed coincident points
    """

    h_n: float
    n: int
    dim: int
    log_rho_bar: float
    method: NnMethod
    duplicates_handled: bool


class LocalFunctionalValue(Report):
    """One evaluation of I_f(x, r), M_f(x, R) or m_f(x, R).

    Attributes:
        x: Evaluation point
        r_or_R: Ball radius r (kind I) or radius cap R (kinds M, m)
        value: Functional value
        kind: Which local functional
        grid_points: Number of candidates searched (1 for kind I)
        used_exact_ball_mass: Whether closed-form ball masses were used
        std_error: Monte Carlo standard error of value (0 on the exact path)
    """

    x: list[float]
    r_or_R: float
    value: float = Field(ge=0)
    kind: LocalKind
    grid_points: int = Field(ge=1)
    used_exact_ball_mass: bool
    std_error: float = Field(default=0.0, ge=0)


class FunctionalEstimate(Report):
    """Monte Carlo estimate of K_f, K_{f,2}, Q_f or T_f.

    Attributes:
        kind: Which functional
        params: Its ε and R parameters, keyed eps0/eps1/eps2/R1/R2
        value: Estimate, or None when the estimate diverged
        std_error: Standard error over the outer sample
        n_outer: Outer sample size
        n_inner: Inner sample size (K, K2) or ball-mass Monte Carlo size (Q, T)
        seed: Master seed
        flags: Free-form markers such as "divergent" or "offending_x=[...]"
    """

    kind: FunctionalKind
    params: dict[str, float]
    value: Annotated[float, Field(ge=0)] | None
    std_error: float = Field(ge=0)
    n_outer: int
    n_inner: int
    seed: int
    flags: list[str] = Field(default_factory=list)

    @property
    def divergent(self) -> bool:
        """Whether the estimate was flagged divergent."""
        return DIVERGENT in self.flags

    def is_failure(self) -> bool:
        return self.divergent


class MinorizationProbe(Report):
    """Minorization check at a single point."""

    x: list[float]
    m_hat: float
    std_error: float
    f_x: float
    bound: float
    margin: float
    tolerance: float
    ok: bool


class MinorizationReport(Report):
    """Check of m_f(x, R) ≥ c·f(x) with c = exp(-R²/(2·λ_min)) for a Gaussian.

    Attributes:
        R: Radius cap
        c: Minorization constant
        lambda_min: Smallest covariance eigenvalue
        probes: Per-point outcomes
        passed: True when every probe margin clears its tolerance
        seed: Seed used for Monte Carlo ball masses
    """

    R: float
    c: float
    lambda_min: float
    probes: list[MinorizationProbe]
    passed: bool
    seed: int

    def is_failure(self) -> bool:
        return not self.passed


class IdentityCheck(Report):
    """Both sides of one integration-by-parts identity."""

    name: str
    lhs: float
    rhs: float
    abs_diff: float
    lhs_error: float
    rhs_error: float
    converged: bool
    ok: bool


class LogMomentIdentityReport(Report):
    """Quadrature verification of the two log-moment integration-by-parts identities."""

    rate: float
    quad_tol: float
    identities: list[IdentityCheck]
    passed: bool

    def is_failure(self) -> bool:
        return not self.passed


class ConditionAReport(Report):
    """Monte Carlo estimate of E|log ρ(X₁, X₂)|^p with a tail-stability verdict."""

    p: float
    n_pairs: int
    value: float | None
    std_error: float
    half_value: float | None
    half_std_error: float
    stable: bool
    passed: bool
    seed: int
    flags: list[str] = Field(default_factory=list)

    def is_failure(self) -> bool:
        return not self.passed


class BoundednessReport(Report):
    """Check of condition B (f ≤ M) or C1 (f ≥ m > 0 on the support).

    Attributes:
        condition: "B" or "C1"
        bound: M for B, m for C1
        probe_extreme: Largest (B) or smallest (C1) density value over the probes
        n_probe: Number of probe draws from the density
        passed: Whether the condition holds
        seed: Probe seed
        flags: Markers such as "unbounded_support"
    """

    condition: Literal["B", "C1"]
    bound: float
    probe_extreme: float
    n_probe: int
    passed: bool
    seed: int
    flags: list[str] = Field(default_factory=list)

    def is_failure(self) -> bool:
        return not self.passed


class LogIntegrabilityReport(Report):
    """Check of ∫|log f|·f ≤ Q_f(ε₁, R₁)/ε₁ + T_f(ε₂, R₂)/ε₂."""

    params: dict[str, float]
    log_integral: float
    log_integral_std_error: float
    q_value: float | None
    t_value: float | None
    bound: float | None
    passed: bool
    seed: int
    flags: list[str] = Field(default_factory=list)

    def is_failure(self) -> bool:
        return not self.passed


class ConditionalLawReport(Report):
    """Distance between the law of ξ_{N,x} and its exponential limit.

    Attributes:
        x: Query point
        n: Sample size N
        reps: Number of simulated realizations
        ks_distance: Kolmogorov-Smirnov distance to 1 - exp(-f(x)·u/γ̃)
        empirical_mean_log: Mean of log ξ_{N,x} over realizations
        target_mean_log: -log f(x)
        rate: f(x)/γ̃
        seed: Master seed
    """

    x: list[float]
    n: int
    reps: int
    ks_distance: float = Field(ge=0, le=1)
    empirical_mean_log: float
    target_mean_log: float
    rate: float
    seed: int


class CdfAgreementReport(Report):
    """Simulated ξ_{N,x} against the exact finite-N conditional CDF."""

    x: list[float]
    n: int
    reps: int
    ks_distance: float = Field(ge=0, le=1)
    dkw_band: float
    alpha: float
    passed: bool
    seed: int

    def is_failure(self) -> bool:
        return not self.passed


class LogMomentsReport(Report):
    """Empirical log-moments of ξ_{N,x} against their exponential-limit values."""

    x: list[float]
    n: int
    reps: int
    mean_log: float
    mean_log_std_error: float
    target_mean_log: float
    mean_log_sq: float
    mean_log_sq_std_error: float
    target_mean_log_sq: float
    mean_g_abs_log: float
    seed: int


class EnvelopeReport(Report):
    """Check of the two CDF envelopes bounding F_{N,x} near 0 and in the tail."""

    x: list[float]
    n: int
    params: dict[str, float]
    lower_checked: bool
    upper_checked: bool
    max_lower_excess: float
    max_upper_excess: float
    passed: bool
    flags: list[str] = Field(default_factory=list)

    def is_failure(self) -> bool:
        return not self.passed


class RepRecord(Report):
    """Raw outcome of one (n, rep) cell of a convergence study."""

    n: int
    rep: int
    h_n: float
    seed: int


class CellFailure(Report):
    """A (n, rep) cell that raised instead of producing an estimate."""

    n: int
    rep: int
    seed: int
    error: str


class ConvergenceRow(Report):
    """Aggregate statistics of H_N over reps at one sample size.

    Statistics are None when too few reps succeeded to compute them (none for
    the mean, fewer than two for the variance).
    """

    n: int
    reps_ok: int
    mean_h: float | None
    bias: float | None
    var_h: float | None
    mse: float | None
    mse_from_bias_var: float | None
    se_mean: float | None


class ConvergenceReport(Report):
    """Bias, variance and MSE of H_N along a grid of sample sizes.

    Attributes:
        density_spec: Echo of the density document
        n_grid: Sample sizes, increasing
        reps: Replications requested per sample size
        per_n: One row per sample size, in n_grid order
        h_true: Closed-form entropy in nats
        master_seed: Seed all cell seeds derive from
        failures: Cells that raised
        records: Raw per-cell outcomes in (n, rep) order; written to CSV, not to JSON
    """

    density_spec: dict[str, Any]
    n_grid: list[int]
    reps: int
    per_n: list[ConvergenceRow]
    h_true: float
    master_seed: int
    failures: list[CellFailure] = Field(default_factory=list)
    records: list[RepRecord] = Field(default_factory=list, exclude=True)

    def is_failure(self) -> bool:
        return bool(self.failures)


class VarianceDecompositionReport(Report):
    """Direct var(H_N) against (1/N)·var(ζ₁) + ((N-1)/N)·cov(ζ₁, ζ₂)."""

    n: int
    reps: int
    var_h: float
    var_zeta1: float
    cov_zeta12: float
    cov_std_error: float
    recombined: float
    gap: float
    gap_std_error: float
    passed: bool
    master_seed: int

    def is_failure(self) -> bool:
        return not self.passed
