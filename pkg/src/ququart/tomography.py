"""Sixteen-setting coincidence tomography for biphoton ququarts.

Pipeline: analysis-waveplate settings -> rank-1 projectors -> Born-rule
count prediction (optionally Poisson-sampled) -> density-matrix
reconstruction by linear inversion and by constrained maximum-likelihood
fitting, plus parametric-bootstrap error bars.

Both reconstructors follow the scikit-learn estimator protocol: construct
with hyperparameters, call ``fit(counts)``, read fitted attributes
(``rho_`` and friends).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from sklearn.base import BaseEstimator

from ._linalg import fix_global_phase, hermitian_basis
from .optics import retarder_jones
from .validation import ValidationError, as_complex_array, validate_counts

__all__ = [
    "AnalysisSetting",
    "BootstrapError",
    "BootstrapErrors",
    "CompletenessError",
    "ConvergenceError",
    "CountRecord",
    "LinearInversionTomography",
    "MaximumLikelihoodTomography",
    "ProjectorSet",
    "analysis_state",
    "bootstrap_errors",
    "build_projectors",
    "estimate_total",
    "expected_counts",
    "simulate_counts",
]

_HERM4 = hermitian_basis(4)
# condition numbers beyond this mean the setting list cannot be inverted
_SINGULAR_CONDITION = 1e12


class CompletenessError(RuntimeError):
    """The 16 settings do not span the space of 4x4 Hermitian matrices."""


class ConvergenceError(RuntimeError):
    """Likelihood optimization hit its iteration cap before converging.

    Carries the best state found (``rho``), its cost (``cost``), and the
    monotone best-cost history (``cost_trace``).
    """

    def __init__(self, message, rho=None, cost=None, cost_trace=None):
        super().__init__(message)
        self.rho = rho
        self.cost = cost
        self.cost_trace = cost_trace


class BootstrapError(RuntimeError):
    """Too many bootstrap resamples failed to produce a reconstruction."""


@dataclass(frozen=True)
class AnalysisSetting:
    """Fast-axis dial angles of one coincidence measurement, in degrees.

    Angles are measured from the vertical axis (the transmission axis of
    the analysis polarizers) and are normalized into [0, 180).  Suffix 1
    is the signal arm, suffix 2 the idler arm.
    """

    hwp1: float
    qwp1: float
    hwp2: float
    qwp2: float

    def __post_init__(self):
        for label in ("hwp1", "qwp1", "hwp2", "qwp2"):
            value = getattr(self, label)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ValidationError(f"{label} must be a number, got {value!r}")
            if not np.isfinite(value):
                raise ValidationError(f"{label} must be finite, got {value!r}")
            object.__setattr__(self, label, float(value) % 180.0)


def analysis_state(setting, arm):
    """Single-photon state selected by one arm of a setting.

    The photon traverses the quarter-wave plate, then the half-wave
    plate, then a vertically transmitting polarizer.  The state that
    passes with unit probability is the polarizer axis back-propagated
    through both plates.  Plates are ideal at their own arm's wavelength.
    Returned with the first nonzero amplitude real non-negative.
    """
    if not isinstance(setting, AnalysisSetting):
        raise ValidationError("setting must be an AnalysisSetting")
    if arm == "signal":
        hwp_deg, qwp_deg = setting.hwp1, setting.qwp1
    elif arm == "idler":
        hwp_deg, qwp_deg = setting.hwp2, setting.qwp2
    else:
        raise ValidationError(f"arm must be 'signal' or 'idler', got {arm!r}")
    # dial angles count from vertical; the Jones convention counts from
    # horizontal, so a dial angle t means a fast axis at 90 - t degrees
    hwp = retarder_jones(np.pi, np.radians(90.0 - hwp_deg))
    qwp = retarder_jones(np.pi / 2.0, np.radians(90.0 - qwp_deg))
    vertical = np.array([0.0, 1.0], dtype=complex)
    return fix_global_phase(qwp.conj().T @ (hwp.conj().T @ vertical))


@dataclass(frozen=True, eq=False)
class ProjectorSet:
    """The 16 rank-1 coincidence projectors and their inversion system.

    ``response_matrix`` holds Re Tr(P_v B_m) over the Hermitian basis
    B_m used by the linear reconstructor; ``condition_number`` is its
    2-norm conditioning, recorded for diagnostics.
    """

    projectors: np.ndarray
    settings: tuple
    dbs_transmit: np.ndarray | None
    dbs_reflect: np.ndarray | None
    condition_number: float
    response_matrix: np.ndarray


def _through_dbs(vec, dbs, label):
    """State that maps onto `vec` after traversing the splitter element."""
    if dbs is None:
        return vec
    mat = as_complex_array(dbs, (2, 2), f"{label} splitter matrix")
    try:
        back = np.linalg.solve(mat, vec)
    except np.linalg.LinAlgError:
        raise ValidationError(f"{label} splitter matrix is singular") from None
    norm = np.linalg.norm(back)
    if norm < 1e-12:
        raise ValidationError(f"{label} splitter matrix annihilates an analysis state")
    return back / norm


def build_projectors(settings=None, dbs_transmit=None, dbs_reflect=None):
    """Assemble the ProjectorSet for a list of 16 analysis settings.

    ``settings`` defaults to the embedded standard tomography table.
    When splitter calibration matrices are supplied (signal arm =
    transmit port, idler arm = reflect port), each arm's analysis state
    is replaced by the state that reaches it through the splitter, i.e.
    pre-composed with the matrix inverse, then renormalized.

    Raises CompletenessError if the resulting 16x16 response system is
    numerically singular.
    """
    if settings is None:
        from .datasets import table1_settings

        settings = table1_settings()
    settings = tuple(settings)
    if len(settings) != 16:
        raise ValidationError(f"expected 16 analysis settings, got {len(settings)}")
    projectors = np.empty((16, 4, 4), dtype=complex)
    for v, setting in enumerate(settings):
        signal = _through_dbs(analysis_state(setting, "signal"), dbs_transmit, "transmit")
        idler = _through_dbs(analysis_state(setting, "idler"), dbs_reflect, "reflect")
        joint = np.kron(signal, idler)
        projectors[v] = np.outer(joint, joint.conj())
    response = np.einsum("nij,mji->nm", projectors, _HERM4).real
    condition = float(np.linalg.cond(response))
    if not np.isfinite(condition) or condition > _SINGULAR_CONDITION:
        raise CompletenessError(
            f"analysis settings are tomographically incomplete: response-matrix "
            f"condition number {condition:.3e}"
        )
    projectors.setflags(write=False)
    response.setflags(write=False)
    return ProjectorSet(
        projectors=projectors,
        settings=settings,
        dbs_transmit=None if dbs_transmit is None else np.array(dbs_transmit, dtype=complex),
        dbs_reflect=None if dbs_reflect is None else np.array(dbs_reflect, dtype=complex),
        condition_number=condition,
        response_matrix=response,
    )


def _resolve_projectors(projectors):
    if projectors is None:
        return build_projectors()
    if isinstance(projectors, ProjectorSet):
        return projectors
    return build_projectors(projectors)


def _probabilities(pset, rho):
    # Tr(rho P) = P^T.ravel() . rho.ravel(), batched over the 16 settings
    flat = pset.projectors.transpose(0, 2, 1).reshape(16, 16)
    return (flat @ rho.ravel()).real


@dataclass(frozen=True, eq=False)
class CountRecord:
    """One acquisition: 16 coincidence counts plus provenance.

    ``origin`` is free-form provenance ('published', 'simulated(...)' or
    'external'); ``seed`` records the RNG seed when simulated.
    """

    counts: np.ndarray
    duration_s: float = 1.0
    origin: str = "external"
    seed: int | None = None

    def __post_init__(self):
        counts = validate_counts(self.counts)
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)
        if not (np.isfinite(self.duration_s) and self.duration_s > 0):
            raise ValidationError(
                f"duration_s must be positive, got {self.duration_s!r}"
            )


def _counts_array(counts):
    # estimators also take raw (possibly fractional) count vectors, so
    # noiseless Born-rule predictions can round-trip exactly
    if isinstance(counts, CountRecord):
        return counts.counts
    return validate_counts(counts, integral=False)


def expected_counts(rho, projectors=None, total=1.0):
    """Born-rule count prediction: total * Tr(rho P_v) for each setting."""
    pset = _resolve_projectors(projectors)
    if not (np.isfinite(total) and total > 0):
        raise ValidationError(f"total must be positive, got {total!r}")
    rho = as_complex_array(rho, (4, 4), "density matrix")
    probs = np.clip(_probabilities(pset, rho), 0.0, 1.0)
    return total * probs


def simulate_counts(rho, projectors=None, total=10000.0, seed=0, duration_s=1.0):
    """Draw one Poisson-noised acquisition from the Born-rule means.

    Deterministic for a given ``seed``; the seed is recorded on the
    returned CountRecord.
    """
    means = expected_counts(rho, projectors, total)
    rng = np.random.default_rng(seed)
    return CountRecord(
        counts=rng.poisson(means).astype(np.int64),
        duration_s=duration_s,
        origin=f"simulated(seed={seed})",
        seed=int(seed),
    )


def estimate_total(counts):
    """Total pair number N from the first four settings.

    Those four projectors are mutually orthogonal and resolve the
    identity, so their counts partition every detected pair.
    """
    return float(_counts_array(counts)[:4].sum())


# --- parameterization of physical density matrices --------------------------

# (row, col) order of the strictly-lower-triangular factor entries
_LOWER = ((1, 0), (2, 0), (2, 1), (3, 0), (3, 1), (3, 2))


def _density_from_params(params):
    """rho(t) = T^dag T / Tr(T^dag T) with T lower triangular from 16 reals."""
    tri = np.zeros((4, 4), dtype=complex)
    tri[np.diag_indices(4)] = params[:4]
    for k, (i, j) in enumerate(_LOWER):
        tri[i, j] = params[4 + 2 * k] + 1j * params[5 + 2 * k]
    gram = tri.conj().T @ tri
    trace = gram.trace().real
    if trace < 1e-300:  # all-zero parameter vector: fall back to full mixing
        return np.eye(4, dtype=complex) / 4.0
    return gram / trace


def _params_from_density(rho):
    """Inverse of `_density_from_params` for strictly positive rho.

    Uses the antidiagonal-flipped Cholesky factorization so the factor
    comes out lower triangular with T^dag T = rho.
    """
    flip = np.fliplr(np.eye(4))
    lower = np.linalg.cholesky(flip @ rho @ flip)
    tri = (flip @ lower @ flip).conj().T
    params = np.empty(16)
    params[:4] = np.diag(tri).real
    for k, (i, j) in enumerate(_LOWER):
        params[4 + 2 * k] = tri[i, j].real
        params[5 + 2 * k] = tri[i, j].imag
    return params


def _repair_to_positive(rho, eig_floor):
    """Clamp eigenvalues up to `eig_floor` and renormalize the trace."""
    sym = 0.5 * (rho + rho.conj().T)
    vals, vecs = np.linalg.eigh(sym)
    vals = np.clip(vals, eig_floor, None)
    repaired = (vecs * vals) @ vecs.conj().T
    return repaired / repaired.trace().real


# --- reconstruction estimators ----------------------------------------------


class LinearInversionTomography(BaseEstimator):
    """Density-matrix estimate by direct inversion of the Born-rule system.

    Exact on noiseless data; on noisy counts the estimate stays Hermitian
    with unit trace but may have negative eigenvalues, which is flagged
    rather than repaired.

    Parameters
    ----------
    projectors : ProjectorSet, list of AnalysisSetting, or None
        Measurement model; None selects the embedded standard table.

    Attributes (after fit)
    ----------------------
    rho_ : 4x4 complex Hermitian estimate, trace 1.
    eigenvalues_ : ascending eigenvalues of ``rho_``.
    is_physical_ : True when the smallest eigenvalue is >= -1e-10.
    total_ : pair number N inferred from the first four settings.
    condition_number_ : conditioning of the inverted system.
    projector_set_ : the resolved ProjectorSet.
    """

    def __init__(self, projectors=None):
        self.projectors = projectors

    def fit(self, counts, y=None):
        pset = _resolve_projectors(self.projectors)
        values = _counts_array(counts)
        total = float(values[:4].sum())
        if total <= 0:
            raise ValidationError(
                "cannot reconstruct: the four basis settings recorded zero counts"
            )
        coeffs = np.linalg.solve(pset.response_matrix, values / total)
        rho = np.einsum("m,mij->ij", coeffs, _HERM4)
        rho = 0.5 * (rho + rho.conj().T)
        # with the default settings the trace is exactly 1 by construction;
        # splitter-calibrated projectors need no longer sum to the identity
        # over the first four settings, so renormalize
        trace = rho.trace().real
        if trace <= 1e-8:
            raise ValidationError(
                "counts are inconsistent with the measurement model: "
                f"reconstructed trace {trace:.3e} is not positive"
            )
        rho = rho / trace
        self.rho_ = rho
        self.eigenvalues_ = np.linalg.eigvalsh(rho)
        self.is_physical_ = bool(self.eigenvalues_.min() >= -1e-10)
        self.total_ = total
        self.condition_number_ = pset.condition_number
        self.projector_set_ = pset
        return self

    def predict(self, total=None):
        """Expected counts under the fitted state (floored at zero)."""
        if total is None:
            total = self.total_
        return np.clip(total * _probabilities(self.projector_set_, self.rho_), 0.0, None)


class MaximumLikelihoodTomography(BaseEstimator):
    """Physically constrained density-matrix fit to coincidence counts.

    The state is parameterized as rho(t) = T^dag T / Tr(T^dag T) with T
    lower triangular (16 real parameters), which enforces Hermiticity,
    positivity, and unit trace by construction.  A derivative-free
    simplex search minimizes the chosen cost, starting from the
    positivity-repaired linear-inversion estimate.

    Parameters
    ----------
    projectors : ProjectorSet, list of AnalysisSetting, or None
        Measurement model; None selects the embedded standard table.
    likelihood : {'gaussian', 'poisson'}
        Cost form: 'gaussian' is sum (mu - n)^2 / (2 mu), the Gaussian
        approximation to Poisson counting; 'poisson' is the exact
        negative log-likelihood sum (mu - n log mu), constants dropped.
    max_iter : int
        Simplex iteration cap.
    tol : float
        Absolute cost-improvement threshold for convergence.
    seed_eig_floor : float
        Eigenvalue clamp applied when repairing the seed state.

    Attributes (after fit)
    ----------------------
    rho_ : the fitted physical density matrix.
    cost_ : final cost value (never above ``seed_cost_``).
    seed_cost_ : cost at the starting point.
    iterations_, n_evaluations_ : optimizer effort.
    cost_trace_ : monotone best-cost-so-far per evaluation.
    rho_linear_ : the (possibly unphysical) linear-inversion estimate.
    total_ : pair number N from the first four settings.
    projector_set_ : the resolved ProjectorSet.

    Raises ConvergenceError from ``fit`` when the cap is hit first; the
    error carries the best state, cost, and trace.
    """

    def __init__(
        self,
        projectors=None,
        likelihood="gaussian",
        max_iter=50000,
        tol=1e-10,
        seed_eig_floor=1e-6,
    ):
        self.projectors = projectors
        self.likelihood = likelihood
        self.max_iter = max_iter
        self.tol = tol
        self.seed_eig_floor = seed_eig_floor

    def _cost_function(self, flat_projectors, values, total):
        if self.likelihood == "gaussian":

            def cost(params):
                rho = _density_from_params(params)
                mu = np.clip(total * (flat_projectors @ rho.ravel()).real, 1e-9, None)
                return float(np.sum((mu - values) ** 2 / (2.0 * mu)))

        elif self.likelihood == "poisson":

            def cost(params):
                rho = _density_from_params(params)
                mu = np.clip(total * (flat_projectors @ rho.ravel()).real, 1e-9, None)
                return float(np.sum(mu - values * np.log(mu)))

        else:
            raise ValidationError(
                f"likelihood must be 'gaussian' or 'poisson', got {self.likelihood!r}"
            )
        return cost

    def fit(self, counts, y=None, seed_rho=None):
        pset = _resolve_projectors(self.projectors)
        values = _counts_array(counts).astype(float)
        total = float(values[:4].sum())
        if total <= 0:
            raise ValidationError(
                "cannot reconstruct: the four basis settings recorded zero counts"
            )
        linear = LinearInversionTomography(pset).fit(values)
        start = linear.rho_ if seed_rho is None else as_complex_array(
            seed_rho, (4, 4), "seed_rho"
        )
        repaired = _repair_to_positive(start, self.seed_eig_floor)
        params0 = _params_from_density(repaired)

        flat = pset.projectors.transpose(0, 2, 1).reshape(16, 16)
        raw_cost = self._cost_function(flat, values, total)
        history = []

        def cost(params):
            value = raw_cost(params)
            history.append(value)
            return value

        result = minimize(
            cost,
            params0,
            method="Nelder-Mead",
            options={
                "maxiter": self.max_iter,
                "maxfev": 4 * self.max_iter,
                "fatol": self.tol,
                "xatol": 1e-6,
            },
        )
        trace = np.minimum.accumulate(np.asarray(history))
        rho_hat = _density_from_params(result.x)
        self.rho_ = rho_hat
        self.cost_ = float(result.fun)
        self.seed_cost_ = float(history[0])
        self.iterations_ = int(result.nit)
        self.n_evaluations_ = int(result.nfev)
        self.cost_trace_ = trace
        self.rho_linear_ = linear.rho_
        self.linear_eigenvalues_ = linear.eigenvalues_
        self.total_ = total
        self.projector_set_ = pset
        if not result.success:
            raise ConvergenceError(
                f"likelihood optimization did not converge within {self.max_iter} "
                f"iterations (best cost {result.fun:.6g})",
                rho=rho_hat,
                cost=float(result.fun),
                cost_trace=trace,
            )
        return self

    def predict(self, total=None):
        """Expected counts under the fitted state."""
        if total is None:
            total = self.total_
        return total * np.clip(_probabilities(self.projector_set_, self.rho_), 0.0, 1.0)


# --- bootstrap error bars ----------------------------------------------------


@dataclass(frozen=True, eq=False)
class BootstrapErrors:
    """Element-wise standard deviations of resampled reconstructions.

    ``delta_real`` and ``delta_imag`` are 4x4 non-negative matrices of
    the standard deviations of the real and imaginary parts; diagonal
    ``delta_imag`` entries are structurally zero.  ``used`` of
    ``resamples`` fits contributed; ``excluded`` failed twice.
    """

    delta_real: np.ndarray
    delta_imag: np.ndarray
    resamples: int
    used: int
    excluded: int
    master_seed: int

    @property
    def combined(self):
        """Per-element magnitude sqrt(delta_real^2 + delta_imag^2)."""
        return np.hypot(self.delta_real, self.delta_imag)


def _fit_resample(pset, draw, likelihood):
    try:
        return MaximumLikelihoodTomography(pset, likelihood=likelihood).fit(draw).rho_
    except ConvergenceError:
        pass
    # one retry from a perturbed start, pulled toward full mixing
    linear = LinearInversionTomography(pset).fit(draw)
    seed = 0.95 * _repair_to_positive(linear.rho_, 1e-6) + 0.05 * np.eye(4) / 4.0
    return (
        MaximumLikelihoodTomography(pset, likelihood=likelihood)
        .fit(draw, seed_rho=seed)
        .rho_
    )


def bootstrap_errors(
    counts, projectors=None, *, resamples=200, master_seed=0, likelihood="gaussian"
):
    """Parametric-bootstrap error bars on the reconstructed matrix.

    Each resample redraws every count as Poisson(n_v) and re-runs the
    maximum-likelihood fit; the spread of the refitted matrices estimates
    the element-wise uncertainty.  Per-resample RNG streams are derived
    from ``master_seed`` independently of execution order, so results are
    reproducible and parallel-safe.

    A resample whose fit fails to converge is retried once from a
    perturbed start, then excluded; more than 10% exclusions raise
    BootstrapError.
    """
    if resamples < 50:
        raise ValidationError(f"resamples must be at least 50, got {resamples!r}")
    pset = _resolve_projectors(projectors)
    values = _counts_array(counts)
    samples = []
    excluded = 0
    for index in range(resamples):
        rng = np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(index,)))
        draw = rng.poisson(values)
        try:
            samples.append(_fit_resample(pset, draw, likelihood))
        except (ConvergenceError, ValidationError):
            excluded += 1
    if excluded > 0.1 * resamples:
        raise BootstrapError(
            f"{excluded} of {resamples} bootstrap fits failed; error bars would "
            "not be trustworthy"
        )
    stack = np.array(samples)
    return BootstrapErrors(
        delta_real=stack.real.std(axis=0, ddof=1),
        delta_imag=stack.imag.std(axis=0, ddof=1),
        resamples=int(resamples),
        used=len(samples),
        excluded=excluded,
        master_seed=int(master_seed),
    )
