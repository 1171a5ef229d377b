"""Gain-profile optimization: SE maximization and amplifier energy minimization.

Two problem families are solved here.

*SE maximization* picks the gain profile with the highest spectral
efficiency subject to the power cap.  For a heterodyne receiver the
answer is closed-form (every usable amplifier at the cap-saturating
gain); for a joint-detection receiver the landscape is non-convex and a
multi-start projected gradient ascent is used.

*Energy minimization* finds the cheapest gain profile whose SE still
reaches a target (by default, the best heterodyne SE of the same link).
Two amplifier cost models are supported: the exact one, where the photon
budget of amplifier i depends on the field it receives,

    E = sum_i (G_i - 1) * (eta*(tau_{i-1}*n + nu_{i-1}) + 1),

and a relaxed one that charges every amplifier as if its input sat at the
power cap, E' = sum_i (G_i - 1) * (eta*n + 1).  The relaxed cost never
undershoots the exact one on cap-respecting profiles, and its gradient is
constant, which makes that variant fast.

The minimizer starts from full amplification and alternates two stages
with geometrically shrinking step sizes: a straight descent along the
energy gradient, and a slide along the constant-SE surface (the energy
gradient projected onto the orthogonal complement of the SE gradient).
A step is accepted only if it stays in the gain box, keeps the SE at or
above the target, and strictly lowers the energy objective; otherwise
the step size halves.  Acceptance uses SE >= target*(1 - 1e-12) so the
target value itself remains attainable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .link import (
    ChannelCoefficients,
    GainProfile,
    LinkConfig,
    coefficients_for,
    max_gain,
)
from .rates import (
    HOLEVO,
    HOMODYNE,
    Receiver,
    holevo_gain_gradient,
    holevo_se,
    se_for,
    se_gain_gradient,
    shannon_se,
)

# Relative slack on the SE constraint, so that profiles sitting exactly on
# the target are accepted despite floating-point jitter.
SE_SLACK = 1e-12


class EnergyModel(Enum):
    """Amplifier cost accounting: gain-dependent or capped per amplifier."""

    EXACT = "exact"
    RELAXED = "relaxed"


@dataclass(frozen=True)
class OptimizationResult:
    """Outcome of a gain-selection solve.

    ``energy`` is measured under the model the solver optimized;
    ``energy_exact`` is always the gain-dependent cost, and the savings
    fraction compares it against ``baseline_energy``, the exact cost of
    the fully amplified profile.
    """

    gains: GainProfile
    se_achieved: float
    se_target: float
    energy: float
    energy_exact: float
    baseline_energy: float
    savings_fraction: float
    converged: bool
    iterations: int
    status: str


def shannon_baseline_energy(config: LinkConfig) -> float:
    """Exact cost of full amplification: (K-1)*(1-eta)*n photons."""
    return (config.segments - 1) * (1.0 - config.eta) * config.photons


# --- energy functionals ------------------------------------------------------

def _energy_exact(coeffs: ChannelCoefficients, n: float) -> float:
    eta = coeffs.eta
    total = 0.0
    for j, g in enumerate(coeffs.gains):
        if g != 1.0:
            total += (g - 1.0) * (eta * (coeffs.tau_prefix[j] * n + coeffs.nu_prefix[j]) + 1.0)
    return total


def _energy_relaxed(coeffs: ChannelCoefficients, n: float) -> float:
    cost = coeffs.eta * n + 1.0
    return sum((g - 1.0) * cost for g in coeffs.gains)


def _energy_gradient_exact(coeffs: ChannelCoefficients, n: float) -> list[float]:
    """All K partial derivatives of the exact cost.

    The cross terms (gain i raising the field every later amplifier must
    re-amplify) reduce to a suffix sum: with S_i = sum_{k>i} (G_k - 1) *
    tau_{k-1},

        dE/dG_i = eta*(tau_{i-1}*n + nu_{i-1}) + 1
                  + eta*S_i*(n/G_i + (eta*nu_{i-1} + 1)/tau_i).
    """
    eta = coeffs.eta
    K = coeffs.segments
    suffix = [0.0] * (K + 1)
    for i in range(K - 1, -1, -1):
        suffix[i] = suffix[i + 1] + (coeffs.gains[i] - 1.0) * coeffs.tau_prefix[i]
    grad = []
    for i in range(1, K + 1):
        g = coeffs.gains[i - 1]
        tau_in = coeffs.tau_prefix[i - 1]
        nu_in = coeffs.nu_prefix[i - 1]
        d = eta * (tau_in * n + nu_in) + 1.0
        if suffix[i] != 0.0:
            d += eta * suffix[i] * (n / g + (eta * nu_in + 1.0) / coeffs.tau_prefix[i])
        grad.append(d)
    return grad


def _energy_gradient_relaxed(coeffs: ChannelCoefficients, n: float) -> list[float]:
    # The last gain is pinned at 1, so its (constant) cost slope is reported
    # as zero rather than eta*n + 1.
    cost = coeffs.eta * n + 1.0
    return [cost] * (coeffs.segments - 1) + [0.0]


def energy(config: LinkConfig, profile: GainProfile) -> float:
    """Minimum photon budget of the amplifiers under the exact cost model."""
    coeffs = coefficients_for(config.eta, profile.gains)
    return _energy_exact(coeffs, config.photons)


def energy_relaxed(config: LinkConfig, profile: GainProfile) -> float:
    """Photon budget when every amplifier is charged as if fed at the cap."""
    coeffs = coefficients_for(config.eta, profile.gains)
    return _energy_relaxed(coeffs, config.photons)


def energy_gradient(
    config: LinkConfig,
    profile: GainProfile,
    model: EnergyModel = EnergyModel.EXACT,
) -> list[float]:
    """Partial derivatives of the chosen cost with respect to each gain."""
    coeffs = coefficients_for(config.eta, profile.gains)
    if model is EnergyModel.RELAXED:
        return _energy_gradient_relaxed(coeffs, config.photons)
    return _energy_gradient_exact(coeffs, config.photons)


# --- search state and the two descent stages --------------------------------

@dataclass
class GainSearchState:
    """Mutable iterate of the constrained energy descent.

    ``free_gains`` holds G_1..G_{K-1}; the final gain stays pinned at 1.
    ``energy`` is the model objective at the iterate.  When
    ``record_trace`` is set, every accepted objective value lands in
    ``energy_trace`` and every attempted step in ``step_trace`` as
    ``(step_size, accepted)`` pairs.
    """

    eta: float
    photons: float
    gain_cap: float
    target_se: float
    receiver: Receiver
    model: EnergyModel
    free_gains: list[float]
    coeffs: ChannelCoefficients
    se: float
    energy: float
    iterations: int = 0
    accepted: int = 0
    record_trace: bool = False
    energy_trace: list[float] = field(default_factory=list)
    step_trace: list[tuple[float, bool]] = field(default_factory=list)

    @classmethod
    def start(
        cls,
        config: LinkConfig,
        target_se: float,
        receiver: Receiver = HOLEVO,
        model: EnergyModel = EnergyModel.EXACT,
        free_gains: list[float] | None = None,
        record_trace: bool = False,
    ) -> "GainSearchState":
        cap = max_gain(config)
        if free_gains is None:
            free_gains = [cap] * (config.segments - 1)
        coeffs = coefficients_for(config.eta, list(free_gains) + [1.0])
        state = cls(
            eta=config.eta,
            photons=config.photons,
            gain_cap=cap,
            target_se=target_se,
            receiver=receiver,
            model=model,
            free_gains=list(free_gains),
            coeffs=coeffs,
            se=se_for(receiver, coeffs, config.photons),
            energy=0.0,
            record_trace=record_trace,
        )
        state.energy = state._objective(coeffs)
        return state

    def _objective(self, coeffs: ChannelCoefficients) -> float:
        if self.model is EnergyModel.RELAXED:
            return _energy_relaxed(coeffs, self.photons)
        return _energy_exact(coeffs, self.photons)

    def _objective_gradient(self) -> list[float]:
        if self.model is EnergyModel.RELAXED:
            return _energy_gradient_relaxed(self.coeffs, self.photons)[:-1]
        return _energy_gradient_exact(self.coeffs, self.photons)[:-1]

    def _se_gradient(self) -> list[float]:
        return [
            se_gain_gradient(self.receiver, self.coeffs, self.photons, i)
            for i in range(1, len(self.free_gains) + 1)
        ]

    def try_step(self, candidate: list[float], step_size: float) -> bool:
        """Accept ``candidate`` if it is boxed, SE-feasible and cheaper."""
        self.iterations += 1
        accepted = False
        if all(1.0 <= g <= self.gain_cap for g in candidate):
            coeffs = coefficients_for(self.eta, candidate + [1.0])
            se = se_for(self.receiver, coeffs, self.photons)
            if se >= self.target_se * (1.0 - SE_SLACK):
                e = self._objective(coeffs)
                if e < self.energy:
                    self.free_gains = candidate
                    self.coeffs = coeffs
                    self.se = se
                    self.energy = e
                    self.accepted += 1
                    accepted = True
                    if self.record_trace:
                        self.energy_trace.append(e)
        if self.record_trace:
            self.step_trace.append((step_size, accepted))
        return accepted

    def profile(self) -> GainProfile:
        return GainProfile(tuple(self.free_gains) + (1.0,))


def descend_energy_gradient(
    state: GainSearchState,
    levels: int = 30,
    max_steps: int = 4000,
) -> GainSearchState:
    """Walk along -grad(E) with step sizes (cap-1)*2^-s, s = 1..levels-1.

    Rejected steps halve the step size; the stage ends when the budget of
    halving levels (or the safety cap on total steps) is exhausted.
    """
    if not state.free_gains:
        return state
    span = state.gain_cap - 1.0
    s = 1
    steps = 0
    while s < levels and steps < max_steps:
        steps += 1
        grad = state._objective_gradient()
        norm = math.sqrt(sum(c * c for c in grad))
        if norm == 0.0 or not math.isfinite(norm):
            break
        step = span * 0.5**s
        candidate = [g - step * c / norm for g, c in zip(state.free_gains, grad)]
        if not state.try_step(candidate, step):
            s += 1
    return state


def slide_along_se_surface(
    state: GainSearchState,
    levels: int = 30,
    max_steps: int = 4000,
) -> GainSearchState:
    """Descend the energy along the surface of constant SE.

    Each trial step moves against the component of the energy gradient
    orthogonal to the SE gradient.  A straight tangent step leaves the
    curved SE surface by second order, which with an active constraint
    would get almost every step rejected; the step is therefore restored
    onto the surface by bisecting the smallest push along the SE-gradient
    direction that re-establishes feasibility before the usual acceptance
    test (in box, SE at target, energy strictly lower) is applied.
    """
    if not state.free_gains:
        return state
    span = state.gain_cap - 1.0
    se_floor = state.target_se * (1.0 - SE_SLACK)
    s = 1
    steps = 0
    while s < levels and steps < max_steps:
        steps += 1
        egrad = state._objective_gradient()
        enorm = math.sqrt(sum(c * c for c in egrad))
        if enorm == 0.0 or not math.isfinite(enorm):
            break
        sgrad = state._se_gradient()
        snorm = math.sqrt(sum(c * c for c in sgrad))
        if snorm == 0.0 or not math.isfinite(snorm):
            break
        e_unit = [c / enorm for c in egrad]
        s_unit = [c / snorm for c in sgrad]
        dot = sum(a * b for a, b in zip(e_unit, s_unit))
        direction = [a - dot * b for a, b in zip(e_unit, s_unit)]
        if math.sqrt(sum(c * c for c in direction)) < 1e-15:
            break
        step = span * 0.5**s
        raw = [g - step * c for g, c in zip(state.free_gains, direction)]

        def boxed_se(push: float) -> tuple[list[float], float]:
            cand = [min(max(g + push * b, 1.0), state.gain_cap)
                    for g, b in zip(raw, s_unit)]
            coeffs = coefficients_for(state.eta, cand + [1.0])
            return cand, se_for(state.receiver, coeffs, state.photons)

        candidate, se = boxed_se(0.0)
        if se < se_floor:
            # restore feasibility: bisect the smallest SE-gradient push
            push = step
            feasible_push = None
            for _ in range(4):
                candidate, se = boxed_se(push)
                if se >= se_floor:
                    feasible_push = push
                    break
                push *= 2.0
            if feasible_push is None:
                s += 1
                continue
            lo = 0.0
            for _ in range(40):
                mid = 0.5 * (lo + feasible_push)
                cand_mid, se_mid = boxed_se(mid)
                if se_mid >= se_floor:
                    feasible_push, candidate = mid, cand_mid
                else:
                    lo = mid
        if not state.try_step(candidate, step):
            s += 1
    return state


# --- closed-form and search solvers ------------------------------------------

def maximize_shannon_se(config: LinkConfig) -> OptimizationResult:
    """Best heterodyne SE: all usable amplifiers at the cap-saturating gain."""
    profile = GainProfile.fully_amplified(config)
    coeffs = coefficients_for(config.eta, profile.gains)
    se = shannon_se(coeffs, config.photons)
    e_exact = _energy_exact(coeffs, config.photons)
    baseline = shannon_baseline_energy(config)
    savings = 1.0 - e_exact / baseline if baseline > 0 else 0.0
    return OptimizationResult(
        gains=profile,
        se_achieved=se,
        se_target=se,
        energy=e_exact,
        energy_exact=e_exact,
        baseline_energy=baseline,
        savings_fraction=savings,
        converged=True,
        iterations=0,
        status="converged",
    )


def _project_box(gains: list[float], cap: float) -> list[float]:
    return [min(max(g, 1.0), cap) for g in gains]


def _ascend_holevo(
    eta: float,
    n: float,
    cap: float,
    start: list[float],
    max_iters: int,
) -> tuple[list[float], float, bool, int]:
    """Projected gradient ascent on the Holevo SE over the gain box."""
    x = list(start)
    coeffs = coefficients_for(eta, x + [1.0])
    se = holevo_se(coeffs, n)
    span = cap - 1.0
    if span <= 0.0 or not x:
        return x, se, True, 0
    step = span / 4.0
    floor = span * 1e-13
    iters = 0
    for _ in range(max_iters):
        iters += 1
        grad = [holevo_gain_gradient(coeffs, n, i) for i in range(1, len(x) + 1)]
        if not all(map(math.isfinite, grad)):
            # noiseless corner: the SE is locally non-improvable from here
            return x, se, True, iters
        norm = math.sqrt(sum(c * c for c in grad))
        if norm == 0.0:
            return x, se, True, iters
        moved = False
        while step >= floor:
            candidate = _project_box([xi + step * c / norm for xi, c in zip(x, grad)], cap)
            if candidate == x:
                step *= 0.5
                continue
            cand_coeffs = coefficients_for(eta, candidate + [1.0])
            cand_se = holevo_se(cand_coeffs, n)
            if cand_se > se + 1e-13:
                x, coeffs, se = candidate, cand_coeffs, cand_se
                step = min(step * 2.0, span / 2.0)
                moved = True
                break
            step *= 0.5
        if not moved:
            return x, se, True, iters
    return x, se, False, iters


def maximize_holevo_se(config: LinkConfig, max_iters: int = 400) -> OptimizationResult:
    """Best joint-detection SE over cap-respecting, non-trivial gain boxes.

    Multi-start projected gradient ascent.  The starting set covers the
    profiles the derivative regimes single out as candidates: full
    amplification, no amplification, and every "amplify only a leading
    stretch" staircase.
    """
    n = config.photons
    cap = max_gain(config)
    K = config.segments
    shannon_opt = maximize_shannon_se(config)
    baseline = shannon_opt.baseline_energy

    kfree = K - 1
    starts: list[list[float]] = [[cap] * kfree, [1.0] * kfree]
    stair_range = range(1, kfree) if kfree <= 32 else range(1, kfree, max(1, kfree // 16))
    for lead in stair_range:
        starts.append([cap] * lead + [1.0] * (kfree - lead))

    best_gains: list[float] = [1.0] * kfree
    best_se = -math.inf
    all_converged = True
    total_iters = 0
    for start in starts:
        gains, se, converged, iters = _ascend_holevo(config.eta, n, cap, start, max_iters)
        total_iters += iters
        all_converged = all_converged and converged
        if se > best_se:
            best_se, best_gains = se, gains

    profile = GainProfile(tuple(best_gains) + (1.0,))
    e_exact = energy(config, profile)
    return OptimizationResult(
        gains=profile,
        se_achieved=best_se,
        se_target=shannon_opt.se_achieved,
        energy=e_exact,
        energy_exact=e_exact,
        baseline_energy=baseline,
        savings_fraction=1.0 - e_exact / baseline if baseline > 0 else 0.0,
        converged=all_converged,
        iterations=total_iters,
        status="converged" if all_converged else "iteration-budget",
    )


def _trivial_result(
    config: LinkConfig,
    profile: GainProfile,
    receiver: Receiver,
    model: EnergyModel,
    target_se: float,
    converged: bool,
    status: str,
    iterations: int = 0,
) -> OptimizationResult:
    coeffs = coefficients_for(config.eta, profile.gains)
    n = config.photons
    e_exact = _energy_exact(coeffs, n)
    e_model = e_exact if model is EnergyModel.EXACT else _energy_relaxed(coeffs, n)
    baseline = shannon_baseline_energy(config)
    if status == "infeasible-target":
        savings = 0.0
    else:
        savings = 1.0 - e_exact / baseline if baseline > 0 else 0.0
    return OptimizationResult(
        gains=profile,
        se_achieved=se_for(receiver, coeffs, n),
        se_target=target_se,
        energy=e_model,
        energy_exact=e_exact,
        baseline_energy=baseline,
        savings_fraction=savings,
        converged=converged,
        iterations=iterations,
        status=status,
    )


def run_energy_descent(
    state: GainSearchState,
    stage_levels: int = 30,
    max_rounds: int = 10,
    rel_tol: float = 1e-9,
) -> bool:
    """Alternate the two descent stages until a round stops paying off.

    Returns True when the relative energy decrease over a full round fell
    below ``rel_tol`` within the round budget.
    """
    for _ in range(max_rounds):
        energy_before = state.energy
        descend_energy_gradient(state, stage_levels)
        slide_along_se_surface(state, stage_levels)
        if energy_before - state.energy <= rel_tol * max(energy_before, 1e-300):
            return True
    return False


def minimize_energy(
    config: LinkConfig,
    target_se: float | None = None,
    model: EnergyModel = EnergyModel.EXACT,
    receiver: Receiver = HOLEVO,
    stage_levels: int = 30,
    max_rounds: int = 10,
    rel_tol: float = 1e-9,
) -> OptimizationResult:
    """Cheapest gain profile whose SE still reaches ``target_se``.

    The default target is the best heterodyne SE of the same link, i.e.
    the question answered is: how little amplification energy does this
    receiver need to match a fully amplified heterodyne system?

    An unreachable target (the receiver misses it even at full
    amplification) is reported with ``converged=False``, zero savings and
    status ``"infeasible-target"`` instead of raising, so parameter sweeps
    never abort.
    """
    if receiver.kind == "hadamard":
        raise ValueError("the energy minimizer needs a per-pulse SE functional; "
                         "hadamard receivers are rate-only")
    if target_se is None:
        target_se = maximize_shannon_se(config).se_achieved
    if not math.isfinite(target_se) or target_se < 0:
        raise ValueError(f"target SE must be finite and non-negative, got {target_se}")

    off = GainProfile.off(config.segments)
    off_se = se_for(receiver, coefficients_for(config.eta, off.gains), config.photons)
    if off_se >= target_se * (1.0 - SE_SLACK):
        # No amplification already meets the target: zero energy is optimal.
        return _trivial_result(config, off, receiver, model, target_se,
                               converged=True, status="converged")

    full = GainProfile.fully_amplified(config)
    full_se = se_for(receiver, coefficients_for(config.eta, full.gains), config.photons)
    if full_se < target_se * (1.0 - SE_SLACK):
        return _trivial_result(config, full, receiver, model, target_se,
                               converged=False, status="infeasible-target")

    state = GainSearchState.start(config, target_se, receiver, model)
    converged = run_energy_descent(state, stage_levels, max_rounds, rel_tol)

    profile = state.profile()
    e_exact = _energy_exact(state.coeffs, config.photons)
    baseline = shannon_baseline_energy(config)
    return OptimizationResult(
        gains=profile,
        se_achieved=state.se,
        se_target=target_se,
        energy=state.energy,
        energy_exact=e_exact,
        baseline_energy=baseline,
        savings_fraction=1.0 - e_exact / baseline if baseline > 0 else 0.0,
        converged=converged,
        iterations=state.iterations,
        status="converged" if converged else "round-budget",
    )


def minimize_energy_homodyne(
    config: LinkConfig,
    target_se: float | None = None,
    model: EnergyModel = EnergyModel.EXACT,
    **kwargs,
) -> OptimizationResult:
    """Energy minimization with a homodyne receiver holding the SE target."""
    return minimize_energy(config, target_se=target_se, model=model,
                           receiver=HOMODYNE, **kwargs)
