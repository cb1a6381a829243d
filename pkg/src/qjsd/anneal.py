"""Simulated-annealing minimization of the triangle defect of the quantum
Jensen-Shannon metric candidate.

A triplet of states (rho, xi, sigma) is encoded as three unconstrained real
blocks, each decoding to a state through A -> A A† / Tr(A A†), so every
proposal is a valid triplet and no repair step is needed. Proposals are
Gaussian with standard deviation proportional to the current temperature;
acceptance is Metropolis. The minimizer is deliberately adversarial: a
negative best objective would be a counterexample to the triangle
inequality and is surfaced loudly by the CLI, never clipped.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .divergences import entropy_from_eigenvalues
from .errors import DegenerateBlock, InvalidConfig
from .states import derive_seed, state_to_dict

_TRACE_FLOOR = 1e-30


@dataclass(frozen=True)
class AnnealSchedule:
    """Geometric cooling schedule with temperature-scaled proposals."""

    steps_per_temperature: int
    t_initial: float = 1.0
    t_final: float = 1e-6
    cooling_ratio: float = 0.95
    proposal_scale_ratio: float = 1.0

    def validate(self) -> "AnnealSchedule":
        if not self.t_initial > self.t_final > 0.0:
            raise InvalidConfig(f"need t_initial > t_final > 0, got {self.t_initial}, {self.t_final}")
        if not 0.0 < self.cooling_ratio < 1.0:
            raise InvalidConfig(f"cooling_ratio must lie in (0, 1), got {self.cooling_ratio}")
        if self.steps_per_temperature < 1:
            raise InvalidConfig(f"steps_per_temperature must be >= 1, got {self.steps_per_temperature}")
        if not self.proposal_scale_ratio > 0.0:
            raise InvalidConfig(f"proposal_scale_ratio must be > 0, got {self.proposal_scale_ratio}")
        return self

    @classmethod
    def defaults_for(cls, n_params: int) -> "AnnealSchedule":
        """Default budget: 200 chain steps per temperature per parameter."""
        return cls(steps_per_temperature=200 * n_params)


def decode_state(block: np.ndarray, dim: int) -> np.ndarray:
    """Decode 2*dim^2 reals into a density matrix via A A† / Tr(A A†).

    Scale-invariant: any nonzero rescaling of the block decodes to the same
    state. Raises DegenerateBlock when the trace underflows.
    """
    x = np.asarray(block, dtype=np.float64).reshape(2, dim, dim)
    a = x[0] + 1j * x[1]
    g = a @ a.conj().T
    tr = float(np.trace(g).real)
    if tr <= _TRACE_FLOOR:
        raise DegenerateBlock(f"Tr(A A†) = {tr!r}")
    return g / tr


def _decode_triplet(params: np.ndarray, dim: int) -> np.ndarray:
    x = np.asarray(params, dtype=np.float64).reshape(3, 2, dim, dim)
    a = x[:, 0] + 1j * x[:, 1]
    g = a @ np.conj(np.swapaxes(a, -2, -1))
    tr = np.trace(g, axis1=-2, axis2=-1).real
    if np.min(tr) <= _TRACE_FLOOR:
        raise DegenerateBlock(f"Tr(A A†) = {float(np.min(tr))!r}")
    return g / tr[:, None, None]


def _pairwise_sqrt_distances(states: np.ndarray) -> tuple[float, float, float]:
    """d(rho,xi), d(xi,sigma), d(rho,sigma) for a (3, N, N) stack."""
    dim = states.shape[-1]
    mats = np.empty((6, dim, dim), dtype=np.complex128)
    mats[:3] = states
    mats[3] = (states[0] + states[1]) / 2.0
    mats[4] = (states[1] + states[2]) / 2.0
    mats[5] = (states[0] + states[2]) / 2.0
    h = entropy_from_eigenvalues(np.linalg.eigvalsh(mats))
    d01 = math.sqrt(max(h[3] - 0.5 * (h[0] + h[1]), 0.0))
    d12 = math.sqrt(max(h[4] - 0.5 * (h[1] + h[2]), 0.0))
    d02 = math.sqrt(max(h[5] - 0.5 * (h[0] + h[2]), 0.0))
    return d01, d12, d02


def objective_single(params: np.ndarray, dim: int) -> float:
    """Triangle defect d(rho,xi) + d(xi,sigma) - d(rho,sigma) of the decoded triplet."""
    d01, d12, d02 = _pairwise_sqrt_distances(_decode_triplet(params, dim))
    return d01 + d12 - d02


def objective_symmetrized(params: np.ndarray, dim: int) -> float:
    """Mean triangle defect over the three choices of pivot state."""
    d01, d12, d02 = _pairwise_sqrt_distances(_decode_triplet(params, dim))
    return ((d01 + d12 - d02) + (d01 + d02 - d12) + (d02 + d12 - d01)) / 3.0


_OBJECTIVES = {"single": objective_single, "symmetrized": objective_symmetrized}


def _normalize_blocks(params: np.ndarray, dim: int) -> np.ndarray:
    """Rescale each block to Frobenius norm sqrt(dim); decode-equivalent.

    Without this, the block norms random-walk upward during the hot phase and
    the temperature-scaled proposals stop moving the decoded states.
    """
    b = params.reshape(3, -1)
    nrm = np.linalg.norm(b, axis=1, keepdims=True) / math.sqrt(dim)
    return (b / np.where(nrm > 0.0, nrm, 1.0)).reshape(-1)


def _chain(
    objective: Callable[[np.ndarray], float],
    n_params: int,
    schedule: AnnealSchedule,
    rng: np.random.Generator,
    canonicalize: Callable[[np.ndarray], np.ndarray] | None,
) -> tuple[float, np.ndarray, list[float]]:
    """One Metropolis chain through the cooling schedule; returns best-ever."""
    x = rng.standard_normal(n_params)
    if canonicalize is not None:
        x = canonicalize(x)
    fx = objective(x)
    best_f, best_x = fx, x.copy()
    trace: list[float] = []
    t = schedule.t_initial
    while t > schedule.t_final:
        sigma = schedule.proposal_scale_ratio * t
        for _ in range(schedule.steps_per_temperature):
            cand = x + sigma * rng.standard_normal(n_params)
            fc = objective(cand)
            if fc <= fx:
                accept = True
            else:
                delta = (fc - fx) / t
                accept = delta < 700.0 and rng.random() < math.exp(-delta)
            if accept:
                x = canonicalize(cand) if canonicalize is not None else cand
                fx = fc
                if fc < best_f:
                    best_f, best_x = fc, x.copy()
        trace.append(best_f)
        t *= schedule.cooling_ratio
    return best_f, best_x, trace


def minimize(
    objective: Callable[[np.ndarray], float],
    n_params: int,
    schedule: AnnealSchedule,
    seed: int = 0,
    restarts: int = 1,
    canonicalize: Callable[[np.ndarray], np.ndarray] | None = None,
) -> tuple[float, np.ndarray, list[list[float]]]:
    """Best-of-restarts annealing; each restart owns a derived RNG stream."""
    schedule.validate()
    if restarts < 1:
        raise InvalidConfig(f"restarts must be >= 1, got {restarts}")
    best_f, best_x = math.inf, None
    traces: list[list[float]] = []
    for r in range(restarts):
        rng = np.random.default_rng(derive_seed(seed, r))
        f, x, trace = _chain(objective, n_params, schedule, rng, canonicalize)
        traces.append(trace)
        if f < best_f:
            best_f, best_x = f, x
    return best_f, best_x, traces


@dataclass
class AnnealResult:
    """Outcome of an annealing run over state triplets."""

    best_objective: float
    best_params: np.ndarray
    decoded_states: list[np.ndarray]
    objective_trace: list[list[float]] = field(repr=False)
    seed: int = 0
    dim: int = 2
    objective: str = "single"
    schedule: AnnealSchedule | None = None


def _run_restart(objective_name: str, dim: int, schedule: AnnealSchedule, seed: int, restart: int):
    """Top-level single-restart driver, picklable for process pools."""
    obj = _OBJECTIVES[objective_name]
    n_params = 6 * dim * dim
    rng = np.random.default_rng(derive_seed(seed, restart))
    return _chain(
        lambda x: obj(x, dim), n_params, schedule, rng,
        lambda x: _normalize_blocks(x, dim),
    )


def run_anneal(
    objective: str,
    dim: int,
    schedule: AnnealSchedule | None = None,
    seed: int = 0,
    restarts: int = 1,
    workers: int = 1,
) -> AnnealResult:
    """Anneal a state triplet against the chosen defect objective.

    Deterministic given (objective, dim, schedule, seed, restarts), no matter
    how many workers execute the restarts.
    """
    if objective not in _OBJECTIVES:
        raise InvalidConfig(f"objective must be one of {sorted(_OBJECTIVES)}, got {objective!r}")
    if dim < 2:
        raise InvalidConfig(f"dim must be >= 2, got {dim}")
    if restarts < 1:
        raise InvalidConfig(f"restarts must be >= 1, got {restarts}")
    n_params = 6 * dim * dim
    if schedule is None:
        schedule = AnnealSchedule.defaults_for(n_params)
    schedule.validate()

    if workers > 1 and restarts > 1:
        with ProcessPoolExecutor(max_workers=min(workers, restarts)) as pool:
            outcomes = list(
                pool.map(
                    _run_restart,
                    [objective] * restarts,
                    [dim] * restarts,
                    [schedule] * restarts,
                    [seed] * restarts,
                    range(restarts),
                )
            )
    else:
        outcomes = [_run_restart(objective, dim, schedule, seed, r) for r in range(restarts)]

    best_f, best_x = math.inf, None
    traces = []
    for f, x, trace in outcomes:
        traces.append(trace)
        if f < best_f:
            best_f, best_x = f, x
    states = list(_decode_triplet(best_x, dim))
    if objective == "single":
        # The defect is exactly invariant under exchanging the outer states,
        # so the minimum's degenerate branch (pivot = one outer state) carries
        # arbitrary labels; orient the orbit so the merged pair is (rho, xi).
        if np.linalg.norm(states[1] - states[2]) < np.linalg.norm(states[1] - states[0]):
            states = [states[2], states[1], states[0]]
            blocks = best_x.reshape(3, -1)
            best_x = np.concatenate([blocks[2], blocks[1], blocks[0]])
    return AnnealResult(
        best_objective=best_f,
        best_params=best_x,
        decoded_states=states,
        objective_trace=traces,
        seed=seed,
        dim=dim,
        objective=objective,
        schedule=schedule,
    )


def result_to_dict(result: AnnealResult) -> dict:
    sched = result.schedule
    return {
        "best_objective": result.best_objective,
        "seed": result.seed,
        "dim": result.dim,
        "objective": result.objective,
        "schedule": {
            "t_initial": sched.t_initial,
            "t_final": sched.t_final,
            "cooling_ratio": sched.cooling_ratio,
            "steps_per_temperature": sched.steps_per_temperature,
            "proposal_scale_ratio": sched.proposal_scale_ratio,
        },
        "decoded_states": [state_to_dict(s) for s in result.decoded_states],
        "objective_trace": result.objective_trace,
    }
