"""Monte Carlo audit of the triangle inequality for the square root of the
quantum Jensen-Shannon divergence.

Each triplet index hashes to its own RNG seed, so a run is reproducible
triplet by triplet: the report records the seeds of the smallest defects
found, and feeding such a seed to a StateSampler regenerates that triplet
exactly, bit for bit, with no dependence on worker count or scheduling.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .divergences import entropy_from_eigenvalues, qjsd_sqrt
from .errors import DimMismatch, EdgeMismatch, InvalidConfig
from .states import derive_seed, draw_state_params, states_from_params

log = logging.getLogger("qjsd.audit")

_CHUNK = 512  # triplets per batched linear-algebra pass
_K_SMALLEST = 10


def triangle_defect(rho, xi, sigma) -> float:
    """d(rho, xi) + d(xi, sigma) - d(rho, sigma) with d the sqrt-QJSD.

    The middle argument is the pivot. Nonnegative everywhere if the triangle
    inequality holds; the audit hunts for counterexamples.
    """
    a = np.asarray(rho)
    if a.shape != np.asarray(xi).shape or a.shape != np.asarray(sigma).shape:
        raise DimMismatch("triplet states must share one dimension")
    return qjsd_sqrt(rho, xi) + qjsd_sqrt(xi, sigma) - qjsd_sqrt(rho, sigma)


@dataclass(frozen=True)
class Histogram:
    """Fixed-edge counting histogram with explicit under/overflow bins."""

    bin_edges: np.ndarray
    counts: np.ndarray
    underflow_count: int
    overflow_count: int
    total: int

    def probabilities(self) -> np.ndarray:
        if self.total == 0:
            return np.zeros_like(self.counts, dtype=np.float64)
        return self.counts / self.total


def histogram_edges(bin_width: float, tail_max: float) -> np.ndarray:
    """Edges tiling [-tail_max, tail_max) in steps of bin_width."""
    if bin_width <= 0.0 or tail_max <= 0.0:
        raise InvalidConfig("bin_width and tail_max must be positive")
    nbins = int(round(2.0 * tail_max / bin_width))
    if nbins < 1 or abs(nbins * bin_width - 2.0 * tail_max) > 1e-9:
        raise InvalidConfig(
            f"bin_width {bin_width} does not tile [-{tail_max}, {tail_max})"
        )
    return -tail_max + bin_width * np.arange(nbins + 1)


def histogram_merge(a: Histogram, b: Histogram) -> Histogram:
    """Componentwise sum of two histograms over identical edges."""
    if a.bin_edges.shape != b.bin_edges.shape or not np.array_equal(a.bin_edges, b.bin_edges):
        raise EdgeMismatch("histograms have different bin edges")
    return Histogram(
        bin_edges=a.bin_edges,
        counts=a.counts + b.counts,
        underflow_count=a.underflow_count + b.underflow_count,
        overflow_count=a.overflow_count + b.overflow_count,
        total=a.total + b.total,
    )


@dataclass(frozen=True)
class TriangleSample:
    """One audited triplet: its defect and the seed that regenerates it."""

    defect: float
    triplet_index: int
    triplet_seed: int


@dataclass(frozen=True)
class AuditReport:
    dim: int
    samples: int
    seed: int
    tolerance: float
    violations: int
    noise_negatives: int  # defects in (-tolerance, 0), attributed to round-off
    min_defect: float
    histogram: Histogram
    smallest: tuple[TriangleSample, ...]
    mixedness_floor: float | None = None


def _shard(args) -> tuple:
    """Audit triplet indices [start, stop); returns partial tallies."""
    dim, seed, floor, start, stop, edges, tolerance = args
    nbins = edges.size - 1
    counts = np.zeros(nbins, dtype=np.int64)
    underflow = overflow = violations = noise = 0
    min_defect = math.inf
    smallest: list[TriangleSample] = []
    for lo in range(start, stop, _CHUNK):
        hi = min(lo + _CHUNK, stop)
        n = hi - lo
        zs = np.empty((n, 3, dim, dim), dtype=np.complex128)
        lams = np.empty((n, 3, dim), dtype=np.float64)
        seeds = np.empty(n, dtype=np.uint64)
        for j, idx in enumerate(range(lo, hi)):
            ts = derive_seed(seed, idx)
            seeds[j] = ts
            rng = np.random.default_rng(ts)
            for t in range(3):
                z, lam = draw_state_params(rng, dim, floor)
                zs[j, t] = z
                lams[j, t] = lam
        rhos = states_from_params(zs.reshape(-1, dim, dim), lams.reshape(-1, dim))
        rhos = rhos.reshape(n, 3, dim, dim)
        mids = np.empty((n, 3, dim, dim), dtype=np.complex128)
        mids[:, 0] = (rhos[:, 0] + rhos[:, 1]) / 2.0
        mids[:, 1] = (rhos[:, 1] + rhos[:, 2]) / 2.0
        mids[:, 2] = (rhos[:, 0] + rhos[:, 2]) / 2.0
        # state entropies come from the sampled spectra (rho = U diag(lam) U†)
        h_state = entropy_from_eigenvalues(lams)
        h_mid = entropy_from_eigenvalues(np.linalg.eigvalsh(mids.reshape(-1, dim, dim)))
        h_mid = h_mid.reshape(n, 3)
        d01 = np.sqrt(np.maximum(h_mid[:, 0] - 0.5 * (h_state[:, 0] + h_state[:, 1]), 0.0))
        d12 = np.sqrt(np.maximum(h_mid[:, 1] - 0.5 * (h_state[:, 1] + h_state[:, 2]), 0.0))
        d02 = np.sqrt(np.maximum(h_mid[:, 2] - 0.5 * (h_state[:, 0] + h_state[:, 2]), 0.0))
        defects = d01 + d12 - d02

        pos = np.searchsorted(edges, defects, side="right") - 1
        underflow += int(np.count_nonzero(pos < 0))
        overflow += int(np.count_nonzero(pos >= nbins))
        inside = (pos >= 0) & (pos < nbins)
        counts += np.bincount(pos[inside], minlength=nbins)
        violations += int(np.count_nonzero(defects < -tolerance))
        noise += int(np.count_nonzero((defects < 0.0) & (defects >= -tolerance)))
        min_defect = min(min_defect, float(defects.min()))
        order = np.argsort(defects, kind="stable")[:_K_SMALLEST]
        smallest.extend(
            TriangleSample(float(defects[j]), lo + int(j), int(seeds[j])) for j in order
        )
        smallest.sort(key=lambda s: (s.defect, s.triplet_index))
        del smallest[_K_SMALLEST:]
    return counts, underflow, overflow, violations, noise, min_defect, smallest, stop - start


def run_audit(
    dim: int,
    samples: int,
    seed: int,
    bin_width: float = 0.002,
    tail_max: float = 0.2,
    tolerance: float = 1e-9,
    mixedness_floor: float | None = None,
    workers: int = 1,
) -> AuditReport:
    """Audit `samples` random triplets of dimension `dim` for triangle defects.

    The histogram resolves the tail [-tail_max, tail_max) at bin_width, with
    anything above falling into the overflow bin. Defects below -tolerance
    count as violations; defects in (-tolerance, 0) are logged as round-off
    noise. The report is identical for any worker count.
    """
    if dim < 2:
        raise InvalidConfig(f"dim must be >= 2, got {dim}")
    if samples < 1:
        raise InvalidConfig(f"samples must be >= 1, got {samples}")
    if tolerance < 0.0:
        raise InvalidConfig(f"tolerance must be >= 0, got {tolerance}")
    if workers < 1:
        raise InvalidConfig(f"workers must be >= 1, got {workers}")
    if mixedness_floor is not None and not 0.0 <= mixedness_floor < 1.0:
        raise InvalidConfig(f"mixedness_floor must lie in [0, 1), got {mixedness_floor}")
    edges = histogram_edges(bin_width, tail_max)

    # shard boundaries sit on chunk multiples so batch compositions, and hence
    # every floating-point result, match the single-worker run exactly
    n_chunks = (samples + _CHUNK - 1) // _CHUNK
    n_workers = max(1, min(workers, n_chunks))
    per, extra = divmod(n_chunks, n_workers)
    bounds = [0]
    for w in range(n_workers):
        bounds.append(bounds[-1] + per + (1 if w < extra else 0))
    shards = [
        (dim, seed, mixedness_floor, bounds[w] * _CHUNK, min(bounds[w + 1] * _CHUNK, samples),
         edges, tolerance)
        for w in range(n_workers)
    ]

    if n_workers > 1:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            parts = list(pool.map(_shard, shards))
    else:
        parts = [_shard(s) for s in shards]

    counts = np.zeros(edges.size - 1, dtype=np.int64)
    underflow = overflow = violations = noise = total = 0
    min_defect = math.inf
    smallest: list[TriangleSample] = []
    for c, u, o, v, nn, md, sm, tot in parts:
        counts += c
        underflow += u
        overflow += o
        violations += v
        noise += nn
        total += tot
        min_defect = min(min_defect, md)
        smallest.extend(sm)
    smallest.sort(key=lambda s: (s.defect, s.triplet_index))
    del smallest[_K_SMALLEST:]

    if noise:
        log.info("dim=%d seed=%d: %d defects in (-%g, 0) attributed to round-off", dim, seed, noise, tolerance)
    if violations:
        log.warning("dim=%d seed=%d: %d TRIANGLE VIOLATIONS below -%g", dim, seed, violations, tolerance)

    hist = Histogram(
        bin_edges=edges,
        counts=counts,
        underflow_count=underflow,
        overflow_count=overflow,
        total=total,
    )
    return AuditReport(
        dim=dim,
        samples=samples,
        seed=seed,
        tolerance=tolerance,
        violations=violations,
        noise_negatives=noise,
        min_defect=min_defect,
        histogram=hist,
        smallest=tuple(smallest),
        mixedness_floor=mixedness_floor,
    )


def regenerate_triplet(dim: int, triplet_seed: int, mixedness_floor: float | None = None):
    """Rebuild the (rho, xi, sigma) triplet recorded for a TriangleSample."""
    rng = np.random.default_rng(triplet_seed)
    out = []
    for _ in range(3):
        z, lam = draw_state_params(rng, dim, mixedness_floor)
        out.append(states_from_params(z[None], lam[None])[0])
    return tuple(out)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def histogram_csv(hist: Histogram) -> str:
    """CSV with one row per bin plus underflow/overflow comment rows.

    Probabilities are per-bin counts over the full sample total, printed to
    12 significant digits.
    """
    lines = ["bin_low,bin_high,count,probability"]
    probs = hist.probabilities()
    for i in range(hist.counts.size):
        lines.append(
            f"{hist.bin_edges[i]:.12g},{hist.bin_edges[i + 1]:.12g},"
            f"{int(hist.counts[i])},{probs[i]:.12g}"
        )
    lines.append(f"# underflow,{hist.underflow_count}")
    lines.append(f"# overflow,{hist.overflow_count}")
    return "\n".join(lines) + "\n"


def write_histogram_csv(hist: Histogram, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(histogram_csv(hist))


def report_to_dict(report: AuditReport) -> dict:
    return {
        "dim": report.dim,
        "samples": report.samples,
        "seed": report.seed,
        "tolerance": report.tolerance,
        "violations": report.violations,
        "noise_negatives": report.noise_negatives,
        "min_defect": report.min_defect,
        "mixedness_floor": report.mixedness_floor,
        "histogram": {
            "bin_edges": [float(e) for e in report.histogram.bin_edges],
            "counts": [int(c) for c in report.histogram.counts],
            "underflow_count": report.histogram.underflow_count,
            "overflow_count": report.histogram.overflow_count,
            "total": report.histogram.total,
        },
        "smallest_defects": [
            {"defect": s.defect, "triplet_index": s.triplet_index, "triplet_seed": s.triplet_seed}
            for s in report.smallest
        ],
    }
