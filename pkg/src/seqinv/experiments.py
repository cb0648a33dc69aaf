"""Monte-Carlo harness for inversion from partial sequences.

A trial draws a full sequence S(N), keeps the prefix S(M), fixes a monomial set
P(m, d) and compares the inverse computed from S(M) with the true predecessor.
The report tests, rather than assumes, the relation P_inv = P_exp * P0, where
P0 is the rate of rank capture (rank on S(M) equal to rank on S(N)) and P_exp
is the reciprocal number of column subsets of maximal rank.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np
from numba import njit

from . import gf2
from .complexity import moc, pci
from .gf2 import BitMatrix
from .golomb import FsrSpec, generate, random_g
from .hankel import BitSequence, HankelSystem, VectorSequence, build_any, reduced_system
from .inversion import solve_invertible
from .localinv import iterate_map, make_permutation_map

DEFAULT_EXACT_CAP = 10**6
DEFAULT_SAMPLES = 4096
SAMPLE_BUDGET = 2 * 10**8  # word operations; large ranks get fewer samples (at least 64)
GENERATORS = ("random", "fsr", "perm")


@dataclass
class ExperimentConfig:
    generator: str = "random"
    N: int = 256
    M: int = 64
    d: int = 2
    trials: int = 100
    seed: int = 0
    allow_constant: bool = False
    exact_cap: int = DEFAULT_EXACT_CAP
    m: Optional[int] = None
    moc_lengths: tuple[int, ...] = ()
    moc_samples: int = 200

    @classmethod
    def parse(cls, text: str) -> "ExperimentConfig":
        """Line-oriented ``key=value``; ``#`` starts a comment."""
        cfg = cls()
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, eq, val = line.partition("=")
            key, val = key.strip(), val.strip()
            if not eq or not val:
                raise ValueError(f"line {lineno}: expected key=value, got {raw!r}")
            if key == "generator":
                cfg.generator = val
            elif key in ("N", "M", "d", "trials", "seed", "moc_samples"):
                setattr(cfg, key, int(val))
            elif key == "exact_cap":
                cfg.exact_cap = int(float(val))
            elif key == "m":
                cfg.m = int(val)
            elif key == "allow_constant":
                cfg.allow_constant = _parse_bool(val)
            elif key == "moc_N":
                cfg.moc_lengths = tuple(int(v) for v in val.split(",") if v.strip())
            else:
                raise ValueError(f"line {lineno}: unknown key {key!r}")
        cfg.validate()
        return cfg

    def validate(self) -> None:
        kind, _ = parse_generator(self.generator)
        if not 1 <= self.M <= self.N:
            raise ValueError("need 1 <= M <= N")
        if self.d < 1 or self.trials < 1:
            raise ValueError("d and trials must be positive")
        if kind == "fsr":
            order = parse_generator(self.generator)[1].get("m", 6)
            if self.N < (1 << order) + order:
                raise ValueError(f"fsr generator of order {order} needs N >= {(1 << order) + order}")


def _parse_bool(val: str) -> bool:
    low = val.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {val!r}")


def parse_generator(text: str) -> tuple[str, dict[str, int]]:
    """``random``, ``fsr[:m=<k>]`` or ``perm[:n=<k>]``."""
    kind, _, rest = text.partition(":")
    kind = kind.strip()
    if kind not in GENERATORS:
        raise ValueError(f"unknown generator {kind!r}")
    params = {}
    for part in filter(None, (p.strip() for p in rest.replace(",", ";").split(";"))):
        k, eq, v = part.partition("=")
        if not eq:
            raise ValueError(f"malformed generator parameter {part!r}")
        params[k.strip()] = int(v)
    allowed = {"random": set(), "fsr": {"m"}, "perm": {"n"}}[kind]
    if set(params) - allowed:
        raise ValueError(f"unexpected parameters for {kind}: {sorted(set(params) - allowed)}")
    return kind, params


@dataclass
class TrialRecord:
    seed: int
    generator: str
    N: int
    M: int
    mset: Optional[str]
    r_M: Optional[int]
    r_N: Optional[int]
    rank_captured: bool
    inverse_correct: Optional[bool]  # None: no ground truth for this trial
    moc_partial: int
    moc_full: int
    subset_count: Optional[float] = None
    subset_exact: Optional[bool] = None
    reason: Optional[str] = None

    @property
    def p_exp(self) -> Optional[float]:
        return 1.0 / self.subset_count if self.subset_count else None


@dataclass
class Rate:
    value: float
    low: float
    high: float
    count: int
    total: int


@dataclass
class MocStat:
    N: int
    samples: int
    mean: float
    std: float
    benchmark: float  # 2 * log2(N)


@dataclass
class ConjectureReport:
    trials: int
    p0_estimate: Optional[Rate]
    p_inv_estimate: Optional[Rate]
    p_inv_given_capture: Optional[Rate]
    p_exp_estimate: Optional[dict]
    conjectured_p_inv: Optional[float]
    maximal_rank_subset_count: Optional[dict]
    indeterminate: int
    moc_stats: list[MocStat] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def trial_seed(master: int, index: int) -> int:
    return int(np.random.SeedSequence([master, index]).generate_state(1, dtype=np.uint64)[0])


@njit(cache=True)
def _insert(v, basis, piv, k):
    """Reduce ``v`` by the first ``k`` basis rows; return its pivot bit or -1 if dependent."""
    for i in range(k):
        p = piv[i]
        if (v[p >> 6] >> np.uint64(p & 63)) & np.uint64(1):
            v ^= basis[i]
    for w in range(v.size):
        if v[w]:
            x = v[w]
            b = 0
            while not (x >> np.uint64(b)) & np.uint64(1):
                b += 1
            return w * 64 + b
    return -1


@njit(cache=True)
def _count_bases(cols, r):
    # Depth-first over increasing column indices; a dependent column prunes every superset.
    n = cols.shape[0]
    pos = np.zeros(r, np.int64)
    basis = np.zeros((r, cols.shape[1]), np.uint64)
    piv = np.zeros(r, np.int64)
    count = 0
    depth = 0
    while depth >= 0:
        j = pos[depth]
        if j > n - (r - depth):
            depth -= 1
            if depth >= 0:
                pos[depth] += 1
            continue
        v = cols[j].copy()
        b = _insert(v, basis, piv, depth)
        if b < 0:
            pos[depth] += 1
            continue
        if depth == r - 1:
            count += 1
            pos[depth] += 1
            continue
        basis[depth] = v
        piv[depth] = b
        depth += 1
        pos[depth] = j + 1
    return count


@njit(cache=True)
def _count_sampled(cols, r, picks):
    basis = np.zeros((r, cols.shape[1]), np.uint64)
    piv = np.zeros(r, np.int64)
    hits = 0
    for s in range(picks.shape[0]):
        ok = True
        for k in range(r):
            v = cols[picks[s, k]].copy()
            b = _insert(v, basis, piv, k)
            if b < 0:
                ok = False
                break
            basis[k] = v
            piv[k] = b
        if ok:
            hits += 1
    return hits


def count_maximal_rank_subsets(
    sys: HankelSystem | BitMatrix,
    exact_cap: int = DEFAULT_EXACT_CAP,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
) -> tuple[float, bool]:
    """Number of r-column subsets of rank r (r = rank), exact or estimated by uniform sampling."""
    mat = sys.matrix() if isinstance(sys, HankelSystem) else sys
    # Row operations keep the column matroid, so work on a row basis only.
    work, piv = gf2._rref(mat)
    r = len(piv)
    if r == 0:
        return 1, True
    n = mat.cols
    cols = gf2._pack(np.ascontiguousarray(gf2._unpack(np.asarray(work)[:r], n).T))
    total = math.comb(n, r)
    if total <= exact_cap:
        return int(_count_bases(cols, r)), True
    samples = max(64, min(samples, SAMPLE_BUDGET // (r * r * cols.shape[1])))
    rng = np.random.default_rng(seed)
    picks = np.stack([rng.choice(n, r, replace=False) for _ in range(samples)])
    return total * _count_sampled(cols, r, picks) / samples, False


def _moc_of(seq) -> int:
    if isinstance(seq, VectorSequence):
        return max(moc(c) for c in seq.coords)
    return moc(seq)


def _prefix(seq, M: int):
    if isinstance(seq, VectorSequence):
        return VectorSequence.from_array(seq.array()[:, :M])
    return BitSequence.from_bits(seq.array()[:M])


def run_trial(
    generator: str,
    N: int,
    M: int,
    d: int,
    seed: int,
    allow_constant: bool = False,
    m: Optional[int] = None,
    exact_cap: int = DEFAULT_EXACT_CAP,
) -> TrialRecord:
    kind, params = parse_generator(generator)
    if not 1 <= M <= N:
        raise ValueError("need 1 <= M <= N")
    rng = np.random.default_rng(seed)
    truth = None
    if kind == "random":
        full = BitSequence.from_bits(rng.integers(0, 2, N))
    elif kind == "fsr":
        order = params.get("m", 6)
        if N < (1 << order) + order:
            raise ValueError(f"fsr generator of order {order} needs N >= {(1 << order) + order}")
        spec = FsrSpec(order, random_g(rng, order, d, allow_constant))
        state = rng.integers(0, 2, order).tolist()
        full = generate(spec, state, N)
        truth = np.array([state[order - 1] ^ spec.g.evaluate([0] + state[: order - 1])], np.uint8)
        if m is None:
            m = order
    else:
        n = params.get("n", 8)
        fmap = make_permutation_map(int(rng.integers(0, 2**63)), n)
        y = rng.integers(0, 2, n).tolist()
        full = iterate_map(fmap, y, N)
        table = np.array([fmap.apply_int(x) for x in range(1 << n)])
        target = sum(b << i for i, b in enumerate(y))
        pre = int(np.argmax(table == target))
        truth = np.array([(pre >> i) & 1 for i in range(n)], np.uint8)

    partial = _prefix(full, M)
    rec = TrialRecord(
        seed=seed,
        generator=generator,
        N=N,
        M=M,
        mset=None,
        r_M=None,
        r_N=None,
        rank_captured=False,
        inverse_correct=False,
        moc_partial=_moc_of(partial) if M >= 2 else 0,
        moc_full=_moc_of(full),
    )
    if m is None:
        rep = pci(partial, d, allow_constant)
        if rep.m is None:
            rec.reason = f"pci: {rep.status}"
            return rec
        m = rep.m
    if m < d or m >= M:
        rec.reason = f"order {m} unusable for M={M}, d={d}"
        return rec
    rec.mset = f"P({m},{d}){'+1' if allow_constant else ''}"
    sys_m = build_any(partial, m, d, allow_constant)
    sys_n = reduced_system(full, m, d, allow_constant)
    rec.r_M = gf2.rank(sys_m.matrix())
    rec.r_N = gf2.rank(sys_n.matrix())
    rec.rank_captured = rec.r_M == rec.r_N
    rec.subset_count, rec.subset_exact = count_maximal_rank_subsets(sys_m, exact_cap, seed=seed & 0xFFFFFFFF)

    sol = solve_invertible(sys_m)
    if sol is None:
        rec.reason = "no invertible solution on the partial sequence"
        return rec
    if truth is None:
        full_sol = solve_invertible(sys_n)
        if full_sol is None:
            rec.inverse_correct = None
            rec.reason = "indeterminate: full sequence has no inverse at this order"
            return rec
        truth = full_sol.inverse.to_array()
    rec.inverse_correct = bool(np.array_equal(sol.inverse.to_array(), truth))
    return rec


def run(cfg: ExperimentConfig) -> list[TrialRecord]:
    cfg.validate()
    return [
        run_trial(cfg.generator, cfg.N, cfg.M, cfg.d, trial_seed(cfg.seed, i), cfg.allow_constant, cfg.m, cfg.exact_cap)
        for i in range(cfg.trials)
    ]


def wilson(successes: int, total: int, alpha: float = 0.05) -> Rate:
    from statsmodels.stats.proportion import proportion_confint

    low, high = proportion_confint(successes, total, alpha=alpha, method="wilson")
    return Rate(successes / total, float(low), float(high), successes, total)


def moc_study(lengths, samples: int, seed: int) -> list[MocStat]:
    """MOC of ``samples`` uniform random sequences at each length."""
    out = []
    for k, N in enumerate(lengths):
        rng = np.random.default_rng(np.random.SeedSequence([seed, 1, k]))
        vals = np.array([moc(BitSequence.from_bits(rng.integers(0, 2, N))) for _ in range(samples)], float)
        out.append(MocStat(N, samples, float(vals.mean()), float(vals.std(ddof=1)) if samples > 1 else 0.0, 2 * math.log2(N)))
    return out


def estimate(records: list[TrialRecord], moc_stats: Optional[list[MocStat]] = None) -> ConjectureReport:
    if not records:
        raise ValueError("need at least one trial record")
    total = len(records)
    captured = [r for r in records if r.rank_captured]
    determinate = [r for r in records if r.inverse_correct is not None]
    p0 = wilson(len(captured), total)
    p_inv = wilson(sum(r.inverse_correct for r in determinate), len(determinate)) if determinate else None
    cap_det = [r for r in captured if r.inverse_correct is not None]
    p_cap = wilson(sum(r.inverse_correct for r in cap_det), len(cap_det)) if cap_det else None

    pexp = [r.p_exp for r in captured if r.p_exp is not None]
    p_exp = None
    if pexp:
        arr = np.array(pexp)
        half = 1.96 * arr.std(ddof=1) / math.sqrt(arr.size) if arr.size > 1 else 0.0
        p_exp = {"value": float(arr.mean()), "low": float(arr.mean() - half), "high": float(arr.mean() + half), "count": int(arr.size)}

    counts = [r.subset_count for r in records if r.subset_count is not None]
    subsets = None
    if counts:
        subsets = {
            "mean": float(np.mean(counts)),
            "min": float(np.min(counts)),
            "max": float(np.max(counts)),
            "exact": all(r.subset_exact for r in records if r.subset_count is not None),
        }

    stats = list(moc_stats or [])
    by_n: dict[int, list[int]] = {}
    for r in records:
        by_n.setdefault(r.N, []).append(r.moc_full)
    for N, vals in sorted(by_n.items()):
        if any(s.N == N for s in stats):
            continue
        arr = np.array(vals, float)
        stats.append(MocStat(N, arr.size, float(arr.mean()), float(arr.std(ddof=1)) if arr.size > 1 else 0.0, 2 * math.log2(N)))

    return ConjectureReport(
        trials=total,
        p0_estimate=p0,
        p_inv_estimate=p_inv,
        p_inv_given_capture=p_cap,
        p_exp_estimate=p_exp,
        conjectured_p_inv=p_exp["value"] * p0.value if p_exp else None,
        maximal_rank_subset_count=subsets,
        indeterminate=total - len(determinate),
        moc_stats=stats,
    )


def run_config(cfg: ExperimentConfig) -> tuple[list[TrialRecord], ConjectureReport]:
    records = run(cfg)
    stats = moc_study(cfg.moc_lengths, cfg.moc_samples, cfg.seed) if cfg.moc_lengths else None
    return records, estimate(records, stats)
