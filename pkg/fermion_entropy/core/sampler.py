"""本征值的蒙特卡罗采样与熵统计

Metropolis 对数气体采样适用于两种情形；情形 B 另有 Haar 酉矩阵模型，
情形 A 的正交矩阵模型只作为实验性交叉检查。
"""
import csv
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy import stats

from .config import SamplerSettings, Settings
from .exceptions import DomainError, TuningError
from .kernel import EnsembleSpec
from .moments import LN2, MomentReport, entropy_v_halves, gaussian_density, standardize

logger = logging.getLogger(__name__)

SAMPLE_METHODS = ('mcmc', 'matrix_B', 'matrix_A')
STREAMS = 4
MATRIX_CHUNK = 2000


@dataclass
class McmcDiagnostics:
    """Metropolis 链诊断信息，burn_in 与 thinning 以单坐标步数计"""
    acceptance_rate: float
    burn_in: int
    thinning: int
    step_sizes: List[float] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class SampleBatch:
    """一批本征值构型及其熵"""
    spec: EnsembleSpec
    configs: np.ndarray
    entropies: np.ndarray
    seed: int
    method: str = 'mcmc'
    mcmc_diag: Optional[McmcDiagnostics] = None

    def __post_init__(self):
        if self.method not in SAMPLE_METHODS:
            raise DomainError(f"未知的采样方法: {self.method}")
        self.configs = np.asarray(self.configs, dtype=float).reshape(-1, self.spec.m)
        self.entropies = np.asarray(self.entropies, dtype=float).ravel()
        if len(self.configs) != len(self.entropies):
            raise DomainError(f"构型数 {len(self.configs)} 与熵的个数 {len(self.entropies)} 不一致")
        low, high = self.spec.support
        if self.configs.size and (self.configs.min() < low or self.configs.max() > high):
            raise DomainError(f"本征值超出支撑 [{low}, {high}]")
        upper = self.spec.m * LN2
        if self.entropies.size and (self.entropies.min() < -1e-12 or self.entropies.max() > upper + 1e-12):
            raise DomainError(f"熵超出 [0, {upper}]")

    def __len__(self) -> int:
        return len(self.entropies)


@dataclass
class GaussianCheck:
    """标准化熵与标准正态分布的比较"""
    ks_distance: float
    ks_pvalue: float
    sample_skewness: float
    standardized: np.ndarray
    degenerate: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            'ks_distance': self.ks_distance,
            'ks_pvalue': self.ks_pvalue,
            'sample_skewness': self.sample_skewness,
            'degenerate': self.degenerate,
        }


def entropies_of(configs: np.ndarray) -> np.ndarray:
    """每个构型的熵 S = −Σ v(x_i)"""
    configs = np.asarray(configs, dtype=float)
    v = entropy_v_halves((1.0 + configs) / 2.0, (1.0 - configs) / 2.0)
    return -np.sum(np.atleast_2d(v), axis=1)


def _stream(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, index])))


def _split(total: int, parts: int) -> List[int]:
    base, extra = divmod(total, parts)
    return [base + (1 if i < extra else 0) for i in range(parts)]


def _run_streams(task: Callable[[int, int], Any], sizes: List[int], threads: int) -> List[Any]:
    """按流编号并行执行，结果按编号排列"""
    jobs = [(i, size) for i, size in enumerate(sizes) if size > 0]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda job: task(*job), jobs))


# ---------------------------------------------------------------------------
# Metropolis 对数气体


def _log_density_delta(spec: EnsembleSpec, states: np.ndarray, i: int, proposal: np.ndarray) -> np.ndarray:
    """把第 i 个坐标换成 proposal 时对数密度的变化；支撑外为 −inf"""
    gamma, a, b = spec.gamma, spec.a, spec.b
    low, high = spec.support
    current = states[:, i]
    delta = np.zeros_like(current)
    with np.errstate(divide='ignore', invalid='ignore'):
        if spec.m > 1:
            others = np.delete(states, i, axis=1) ** gamma
            new_gap = np.log(np.abs(proposal[:, None] ** gamma - others))
            old_gap = np.log(np.abs(current[:, None] ** gamma - others))
            delta += 2.0 * np.sum(new_gap - old_gap, axis=1)
        if a:
            delta += a * (np.log1p(-proposal) - np.log1p(-current))
        if b:
            delta += b * (np.log1p(proposal) - np.log1p(current))
    outside = (proposal <= low) | (proposal >= high)
    delta[outside | np.isnan(delta)] = -np.inf
    return delta


def _sweep(spec: EnsembleSpec, states: np.ndarray, steps: np.ndarray,
           rng: np.random.Generator) -> np.ndarray:
    """对所有链依次更新每个坐标，返回各坐标的接受次数"""
    chains, m = states.shape
    accepted = np.zeros(m, dtype=np.int64)
    for i in range(m):
        proposal = states[:, i] + steps[i] * rng.standard_normal(chains)
        delta = _log_density_delta(spec, states, i, proposal)
        accept = np.log(rng.random(chains)) < delta
        states[accept, i] = proposal[accept]
        accepted[i] = np.count_nonzero(accept)
    return accepted


def _initial_states(spec: EnsembleSpec, chains: int, rng: np.random.Generator) -> np.ndarray:
    low, high = spec.support
    width = high - low
    return low + width * (0.05 + 0.9 * rng.random((chains, spec.m)))


def _run_chains(spec: EnsembleSpec, chains: int, per_chain: int, rng: np.random.Generator,
                tuning: SamplerSettings) -> Tuple[np.ndarray, int, int, np.ndarray]:
    """一组链：自适应 burn-in 后步长冻结，按 thinning 抽取构型"""
    m = spec.m
    states = _initial_states(spec, chains, rng)
    steps = np.full(m, tuning.initial_step * (spec.support[1] - spec.support[0]))
    window = np.zeros(m, dtype=np.int64)
    for sweep in range(1, tuning.burn_in_factor + 1):
        window += _sweep(spec, states, steps, rng)
        if sweep % tuning.adapt_interval == 0:
            rates = window / float(chains * tuning.adapt_interval)
            steps *= np.exp(2.0 * (rates - tuning.target_acceptance))
            steps = np.clip(steps, 1e-6, spec.support[1] - spec.support[0])
            window[:] = 0

    draws = np.empty((per_chain, chains, m))
    accepted = 0
    for k in range(per_chain):
        for _ in range(tuning.thinning_factor):
            accepted += int(_sweep(spec, states, steps, rng).sum())
        draws[k] = states
    trials = per_chain * tuning.thinning_factor * chains * m
    return draws.reshape(-1, m), accepted, trials, steps


def sample_mcmc(spec: EnsembleSpec, n_samples: int, seed: int,
                tuning: Optional[SamplerSettings] = None,
                settings: Optional[Settings] = None) -> SampleBatch:
    """Metropolis 采样联合本征值密度

    链被分到固定数目的随机流上，每个流使用由 (seed, 流编号) 派生的
    Philox 生成器，因此结果与线程数无关。

    Args:
        spec: 系综参数
        n_samples: 样本数
        seed: 随机种子
        tuning: 采样器设置，默认取 settings.sampler
        settings: 全局设置

    Returns:
        SampleBatch

    Raises:
        TuningError: 冻结步长后的接受率落在 acceptance_bounds 之外
    """
    if n_samples < 1:
        raise DomainError(f"样本数必须为正: {n_samples}")
    settings = settings or Settings()
    tuning = tuning or settings.sampler
    chains = min(tuning.chains, n_samples)
    per_chain = math.ceil(n_samples / chains)
    streams = _split(chains, min(STREAMS, chains))

    def task(index: int, size: int):
        return _run_chains(spec, size, per_chain, _stream(seed, index), tuning)

    logger.info("MCMC %s: %d 条链, 每条 %d 个样本", spec.label, chains, per_chain)
    results = _run_streams(task, streams, settings.threads)
    configs = np.concatenate([r[0] for r in results])[:n_samples]
    accepted = sum(r[1] for r in results)
    trials = sum(r[2] for r in results)
    rate = accepted / trials
    low, high = tuning.acceptance_bounds
    if not low <= rate <= high:
        raise TuningError(f"接受率 {rate:.3f} 超出 [{low}, {high}]，需要调整采样参数")
    steps = np.mean([r[3] for r in results], axis=0)
    diag = McmcDiagnostics(rate, tuning.burn_in_factor * spec.m, tuning.thinning_factor * spec.m,
                           [float(s) for s in steps])
    configs = np.sort(configs, axis=1)
    return SampleBatch(spec, configs, entropies_of(configs), seed, 'mcmc', diag)


# ---------------------------------------------------------------------------
# 矩阵模型


def haar_columns(rows: int, cols: int, batch: int, rng: np.random.Generator,
                 complex_valued: bool = True) -> np.ndarray:
    """Haar 分布酉（或正交）矩阵的前 cols 列，形状 (batch, rows, cols)

    对高斯矩阵做 QR 分解，并用 R 对角元的相位归一化各列。
    """
    shape = (batch, rows, cols)
    z = rng.standard_normal(shape)
    if complex_valued:
        z = (z + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=1, axis2=2)
    phase = d / np.abs(d)
    return q * phase[:, None, :]


def _matrix_chunk_b(spec: EnsembleSpec, count: int, rng: np.random.Generator) -> np.ndarray:
    u = haar_columns(spec.m + spec.n, spec.p, count, rng)
    block = u[:, :spec.m, :]
    g = block @ np.conj(np.swapaxes(block, 1, 2))
    y = np.clip(np.linalg.eigvalsh(g), 0.0, 1.0)
    return np.clip(2.0 * y - 1.0, -1.0, 1.0)


def _matrix_chunk_a(spec: EnsembleSpec, count: int, rng: np.random.Generator) -> np.ndarray:
    size = 2 * (spec.m + spec.n)
    q = haar_columns(size, 2 * spec.m, count, rng, complex_valued=False)
    j0 = np.kron(np.eye(size // 2), np.array([[0.0, 1.0], [-1.0, 0.0]]))
    ja = np.swapaxes(q, 1, 2) @ j0 @ q
    ev = np.linalg.eigvalsh(1j * ja)
    return np.clip(ev[:, spec.m:], 0.0, 1.0)


def _sample_matrix(spec: EnsembleSpec, n_samples: int, seed: int, method: str,
                   chunk: Callable[[EnsembleSpec, int, np.random.Generator], np.ndarray],
                   settings: Optional[Settings]) -> SampleBatch:
    if n_samples < 1:
        raise DomainError(f"样本数必须为正: {n_samples}")
    settings = settings or Settings()

    def task(index: int, size: int) -> np.ndarray:
        rng = _stream(seed, index)
        parts = [chunk(spec, c, rng) for c in _split(size, math.ceil(size / MATRIX_CHUNK))]
        return np.concatenate(parts)

    configs = np.concatenate(_run_streams(task, _split(n_samples, min(STREAMS, n_samples)), settings.threads))
    configs = np.sort(configs, axis=1)
    return SampleBatch(spec, configs, entropies_of(configs), seed, method)


def sample_matrix_caseB(spec: EnsembleSpec, n_samples: int, seed: int,
                        settings: Optional[Settings] = None) -> SampleBatch:
    """情形 B 的矩阵模型：G_A = U_{m×p} U_{m×p}† 的本征值 y，x = 2y − 1"""
    if spec.case != 'B':
        raise DomainError(f"矩阵模型采样只适用于情形 B: {spec.label}")
    return _sample_matrix(spec, n_samples, seed, 'matrix_B', _matrix_chunk_b, settings)


def sample_matrix_caseA(spec: EnsembleSpec, n_samples: int, seed: int,
                        settings: Optional[Settings] = None) -> SampleBatch:
    """情形 A 的实验性矩阵模型：Haar 正交共轭后 iJ_A 的前 m 个本征值"""
    if spec.case != 'A':
        raise DomainError(f"正交矩阵模型只适用于情形 A: {spec.label}")
    return _sample_matrix(spec, n_samples, seed, 'matrix_A', _matrix_chunk_a, settings)


# ---------------------------------------------------------------------------
# 统计量


def estimate(batch: SampleBatch) -> Tuple[MomentReport, GaussianCheck]:
    """样本均值、方差及其标准误，以及与标准正态分布的 KS 距离

    方差的标准误由四阶中心矩估计；标准化使用精确矩。
    """
    s = batch.entropies
    count = len(s)
    if count == 0:
        raise DomainError("样本为空")
    mean = float(np.mean(s))
    centered = s - mean
    variance = float(np.sum(centered ** 2) / (count - 1)) if count > 1 else 0.0
    degenerate = variance == 0.0
    mean_se = math.sqrt(variance / count)
    if count > 3 and not degenerate:
        mu4 = float(np.mean(centered ** 4))
        var_se = math.sqrt(max(mu4 - (count - 3) / (count - 1) * variance ** 2, 0.0) / count)
    else:
        var_se = 0.0
    report = MomentReport(mean, variance, 'monte_carlo', var_se, batch.spec,
                          mean_stderr=mean_se, variance_stderr=var_se,
                          trace={'n_samples': count, 'sampler': batch.method})

    x = standardize(s, batch.spec)
    ks = stats.kstest(x, 'norm')
    skewness = 0.0 if degenerate else float(stats.skew(s))
    if degenerate:
        logger.warning("%s 的样本熵全部相同，KS 距离无意义", batch.spec.label)
    check = GaussianCheck(float(ks.statistic), float(ks.pvalue), skewness, x, degenerate)
    return report, check


def compare_batches(first: SampleBatch, second: SampleBatch) -> float:
    """两组样本熵的双样本 KS 检验 p 值"""
    return float(stats.ks_2samp(first.entropies, second.entropies).pvalue)


def standardized_histogram(check: GaussianCheck, bins: int = 40,
                           limits: Tuple[float, float] = (-4.0, 4.0)) -> Dict[str, np.ndarray]:
    """标准化熵的经验密度与标准正态密度"""
    density, edges = np.histogram(check.standardized, bins=bins, range=limits, density=True)
    centers = 0.5 * (edges[:-1] + edges[1:])
    return {
        'bin_center': centers,
        'empirical_density': density,
        'gaussian_density': gaussian_density(centers),
    }


# ---------------------------------------------------------------------------
# 持久化


def save_batch(batch: SampleBatch, path: str) -> None:
    """首行为 JSON 头，其后是带表头的 CSV 行 x_1..x_m,S"""
    header = {
        'spec': batch.spec.to_dict(),
        'seed': batch.seed,
        'method': batch.method,
        'diagnostics': batch.mcmc_diag.to_dict() if batch.mcmc_diag else None,
    }
    with open(path, 'w', encoding='utf-8', newline='') as f:
        f.write(json.dumps(header, ensure_ascii=False) + '\n')
        writer = csv.writer(f)
        writer.writerow([f"x{i + 1}" for i in range(batch.spec.m)] + ['S'])
        for config, entropy in zip(batch.configs, batch.entropies):
            writer.writerow([repr(float(v)) for v in config] + [repr(float(entropy))])
    logger.info("已写入 %d 个样本到 %s", len(batch), path)


def load_batch(path: str) -> SampleBatch:
    """读取 save_batch 写出的文件"""
    with open(path, 'r', encoding='utf-8', newline='') as f:
        try:
            header = json.loads(f.readline())
        except json.JSONDecodeError as e:
            raise DomainError(f"样本文件 {path} 的 JSON 头无效: {e}") from e
        reader = csv.reader(f)
        next(reader, None)
        rows = [[float(v) for v in row] for row in reader if row]
    spec = EnsembleSpec.from_dict(header['spec'])
    data = np.array(rows, dtype=float).reshape(-1, spec.m + 1)
    diag = header.get('diagnostics')
    return SampleBatch(spec, data[:, :-1], data[:, -1], int(header['seed']), header.get('method', 'mcmc'),
                       McmcDiagnostics(**diag) if diag else None)


def with_overrides(tuning: SamplerSettings, **changes: Any) -> SamplerSettings:
    """返回修改了部分字段的采样器设置"""
    return replace(tuning, **{k: v for k, v in changes.items() if v is not None})
