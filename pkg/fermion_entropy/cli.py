"""命令行接口"""
import csv
import functools
import io
import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import click
import numpy as np

from .core import (EnsembleSpec, Settings, estimate, exact_report, load_settings, sample_matrix_caseA,
                   sample_matrix_caseB, sample_mcmc, save_batch, save_settings, sweep, sweep_specs, verify_sweep)
from .core.exceptions import ConfigError, DomainError, TuningError
from .core.identities import REGISTRY, write_jsonl
from .core.kernel import KernelContext, density_one_point
from .core.moments import AsymptoticPoint, asymptotic_point, variance_asymptotic
from .core.sampler import standardized_histogram, with_overrides

logger = logging.getLogger(__name__)

SIGNIFICANT = 15
EXIT_FAILURE = 1
EXIT_USAGE = 2


@dataclass
class RunConfig:
    """单次调用的参数"""
    command: str
    case: Optional[str] = None
    m: Optional[int] = None
    n: Optional[int] = None
    p: Optional[int] = None
    output: str = 'table'
    seed: int = 0
    n_samples: int = 0
    sweep: Dict[str, int] = field(default_factory=dict)

    def spec(self) -> EnsembleSpec:
        """按 EnsembleSpec 的规则校验维数，情形 A 给出 p 会被拒绝"""
        return EnsembleSpec(self.case, self.m, self.n, self.p)


class Context:
    def __init__(self):
        """初始化 CLI 上下文"""
        self.settings = None
        self.run = None


pass_context = click.make_pass_decorator(Context, ensure=True)


def _get_settings(ctx: Context, config_dir: str = None) -> Settings:
    """从配置目录获取 Settings"""
    if ctx.settings is None:
        ctx.settings = load_settings(config_dir)
    return ctx.settings


def _handle_errors(func):
    """DomainError/ConfigError 退出码 2，TuningError 退出码 1"""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except (DomainError, ConfigError) as e:
            click.echo(f"错误: {e}", err=True)
            click.get_current_context().exit(EXIT_USAGE)
        except TuningError as e:
            click.echo(f"采样失败: {e}", err=True)
            click.get_current_context().exit(EXIT_FAILURE)
    return wrapper


def _fmt(value: Any) -> str:
    if isinstance(value, (float, np.floating)):
        return f"{value:.{SIGNIFICANT}g}"
    if value is None:
        return ''
    return str(value)


def _emit(rows: List[Dict[str, Any]], columns: Sequence[str], output: str) -> None:
    """按 table/csv/json 输出结果行"""
    if output == 'json':
        click.echo(json.dumps(rows, ensure_ascii=False))
        return
    if output == 'csv':
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(columns)
        for row in rows:
            writer.writerow([repr(float(row[c])) if isinstance(row[c], (float, np.floating)) else _fmt(row[c])
                             for c in columns])
        click.echo(buffer.getvalue(), nl=False)
        return
    cells = [[_fmt(row[c]) for c in columns] for row in rows]
    widths = [max([len(c)] + [len(r[i]) for r in cells]) for i, c in enumerate(columns)]
    click.echo("  ".join(c.ljust(w) for c, w in zip(columns, widths)))
    for r in cells:
        click.echo("  ".join(v.ljust(w) for v, w in zip(r, widths)))


def _configure_logging(verbose: int) -> None:
    level = logging.WARNING
    if verbose == 1:
        level = logging.INFO
    elif verbose >= 2:
        level = logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger('fermion_entropy').setLevel(level)


def case_options(func):
    """--case -m -n -p"""
    func = click.option('-p', 'p', type=int, default=None, help='粒子数 p（仅情形 B）')(func)
    func = click.option('-n', 'n', type=int, required=True, help='环境维数 n')(func)
    func = click.option('-m', 'm', type=int, required=True, help='子系统维数 m')(func)
    func = click.option('--case', type=click.Choice(['A', 'B'], case_sensitive=False), required=True,
                        help='A: 粒子数任意；B: 粒子数固定为 p')(func)
    return func


OUTPUT_OPTION = click.option('--output', '-o', type=click.Choice(['table', 'csv', 'json']), default='table',
                             help='输出格式')
CONFIG_OPTION = click.option('--config-dir', help='配置文件目录，默认为 ~/.fermion_entropy')


@click.group()
@click.option('--verbose', '-v', count=True, help='输出更多日志，可重复')
@click.pass_context
def cli(ctx, verbose: int):
    """自由费米子本征态纠缠熵统计工具"""
    if ctx.obj is None:
        ctx.obj = Context()
    _configure_logging(verbose)


@cli.command()
@case_options
@OUTPUT_OPTION
@CONFIG_OPTION
@pass_context
@_handle_errors
def exact(ctx: Context, case: str, m: int, n: int, p: Optional[int], output: str, config_dir: str):
    """计算熵均值与方差的精确值"""
    _get_settings(ctx, config_dir)
    ctx.run = RunConfig('exact', case.upper(), m, n, p, output)
    report = exact_report(ctx.run.spec())
    row = {**report.spec.to_dict(), 'mean': report.mean, 'variance': report.variance}
    columns = ['case', 'm', 'n'] + (['p'] if p is not None else []) + ['mean', 'variance']
    _emit([row], columns, output)


@cli.command()
@click.option('--case', type=click.Choice(['A', 'B'], case_sensitive=False), required=True, help='系综情形')
@click.option('--max-n', type=int, required=True, help='扫描的最大 n')
@click.option('--min-n', type=int, default=1, help='扫描的最小 n')
@click.option('--threads', type=int, default=None, help='线程数，默认取配置')
@OUTPUT_OPTION
@CONFIG_OPTION
@pass_context
@_handle_errors
def verify(ctx: Context, case: str, max_n: int, min_n: int, threads: Optional[int], output: str,
           config_dir: str):
    """用求和与数值积分两种预言机验证精确结果"""
    settings = _get_settings(ctx, config_dir)
    if threads:
        settings.threads = threads
    ctx.run = RunConfig('verify', case.upper(), output=output, sweep={'min_n': min_n, 'max_n': max_n})
    results = verify_sweep(sweep_specs(case.upper(), max_n, min_n), settings)
    rows = [{'spec': r.spec.label, 'variance': r.variance_exact, 'worst_residual': r.worst_residual,
             'passed': r.passed, 'printed_disagreements': ','.join(r.printed_disagreements)} for r in results]
    if output == 'json':
        _emit([r.to_dict() for r in results], [], output)
    else:
        _emit(rows, ['spec', 'variance', 'worst_residual', 'passed', 'printed_disagreements'], output)

    failed = [r for r in results if not r.passed]
    if failed:
        worst = max(failed, key=lambda r: r.worst_residual)
        click.echo(f"验证失败 {len(failed)}/{len(results)}，最差: {worst.spec.label} "
                   f"残差 {worst.worst_residual:.3g}", err=True)
        click.get_current_context().exit(EXIT_FAILURE)
    click.echo(f"全部 {len(results)} 个系综通过验证", err=True)


@cli.command()
@click.option('--id', 'ids', multiple=True, help='恒等式编号，可多次使用，默认全部')
@click.option('--cases', type=int, default=25, help='每个恒等式的参数组数')
@click.option('--seed', type=int, default=0, help='随机种子')
@click.option('--jsonl', 'jsonl_path', help='写出每组参数结果的 JSON lines 文件')
@click.option('--list', 'list_only', is_flag=True, help='只列出已登记的恒等式')
@OUTPUT_OPTION
@CONFIG_OPTION
@pass_context
@_handle_errors
def identities(ctx: Context, ids: Sequence[str], cases: int, seed: int, jsonl_path: Optional[str],
               list_only: bool, output: str, config_dir: str):
    """扫描有限和恒等式的数值残差"""
    if list_only:
        rows = [{'id': i.id, 'status': i.status, 'note': i.note} for i in REGISTRY.values()]
        _emit(rows, ['id', 'status', 'note'], output)
        return
    settings = _get_settings(ctx, config_dir)
    ctx.run = RunConfig('identities', output=output, seed=seed, n_samples=cases)
    report = sweep(list(ids) or None, cases, seed, settings)
    if jsonl_path:
        count = write_jsonl(report, jsonl_path)
        click.echo(f"已写入 {count} 行到 {jsonl_path}", err=True)
    rows = [s.to_dict() for s in report.summaries]
    _emit(rows, ['id', 'status', 'n_cases', 'max_residual', 'max_condition', 'failures'], output)
    if not report.passed:
        bad = sorted({c.id for c in report.failures})
        click.echo(f"恒等式验证失败: {', '.join(bad)}", err=True)
        click.get_current_context().exit(EXIT_FAILURE)


@cli.command()
@case_options
@click.option('--samples', type=int, default=10000, help='样本数')
@click.option('--seed', type=int, default=0, help='随机种子')
@click.option('--method', type=click.Choice(['mcmc', 'matrix']), default='mcmc', help='采样方法')
@click.option('--chains', type=int, default=None, help='并行链数')
@click.option('--burn-in', type=int, default=None, help='burn-in 扫描数（每次扫描 m 步）')
@click.option('--thinning', type=int, default=None, help='相邻样本间的扫描数')
@click.option('--save', 'save_path', help='保存样本文件')
@OUTPUT_OPTION
@CONFIG_OPTION
@pass_context
@_handle_errors
def simulate(ctx: Context, case: str, m: int, n: int, p: Optional[int], samples: int, seed: int, method: str,
             chains: Optional[int], burn_in: Optional[int], thinning: Optional[int], save_path: Optional[str],
             output: str, config_dir: str):
    """蒙特卡罗采样并与精确矩比较"""
    settings = _get_settings(ctx, config_dir)
    ctx.run = RunConfig('simulate', case.upper(), m, n, p, output, seed, samples)
    spec = ctx.run.spec()
    if method == 'mcmc':
        tuning = with_overrides(settings.sampler, chains=chains, burn_in_factor=burn_in,
                                thinning_factor=thinning)
        batch = sample_mcmc(spec, samples, seed, tuning, settings)
    elif spec.case == 'B':
        batch = sample_matrix_caseB(spec, samples, seed, settings)
    else:
        batch = sample_matrix_caseA(spec, samples, seed, settings)
    if save_path:
        save_batch(batch, save_path)
    report, check = estimate(batch)
    exact_values = exact_report(spec)
    row = {
        'spec': spec.label,
        'mean': report.mean,
        'mean_stderr': report.mean_stderr,
        'mean_exact': exact_values.mean,
        'variance': report.variance,
        'variance_stderr': report.variance_stderr,
        'variance_exact': exact_values.variance,
        'ks_distance': check.ks_distance,
        'skewness': check.sample_skewness,
    }
    if batch.mcmc_diag is not None:
        row['acceptance_rate'] = batch.mcmc_diag.acceptance_rate
    _emit([row], list(row), output)


@cli.command()
@click.option('--case', type=click.Choice(['A', 'B'], case_sensitive=False), required=True, help='系综情形')
@click.option('-m', 'm', type=int, default=None, help='子系统维数 m')
@click.option('-n', 'n', type=int, default=None, help='环境维数 n')
@click.option('-p', 'p', type=int, default=None, help='粒子数 p（仅情形 B）')
@click.option('--f1', type=float, default=None, help='m/(m+n)')
@click.option('--f2', type=float, default=None, help='p/(m+n)')
@OUTPUT_OPTION
@CONFIG_OPTION
@pass_context
@_handle_errors
def asymptotic(ctx: Context, case: str, m: Optional[int], n: Optional[int], p: Optional[int],
               f1: Optional[float], f2: Optional[float], output: str, config_dir: str):
    """渐近方差；给出维数时同时输出精确值"""
    _get_settings(ctx, config_dir)
    case = case.upper()
    ctx.run = RunConfig('asymptotic', case, m, n, p, output)
    row: Dict[str, Any] = {}
    if m is not None and n is not None:
        spec = ctx.run.spec()
        point = asymptotic_point(spec, 'corrected' if case == 'B' else 'leading')
        row['spec'] = spec.label
        row['variance_exact'] = exact_report(spec).variance
    elif f1 is not None:
        point = AsymptoticPoint(f1, f2)
        row['spec'] = f"f1={f1}" + (f", f2={f2}" if f2 is not None else "")
    else:
        raise DomainError("需要给出 -m/-n 或 --f1")
    row['leading'] = variance_asymptotic(AsymptoticPoint(point.f1, point.f2), case)
    if case == 'B' and point.dimension:
        row['corrected'] = variance_asymptotic(point, case)
    _emit([row], list(row), output)


@cli.command()
@case_options
@click.option('--points', type=int, default=101, help='网格点数')
@OUTPUT_OPTION
@CONFIG_OPTION
@pass_context
@_handle_errors
def density(ctx: Context, case: str, m: int, n: int, p: Optional[int], points: int, output: str,
            config_dir: str):
    """在均匀网格上输出单点密度 g₁(x)"""
    _get_settings(ctx, config_dir)
    ctx.run = RunConfig('density', case.upper(), m, n, p, output)
    spec = ctx.run.spec()
    if points < 2:
        raise DomainError(f"网格点数至少为 2: {points}")
    low, high = spec.support
    grid = np.linspace(low, high, points)
    values = density_one_point(KernelContext.build(spec), grid)
    rows = [{'x': float(x), 'density': float(g)} for x, g in zip(grid, values)]
    _emit(rows, ['x', 'density'], output)


@cli.command()
@click.option('--figure', 'figure_id', type=click.Choice(['1', '2', '3']), required=True, help='图编号')
@click.option('--case', type=click.Choice(['A', 'B'], case_sensitive=False), default='A',
              help='图 1 的系综情形')
@click.option('-m', 'm', type=int, default=2, help='图 2、3 的子系统维数')
@click.option('--m-max', type=int, default=20, help='图 1 的最大 m')
@click.option('--n-ratio', type=int, default=3, help='n 与 m 之比')
@click.option('--p-ratio', type=int, default=2, help='情形 B 中 p 与 m 之比')
@click.option('--samples', type=int, default=0, help='蒙特卡罗样本数，0 表示不采样')
@click.option('--seed', type=int, default=0, help='随机种子')
@click.option('--bins', type=int, default=40, help='直方图的箱数')
@CONFIG_OPTION
@pass_context
@_handle_errors
def figure(ctx: Context, figure_id: str, case: str, m: int, m_max: int, n_ratio: int, p_ratio: int,
           samples: int, seed: int, bins: int, config_dir: str):
    """导出作图数据（CSV）"""
    settings = _get_settings(ctx, config_dir)
    case = 'A' if figure_id == '2' else 'B' if figure_id == '3' else case.upper()
    ctx.run = RunConfig('figure', case, m, output='csv', seed=seed, n_samples=samples)

    def spec_for(size: int) -> EnsembleSpec:
        return EnsembleSpec(case, size, n_ratio * size, p_ratio * size if case == 'B' else None)

    if figure_id == '1':
        rows = []
        for size in range(1, m_max + 1):
            spec = spec_for(size)
            point = asymptotic_point(spec, 'corrected' if case == 'B' else 'leading')
            row = {'x': size, 'exact': exact_report(spec).variance,
                   'asymptotic': variance_asymptotic(point, case), 'mc_estimate': None, 'mc_stderr': None}
            if samples:
                report, _ = estimate(_figure_batch(spec, samples, seed, settings))
                row['mc_estimate'], row['mc_stderr'] = report.variance, report.variance_stderr
            rows.append(row)
        _emit(rows, ['x', 'exact', 'asymptotic', 'mc_estimate', 'mc_stderr'], 'csv')
        return

    if samples < 1:
        raise DomainError("图 2、3 需要 --samples > 0")
    _, check = estimate(_figure_batch(spec_for(m), samples, seed, settings))
    hist = standardized_histogram(check, bins)
    rows = [{k: float(hist[k][i]) for k in hist} for i in range(bins)]
    _emit(rows, ['bin_center', 'empirical_density', 'gaussian_density'], 'csv')
    click.echo(f"KS 距离 {check.ks_distance:.6g}，偏度 {check.sample_skewness:.6g}", err=True)


def _figure_batch(spec: EnsembleSpec, samples: int, seed: int, settings: Settings):
    if spec.case == 'B':
        return sample_matrix_caseB(spec, samples, seed, settings)
    return sample_mcmc(spec, samples, seed, settings=settings)


@cli.command('show-config')
@click.option('--save', is_flag=True, help='将当前生效的配置写入配置目录')
@CONFIG_OPTION
@pass_context
@_handle_errors
def show_config(ctx: Context, save: bool, config_dir: str):
    """显示当前生效的配置"""
    settings = _get_settings(ctx, config_dir)
    if save:
        path = save_settings(settings, config_dir)
        click.echo(f"配置已保存到 {path}", err=True)
    click.echo(json.dumps(settings.to_dict(), ensure_ascii=False, indent=2))


if __name__ == '__main__':
    cli()
