"""CLI 测试"""
import json
import os

import pytest
import yaml
from click.testing import CliRunner

from fermion_entropy.cli import Context, cli
from fermion_entropy.core.specfun import ZETA2

@pytest.fixture
def runner():
    """创建 CLI 测试运行器"""
    return CliRunner()

@pytest.fixture
def config_dir(tmp_path):
    """创建临时配置目录"""
    config_dir = tmp_path / "config"
    config_dir.mkdir()
    return str(config_dir)

@pytest.fixture
def ctx():
    """创建测试上下文"""
    return Context()

def write_config(config_dir, data):
    with open(os.path.join(config_dir, "config.yaml"), 'w', encoding='utf-8') as f:
        yaml.safe_dump(data, f)

def test_exact(runner, ctx, config_dir):
    """测试精确值命令"""
    result = runner.invoke(cli, ['exact', '--case', 'A', '-m', '1', '-n', '1', '--output', 'json',
                                 '--config-dir', config_dir], obj=ctx)
    assert result.exit_code == 0, f"exact 命令失败: {result.output}"
    rows = json.loads(result.output)
    assert rows[0]['mean'] == pytest.approx(0.5, abs=1e-14)
    assert rows[0]['variance'] == pytest.approx(7 / 12 - ZETA2 / 3, rel=1e-12)
    assert ctx.run.command == 'exact'

def test_exact_table(runner, ctx, config_dir):
    """测试表格输出"""
    result = runner.invoke(cli, ['exact', '--case', 'B', '-m', '1', '-n', '1', '-p', '1',
                                 '--config-dir', config_dir], obj=ctx)
    assert result.exit_code == 0, f"exact 命令失败: {result.output}"
    header, row = result.output.strip().splitlines()
    assert header.split() == ['case', 'm', 'n', 'p', 'mean', 'variance']
    assert row.split()[4] == '0.5'

def test_exact_invalid(runner, ctx, config_dir):
    """测试无效维数的退出码"""
    result = runner.invoke(cli, ['exact', '--case', 'A', '-m', '0', '-n', '1', '--config-dir', config_dir], obj=ctx)
    assert result.exit_code == 2
    assert "m 必须是正整数" in result.output

    result = runner.invoke(cli, ['exact', '--case', 'B', '-m', '2', '-n', '4', '--config-dir', config_dir],
                           obj=Context())
    assert result.exit_code == 2

    result = runner.invoke(cli, ['exact', '--case', 'A', '-m', '1', '-n', '2', '-p', '1',
                                 '--config-dir', config_dir], obj=Context())
    assert result.exit_code == 2

def test_verify(runner, ctx, config_dir):
    """测试一致性验证命令"""
    result = runner.invoke(cli, ['verify', '--case', 'A', '--max-n', '1', '--config-dir', config_dir], obj=ctx)
    assert result.exit_code == 0, f"verify 命令失败: {result.output}"
    assert "A(m=1, n=1)" in result.output

    result = runner.invoke(cli, ['verify', '--case', 'B', '--max-n', '2', '--threads', '2', '--output', 'csv',
                                 '--config-dir', config_dir], obj=Context())
    assert result.exit_code == 0, f"verify 命令失败: {result.output}"
    assert "spec,variance,worst_residual,passed,printed_disagreements" in result.output

def test_verify_failure(runner, ctx, config_dir):
    """测试容差过严时验证失败"""
    write_config(config_dir, {'tolerances': {'verify_abs': 0.0, 'verify_rel': 0.0, 'mean_abs': 0.0}})
    result = runner.invoke(cli, ['verify', '--case', 'B', '--max-n', '2', '--config-dir', config_dir], obj=ctx)
    assert result.exit_code == 1
    assert "验证失败" in result.output

def test_identities(runner, ctx, config_dir, tmp_path):
    """测试恒等式扫描命令"""
    jsonl = str(tmp_path / "residuals.jsonl")
    result = runner.invoke(cli, ['identities', '--id', 'B1', '--id', 'lemma1', '--cases', '10', '--seed', '7',
                                 '--jsonl', jsonl, '--config-dir', config_dir], obj=ctx)
    assert result.exit_code == 0, f"identities 命令失败: {result.output}"
    assert "B1" in result.output and "lemma1" in result.output
    with open(jsonl, 'r', encoding='utf-8') as f:
        rows = [json.loads(line) for line in f]
    assert len(rows) == 20

def test_identities_list(runner, ctx):
    """测试列出恒等式"""
    result = runner.invoke(cli, ['identities', '--list'], obj=ctx)
    assert result.exit_code == 0, f"identities --list 失败: {result.output}"
    assert "chu_vandermonde" in result.output
    assert "unresolved" in result.output

def test_identities_unknown(runner, ctx, config_dir):
    """测试未知的恒等式编号"""
    result = runner.invoke(cli, ['identities', '--id', 'nothing', '--config-dir', config_dir], obj=ctx)
    assert result.exit_code == 2

def test_simulate(runner, ctx, config_dir, tmp_path):
    """测试 MCMC 模拟命令"""
    save_path = str(tmp_path / "batch.csv")
    result = runner.invoke(cli, ['simulate', '--case', 'B', '-m', '1', '-n', '1', '-p', '1', '--samples', '400',
                                 '--chains', '100', '--burn-in', '100', '--thinning', '2', '--seed', '3',
                                 '--save', save_path, '--output', 'json', '--config-dir', config_dir], obj=ctx)
    assert result.exit_code == 0, f"simulate 命令失败: {result.output}"
    row = json.loads(result.output)[0]
    assert row['mean_exact'] == pytest.approx(0.5)
    assert 0.1 <= row['acceptance_rate'] <= 0.7
    assert os.path.exists(save_path)

def test_simulate_matrix(runner, ctx, config_dir):
    """测试矩阵模型模拟命令"""
    result = runner.invoke(cli, ['simulate', '--case', 'B', '-m', '2', '-n', '4', '-p', '3', '--samples', '1000',
                                 '--method', 'matrix', '--output', 'json', '--config-dir', config_dir], obj=ctx)
    assert result.exit_code == 0, f"simulate 命令失败: {result.output}"
    row = json.loads(result.output)[0]
    assert 'acceptance_rate' not in row
    assert row['mean'] == pytest.approx(row['mean_exact'], abs=0.05)

def test_simulate_tuning_error(runner, ctx, config_dir):
    """测试接受率越界的退出码"""
    write_config(config_dir, {'sampler': {'acceptance_bounds': [0.95, 1.0]}})
    result = runner.invoke(cli, ['simulate', '--case', 'B', '-m', '1', '-n', '1', '-p', '1', '--samples', '100',
                                 '--chains', '50', '--burn-in', '50', '--thinning', '1',
                                 '--config-dir', config_dir], obj=ctx)
    assert result.exit_code == 1
    assert "接受率" in result.output

def test_asymptotic(runner, ctx, config_dir):
    """测试渐近方差命令"""
    result = runner.invoke(cli, ['asymptotic', '--case', 'A', '--f1', '0.5', '--output', 'json',
                                 '--config-dir', config_dir], obj=ctx)
    assert result.exit_code == 0, f"asymptotic 命令失败: {result.output}"
    row = json.loads(result.output)[0]
    assert row['leading'] == pytest.approx(0.5 * (0.75 - 0.6931471805599453))

    result = runner.invoke(cli, ['asymptotic', '--case', 'B', '-m', '10', '-n', '30', '-p', '20', '--output', 'json',
                                 '--config-dir', config_dir], obj=Context())
    assert result.exit_code == 0, f"asymptotic 命令失败: {result.output}"
    row = json.loads(result.output)[0]
    assert set(row) == {'spec', 'variance_exact', 'leading', 'corrected'}

    result = runner.invoke(cli, ['asymptotic', '--case', 'A', '--config-dir', config_dir], obj=Context())
    assert result.exit_code == 2

def test_density(runner, ctx, config_dir):
    """测试单点密度命令"""
    result = runner.invoke(cli, ['density', '--case', 'B', '-m', '1', '-n', '1', '-p', '1', '--points', '5',
                                 '--output', 'csv', '--config-dir', config_dir], obj=ctx)
    assert result.exit_code == 0, f"density 命令失败: {result.output}"
    lines = result.output.strip().splitlines()
    assert lines[0] == "x,density"
    assert len(lines) == 6
    assert float(lines[3].split(',')[1]) == pytest.approx(0.5)

def test_figure(runner, ctx, config_dir):
    """测试作图数据命令"""
    result = runner.invoke(cli, ['figure', '--figure', '1', '--case', 'B', '--m-max', '3',
                                 '--config-dir', config_dir], obj=ctx)
    assert result.exit_code == 0, f"figure 命令失败: {result.output}"
    lines = result.output.strip().splitlines()
    assert lines[0] == "x,exact,asymptotic,mc_estimate,mc_stderr"
    assert len(lines) == 4

    result = runner.invoke(cli, ['figure', '--figure', '3', '-m', '1', '--samples', '500', '--bins', '10',
                                 '--config-dir', config_dir], obj=Context())
    assert result.exit_code == 0, f"figure 命令失败: {result.output}"
    assert "bin_center,empirical_density,gaussian_density" in result.output

    result = runner.invoke(cli, ['figure', '--figure', '2', '--config-dir', config_dir], obj=Context())
    assert result.exit_code == 2

def test_show_config(runner, ctx, config_dir):
    """测试显示配置"""
    write_config(config_dir, {'threads': 2})
    result = runner.invoke(cli, ['show-config', '--config-dir', config_dir], obj=ctx)
    assert result.exit_code == 0, f"show-config 命令失败: {result.output}"
    assert json.loads(result.output)['sampler']['chains'] == 1000

    write_config(config_dir, {'bogus': 1})
    result = runner.invoke(cli, ['show-config', '--config-dir', config_dir], obj=Context())
    assert result.exit_code == 2

def test_show_config_save(runner, ctx, config_dir, monkeypatch):
    """测试保存当前生效的配置"""
    monkeypatch.setenv('FENT_THREADS', '3')
    write_config(config_dir, {'sampler': {'chains': 50}})
    result = runner.invoke(cli, ['show-config', '--save', '--config-dir', config_dir], obj=ctx)
    assert result.exit_code == 0, f"show-config --save 失败: {result.output}"
    with open(os.path.join(config_dir, "config.yaml"), 'r', encoding='utf-8') as f:
        saved = yaml.safe_load(f)
    assert saved['threads'] == 3
    assert saved['sampler']['chains'] == 50
    assert saved['tolerances']['identity'] == 1e-8

    monkeypatch.delenv('FENT_THREADS')
    result = runner.invoke(cli, ['show-config', '--config-dir', config_dir], obj=Context())
    assert result.exit_code == 0, f"show-config 命令失败: {result.output}"
    assert json.loads(result.output)['threads'] == 3
