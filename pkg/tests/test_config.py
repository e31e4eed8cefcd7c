"""配置测试"""
import os

import pytest
import yaml

from fermion_entropy.core.config import THREADS_ENV, Settings, load_settings, save_settings
from fermion_entropy.core.exceptions import ConfigError

@pytest.fixture
def config_dir(tmp_path):
    """创建临时配置目录"""
    config_dir = tmp_path / "config"
    config_dir.mkdir()
    return str(config_dir)

@pytest.fixture(autouse=True)
def clear_env(monkeypatch):
    """清除线程数环境变量"""
    monkeypatch.delenv(THREADS_ENV, raising=False)

def write_config(config_dir, data):
    with open(os.path.join(config_dir, "config.yaml"), 'w', encoding='utf-8') as f:
        yaml.safe_dump(data, f)

def test_defaults(config_dir):
    """测试包内默认配置"""
    settings = load_settings(config_dir)
    assert settings.threads == 1
    assert settings.tolerances.verify_abs == 1e-8
    assert settings.tolerances.identity == 1e-8
    assert settings.quadrature.order_offset == 40
    assert settings.sampler.acceptance_bounds == (0.1, 0.7)
    assert settings.sampler.burn_in_factor == 10000

def test_user_override(config_dir):
    """测试用户配置覆盖默认值"""
    write_config(config_dir, {
        'threads': 3,
        'tolerances': {'identity': 1e-6},
        'sampler': {'chains': 50, 'acceptance_bounds': [0.2, 0.6]},
    })
    settings = load_settings(config_dir)
    assert settings.threads == 3
    assert settings.tolerances.identity == 1e-6
    # 未覆盖的项保持默认
    assert settings.tolerances.verify_abs == 1e-8
    assert settings.sampler.chains == 50
    assert settings.sampler.acceptance_bounds == (0.2, 0.6)

def test_env_threads(config_dir, monkeypatch):
    """测试环境变量设置线程数"""
    write_config(config_dir, {'threads': 2})
    monkeypatch.setenv(THREADS_ENV, "6")
    assert load_settings(config_dir).threads == 6

    monkeypatch.setenv(THREADS_ENV, "many")
    with pytest.raises(ConfigError):
        load_settings(config_dir)

def test_invalid_config(config_dir):
    """测试无效配置"""
    write_config(config_dir, {'unknown': 1})
    with pytest.raises(ConfigError):
        load_settings(config_dir)

    write_config(config_dir, {'sampler': {'steps': 1}})
    with pytest.raises(ConfigError):
        load_settings(config_dir)

    write_config(config_dir, {'sampler': {'acceptance_bounds': [0.8, 0.2]}})
    with pytest.raises(ConfigError):
        load_settings(config_dir)

    write_config(config_dir, {'threads': 0})
    with pytest.raises(ConfigError):
        load_settings(config_dir)

def test_malformed_yaml(config_dir):
    """测试 YAML 解析失败"""
    with open(os.path.join(config_dir, "config.yaml"), 'w', encoding='utf-8') as f:
        f.write("threads: [1, 2\n")
    with pytest.raises(ConfigError):
        load_settings(config_dir)

def test_save_and_load(config_dir):
    """测试保存后重新加载"""
    settings = Settings()
    settings.threads = 5
    settings.sampler.chains = 123
    path = save_settings(settings, config_dir)
    assert os.path.exists(path)

    loaded = load_settings(config_dir)
    assert loaded.threads == 5
    assert loaded.sampler.chains == 123
    assert loaded.to_dict() == settings.to_dict()
