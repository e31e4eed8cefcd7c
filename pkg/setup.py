"""纠缠熵统计工具安装配置"""

from setuptools import setup, find_packages

setup(
    name="fermion_entropy",
    version="0.1.0",
    description="Exact and numerical statistics of entanglement entropy in free-fermion eigenstates.",
    packages=find_packages(exclude=["tests", "tests.*"]),
    python_requires=">=3.8",
    install_requires=[
        "PyYAML>=5.1",
        "pytest>=7.3.1",
        "click>=8.1.0",
        "numpy>=1.22",
        "scipy>=1.8",
        "mpmath>=1.2",
    ],
    entry_points={
        'console_scripts': [
            'fent=fermion_entropy.cli:cli',
        ],
    },
    package_data={
        'fermion_entropy': ['config/*.yaml'],
    },
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
    ]
)
