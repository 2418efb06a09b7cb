import os
from setuptools import setup, find_packages


def read(fname):
    with open(os.path.join(os.path.dirname(__file__), fname)) as f:
        return f.read().strip()


setup(
    name='tabmg',
    version='0.1.0',
    description='Policy optimization and equilibrium gaps for tabular '
                'Markov games',
    long_description=read('README.md'),
    long_description_content_type='text/markdown',
    keywords=['Markov Games',
              'Multi-Agent Reinforcement Learning',
              'No-Regret Learning'],
    license='GPLv3',
    packages=[
        package for package in find_packages() if package.startswith("tabmg")
    ],
    entry_points={
        'console_scripts': [
            'tabmg=tabmg.main.tabmg_cli:main',
            'tabmg-default-config=tabmg.main.generate_default_config:main',
        ]
    },
    install_requires=[
        "numpy",
        "pyyaml",
        "benedict",
        "nanolog",
        "tabulate",
    ],
    classifiers=[
        "Development Status :: 4 - Beta",
        "Topic :: Scientific/Engineering :: Artificial Intelligence",
        "Environment :: Console",
        "Programming Language :: Python :: 3"
    ],
    package_data={'tabmg': ['sample_tabmg.yml']},
    include_package_data=True,
    python_requires=">=3.9",
    zip_safe=False
)
