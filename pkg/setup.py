#!/usr/bin/env python3

from pathlib import Path

from setuptools import setup


PROJECT_PATH = Path(__file__).parent
with (PROJECT_PATH / "requirements.txt").open() as f:
    install_requires = [line.strip() for line in f.readlines() if line.strip()]

setup(
    name='grover_qt',
    version='1.0',
    description='Two-register state vector simulator of the Grover database search',
    license='GPLv3',
    packages=['grover_qt'],
    install_requires=install_requires,
    extras_require={'test': ['pytest']},
    keywords=['grover', 'quantum', 'simulator', 'database search', 'nmr'],
    data_files=[('/usr/share/doc/grover-qt', ['README.md'])],
    scripts=["bin/grover-qt"],
    include_package_data=True,
    zip_safe=True,
    classifiers=[
        'Development Status :: 4 - Beta',
        'Intended Audience :: Science/Research',
        'Natural Language :: English',
        'License :: OSI Approved :: GNU General Public License v3 or later (GPLv3+)',
        'Operating System :: POSIX :: Linux',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: Implementation :: CPython',
        'Topic :: Scientific/Engineering :: Physics',
    ],
)
