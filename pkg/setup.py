# -*- coding: utf-8 -*-
#
# This file is part of uniblend.
#
# uniblend is free software: you can redistribute it and/or modify it under the terms of the
# GNU General Public License as published by the Free Software Foundation, either version 3 of the
# License, or (at your option) any later version.
#
# uniblend is distributed in the hope that it will be useful, but WITHOUT ANY WARRANTY; without
# even the implied warranty of MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the GNU
# General Public License for more details.
#
# You should have received a copy of the GNU General Public License along with uniblend. If
# not, see <http://www.gnu.org/licenses/>.

from __future__ import unicode_literals, absolute_import

import os
import shutil
import tempfile

from setuptools import Command
from setuptools import find_packages
from setuptools import setup


class AblationCommand(Command):
    description = 'Train and evaluate all ablation rows on a freshly generated dataset.'
    user_options = [
        ('dest=', 'd', 'Destination directory for checkpoints, logs and reports.'),
        ('steps=', None, 'Training steps per row.'),
        ('count=', None, 'Number of generated pairs.'),
        ('seed=', None, 'Seed of data generation and training.'),
    ]

    def initialize_options(self):
        self.dest = os.path.join(os.path.abspath('build'), 'ablation')
        self.steps = 300
        self.count = 8
        self.seed = 1

    def finalize_options(self):
        self.steps = int(self.steps)
        self.count = int(self.count)
        self.seed = int(self.seed)
        if not os.path.exists(self.dest):
            os.makedirs(self.dest)

    def run(self):
        import logging

        from uniblend.data import write_dataset
        from uniblend.training import TrainConfig
        from uniblend.training import run_ablation

        logging.basicConfig(level=logging.INFO)
        tmpdir = tempfile.mkdtemp()
        try:
            write_dataset(tmpdir, self.count, size=128, seed=self.seed)
            summary = run_ablation(tmpdir, self.dest, TrainConfig(steps=self.steps,
                                                                  seed=self.seed))
        finally:
            shutil.rmtree(tmpdir)

        for alias, row in summary.items():
            print('%-10s params=%-8d loss %.4f -> %.4f  PSNR %.2f dB (input %.2f dB)  %.0fs' % (
                alias, row['params'], row['initial_loss'], row['final_loss'], row['mean_psnr'],
                row['baseline_psnr'], row['seconds']))


setup(
    name='uniblend',
    version='0.1',
    description='Ambient lighting normalization with a frequency-aware encoder/decoder network.',
    long_description=open(os.path.join(os.path.dirname(__file__), 'README.md')).read(),
    packages=find_packages(exclude=['tests']),
    install_requires=[
        'numpy>=1.20',
        'scipy>=1.6',
        'six',
    ],
    entry_points={
        'console_scripts': [
            'uniblend = uniblend.cli:main',
        ],
    },
    cmdclass={
        'ablation': AblationCommand,
    },
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: GNU General Public License v3 or later (GPLv3+)',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Image Processing',
    ],
)
