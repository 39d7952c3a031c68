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

import json
import os
import sys
import unittest

from contextlib import contextmanager
from unittest import mock

import numpy as np
import six

from uniblend.cli import EXIT_IO
from uniblend.cli import EXIT_OK
from uniblend.cli import EXIT_USAGE
from uniblend.cli import main
from uniblend.data import read_pgm
from uniblend.data import read_ppm
from uniblend.data import write_ppm

from tests.base import SLOW
from tests.base import TempDirMixin

TINY = ['--base-channels', '2', '--context-channels', '2']


@contextmanager
def capture():
    stdout, stderr = six.StringIO(), six.StringIO()
    with mock.patch.object(sys, 'stdout', stdout), mock.patch.object(sys, 'stderr', stderr):
        yield stdout, stderr


class CliTestCase(TempDirMixin, unittest.TestCase):
    def run_cli(self, *argv):
        with capture() as (stdout, stderr):
            code = main(list(argv))
        return code, stdout.getvalue(), stderr.getvalue()

    def gen_data(self, count=2, size=32):
        code, _, _ = self.run_cli('gen-data', '--out', self.path('data'), '--count', str(count),
                                  '--size', str(size), '--seed', '3')
        self.assertEqual(code, EXIT_OK)
        return self.path('data')

    def train(self, data):
        checkpoint = self.path('model.ubnd')
        code, _, _ = self.run_cli('train', '--data', data, '--out', checkpoint, '--steps', '1',
                                  '--batch', '1', '--crop', '32', '--log', self.path('train.log'),
                                  *TINY)
        self.assertEqual(code, EXIT_OK)
        return checkpoint

    def test_no_command(self):
        code, _, stderr = self.run_cli()
        self.assertEqual(code, EXIT_USAGE)
        self.assertIn('usage', stderr)

    def test_unknown_command(self):
        self.assertEqual(self.run_cli('restore')[0], EXIT_USAGE)
        self.assertEqual(self.run_cli('gen-data')[0], EXIT_USAGE)

    def test_gen_data(self):
        data = self.gen_data()
        self.assertEqual(sorted(os.listdir(data)),
                         ['0000_gt.ppm', '0000_input.ppm', '0000_mask.pgm',
                          '0001_gt.ppm', '0001_input.ppm', '0001_mask.pgm', 'meta.json'])

    def test_train_infer_eval(self):
        data = self.gen_data()
        checkpoint = self.train(data)
        with open(self.path('train.log')) as stream:
            self.assertEqual(len(stream.readlines()), 1)

        output = self.path('out.ppm')
        code, _, _ = self.run_cli('infer', '--model', checkpoint,
                                  '--input', os.path.join(data, '0000_input.ppm'),
                                  '--output', output, '--dump-mask', self.path('mask.pgm'),
                                  '--dump-residual', self.path('residual.ppm'))
        self.assertEqual(code, EXIT_OK)
        restored = read_ppm(output)
        self.assertEqual(restored.shape, (32, 32, 3))
        mask = read_pgm(self.path('mask.pgm'))
        self.assertEqual(mask.shape, (32, 32))
        self.assertTrue(0 < mask.mean() < 1)
        self.assertEqual(read_ppm(self.path('residual.ppm')).shape, (32, 32, 3))

        report_path = self.path('report.json')
        code, stdout, _ = self.run_cli('eval', '--model', checkpoint, '--data', data,
                                       '--report', report_path)
        self.assertEqual(code, EXIT_OK)
        self.assertIn('PSNR', stdout)
        with open(report_path) as stream:
            report = json.load(stream)
        self.assertEqual(sorted(report), ['baseline_psnr', 'baseline_ssim', 'count', 'lpips',
                                          'mean_psnr', 'mean_ssim', 'per_image', 'skipped'])
        self.assertEqual(report['count'], 2)

    def test_infer_bad_extent(self):
        checkpoint = self.train(self.gen_data(count=1))
        write_ppm(np.zeros((48, 32, 3)), self.path('odd.ppm'))
        code, _, stderr = self.run_cli('infer', '--model', checkpoint, '--input',
                                       self.path('odd.ppm'), '--output', self.path('out.ppm'))
        self.assertEqual(code, EXIT_IO)
        self.assertIn('32', stderr)

    def test_bad_checkpoint(self):
        data = self.gen_data(count=1)
        with open(self.path('bad.ubnd'), 'wb') as stream:
            stream.write(b'PK\x03\x04')
        code, _, _ = self.run_cli('eval', '--model', self.path('bad.ubnd'), '--data', data,
                                  '--report', self.path('report.json'))
        self.assertEqual(code, EXIT_IO)
        self.assertFalse(os.path.exists(self.path('report.json')))

    def test_missing_files(self):
        code, _, _ = self.run_cli('train', '--data', self.path('nothing'), '--out',
                                  self.path('model.ubnd'), '--steps', '1')
        self.assertEqual(code, EXIT_IO)
        code, _, _ = self.run_cli('infer', '--model', self.path('nothing.ubnd'), '--input',
                                  self.path('in.ppm'), '--output', self.path('out.ppm'))
        self.assertEqual(code, EXIT_IO)

    def test_bad_weights(self):
        data = self.gen_data(count=1)
        code, _, stderr = self.run_cli('train', '--data', data, '--out', self.path('m.ubnd'),
                                       '--weights', '0.2,0.1', *TINY)
        self.assertEqual(code, EXIT_USAGE)
        self.assertIn('loss weights', stderr)
        self.assertFalse(os.path.exists(self.path('m.ubnd')))

    def test_bad_crop(self):
        data = self.gen_data(count=1)
        code, _, _ = self.run_cli('train', '--data', data, '--out', self.path('m.ubnd'),
                                  '--crop', '40')
        self.assertEqual(code, EXIT_USAGE)

    def test_complexity(self):
        code, stdout, _ = self.run_cli('complexity', '--size', '32')
        self.assertEqual(code, EXIT_OK)
        table = json.loads(stdout)
        self.assertEqual(list(table), ['baseline', 'mask', 'mask_saam', 'full'])
        self.assertEqual(table['full']['params'], 785684)

    def test_ablate(self):
        data = self.gen_data(count=1)
        code, stdout, _ = self.run_cli('ablate', '--data', data, '--out', self.path('ablation'),
                                       '--steps', '1', '--batch', '1', '--crop', '32',
                                       '--only', 'mask', *TINY)
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(list(json.loads(stdout)), ['mask'])
        self.assertTrue(os.path.exists(self.path('ablation', 'mask.ubnd')))

    @unittest.skipUnless(SLOW, 'set UNIBLEND_SLOW=1 to check every gradient')
    def test_grad_check(self):
        code, stdout, _ = self.run_cli('grad-check', '--f64')
        self.assertEqual(code, EXIT_OK)
        self.assertNotIn('FAILED', stdout)
        self.assertIn('model', stdout)

    @unittest.skipUnless(SLOW, 'set UNIBLEND_SLOW=1 to check every gradient')
    def test_grad_check_float32(self):
        code, stdout, _ = self.run_cli('grad-check', '--seed', '0')
        self.assertEqual(code, EXIT_OK)
        self.assertNotIn('FAILED', stdout)
