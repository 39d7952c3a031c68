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

import hashlib
import json
import os
import unittest

import numpy as np

from numpy.testing import assert_allclose
from numpy.testing import assert_array_equal

from uniblend.base import ConfigurationError
from uniblend.base import ContractError
from uniblend.base import DatasetError
from uniblend.checkpoint import dumps
from uniblend.checkpoint import load_params
from uniblend.data import write_dataset
from uniblend.data import write_ppm
from uniblend.model import ABLATIONS
from uniblend.model import ModelConfig
from uniblend.model import init_params
from uniblend.params import ModelParams
from uniblend.tensor import Tensor
from uniblend.training import AdamState
from uniblend.training import TrainConfig
from uniblend.training import _schedule
from uniblend.training import adam_step
from uniblend.training import evaluate_split
from uniblend.training import restore_image
from uniblend.training import run_ablation
from uniblend.training import train_loop

from tests.base import Float64Mixin
from tests.base import SLOW
from tests.base import TempDirMixin

TINY = {'base_channels': 2, 'context_channels': 2}


def single(value):
    return ModelParams([('w', Tensor(np.array(value, dtype=float), requires_grad=True))])


class AdamTestCase(Float64Mixin, unittest.TestCase):
    def test_zero_gradient(self):
        params = single([1.0, -2.0])
        adam_step(params, AdamState(params), {'w': np.zeros(2)})
        assert_array_equal(params['w'].numpy(), [1.0, -2.0])

    def test_first_step(self):
        params = single([1.0, 1.0, 1.0])
        state = AdamState(params, lr=1e-3)
        adam_step(params, state, {'w': np.array([0.5, -4.0, 1e-3])})
        assert_allclose(params['w'].numpy(), 1 - 1e-3 * np.array([1, -1, 1]), atol=1e-7)
        self.assertEqual(state.t, 1)

    def test_two_steps(self):
        lr, b1, b2, eps = 1e-2, 0.9, 0.999, 1e-8
        g1, g2 = np.array([0.3, -1.0]), np.array([-0.2, 0.5])
        params = single([0.0, 1.0])
        state = AdamState(params, lr=lr)
        adam_step(params, state, {'w': g1})
        adam_step(params, state, {'w': g2})

        expected = np.array([0.0, 1.0])
        m = v = np.zeros(2)
        for t, g in enumerate([g1, g2], 1):
            m = b1 * m + (1 - b1) * g
            v = b2 * v + (1 - b2) * g * g
            expected = expected - lr * (m / (1 - b1 ** t)) / (np.sqrt(v / (1 - b2 ** t)) + eps)
        self.assertLessEqual(np.abs(params['w'].numpy() - expected).max(), 1e-10)

    def test_learning_rate_scales(self):
        steps = []
        for lr in (1e-3, 2e-3):
            params = single([0.0])
            adam_step(params, AdamState(params, lr=lr), {'w': np.array([0.7])})
            steps.append(params['w'].numpy()[0])
        self.assertAlmostEqual(steps[1], 2 * steps[0])

    def test_uses_and_clears_grad(self):
        params = single([1.0])
        params['w'].grad = np.array([2.0])
        adam_step(params, AdamState(params))
        self.assertIsNone(params['w'].grad)
        self.assertLess(params['w'].numpy()[0], 1.0)

    def test_missing_gradient(self):
        params = single([1.0])
        with self.assertRaisesRegex(ContractError, 'w'):
            adam_step(params, AdamState(params))

    def test_invalid_lr(self):
        with self.assertRaises(ConfigurationError):
            AdamState(single([1.0]), lr=0)


class TrainConfigTestCase(unittest.TestCase):
    def test_defaults(self):
        config = TrainConfig()
        self.assertEqual((config.steps, config.batch, config.crop, config.lr, config.seed),
                         (300, 4, 64, 1e-4, 1))
        self.assertEqual(config.weights.lambda_mask, 0.5)
        self.assertEqual(config.mask_config.window, 7)

    def test_invalid(self):
        with self.assertRaises(ConfigurationError):
            TrainConfig(crop=48)
        with self.assertRaises(ConfigurationError):
            TrainConfig(steps=-1)
        with self.assertRaises(ConfigurationError):
            TrainConfig(batch=0)

    def test_settings(self):
        with TrainConfig().settings(steps=2) as config:
            self.assertEqual(config.steps, 2)
            self.assertEqual(config.crop, 64)

    def test_schedule(self):
        batches = _schedule(5, 2, np.random.default_rng(0))
        drawn = [i for _ in range(5) for i in next(batches)]
        self.assertEqual(sorted(drawn), [0, 0, 1, 1, 2, 2, 3, 3, 4, 4])
        self.assertEqual(sorted(drawn[:5]), [0, 1, 2, 3, 4])


class TrainLoopTestCase(TempDirMixin, unittest.TestCase):
    def setUp(self):
        super(TrainLoopTestCase, self).setUp()
        self.data = self.path('data')
        write_dataset(self.data, 2, size=32, seed=3)
        self.config = ModelConfig(**TINY)
        self.train_config = TrainConfig(steps=2, batch=1, crop=32, lr=1e-3, seed=5)

    def test_no_steps(self):
        with self.train_config.settings(steps=0) as train_config:
            params, records = train_loop(self.data, self.config, train_config)
        self.assertEqual(records, [])
        expected = init_params(self.config, seed=5)
        for name in expected:
            assert_array_equal(params[name].numpy(), expected[name].numpy())

    def test_deterministic(self):
        log_path = self.path('train.log')
        checkpoint = self.path('model.ubnd')
        params, records = train_loop(self.data, self.config, self.train_config, log_path,
                                     checkpoint)
        again, records_again = train_loop(self.data, self.config, self.train_config)
        self.assertEqual(records, records_again)
        self.assertEqual(dumps(params, self.config), dumps(again, self.config))

        self.assertEqual([r['step'] for r in records], [0, 1])
        for record in records:
            self.assertTrue(np.isfinite(record['total']))
            self.assertGreater(record['lmask'], 0)
        with open(log_path) as stream:
            self.assertEqual([json.loads(line) for line in stream], records)

        loaded, config = load_params(checkpoint)
        self.assertEqual(config, self.config)
        self.assertEqual(dumps(loaded, config), dumps(params, self.config))

    def test_changes_parameters(self):
        params, _ = train_loop(self.data, self.config, self.train_config)
        initial = init_params(self.config, seed=5)
        self.assertFalse(np.array_equal(params['residual_head.conv2.weight'].numpy(),
                                        initial['residual_head.conv2.weight'].numpy()))

    def test_without_mask(self):
        config = ModelConfig(use_mask=False, **TINY)
        _, records = train_loop(self.data, config, self.train_config)
        self.assertEqual([r['lmask'] for r in records], [0.0, 0.0])

    def test_crop_too_large(self):
        with self.train_config.settings(crop=64) as train_config:
            with self.assertRaises(ValueError):
                train_loop(self.data, self.config, train_config)

    def test_dataset_unchanged(self):
        def snapshot():
            digests = {}
            for root, _, files in os.walk(self.data):
                for name in files:
                    path = os.path.join(root, name)
                    with open(path, 'rb') as stream:
                        digests[os.path.relpath(path, self.data)] = hashlib.sha256(
                            stream.read()).hexdigest()
            return digests

        before = snapshot()
        self.assertTrue(before)
        train_loop(self.data, self.config, self.train_config, self.path('train.log'),
                   self.path('model.ubnd'))
        self.assertEqual(snapshot(), before)


class EvaluateTestCase(TempDirMixin, unittest.TestCase):
    def setUp(self):
        super(EvaluateTestCase, self).setUp()
        self.data = self.path('data')
        write_dataset(self.data, 2, size=32, seed=8)
        self.config = ModelConfig(**TINY)
        self.params = init_params(self.config, seed=0)

    def test_zero_heads(self):
        for name, tensor in self.params.items():
            if name.startswith('residual_head.'):
                tensor.data[:] = 0
        report = evaluate_split(self.params, self.config, self.data)
        self.assertEqual(report['mean_psnr'], report['baseline_psnr'])
        self.assertEqual(report['mean_ssim'], report['baseline_ssim'])
        self.assertEqual(report['count'], 2)
        self.assertEqual(report['skipped'], 0)
        self.assertEqual(report['lpips'], 'unavailable')

    def test_means(self):
        report = evaluate_split(self.params, self.config, self.data)
        self.assertEqual([entry['index'] for entry in report['per_image']], [0, 1])
        for key in ('psnr', 'ssim', 'baseline_psnr', 'baseline_ssim'):
            values = [entry[key] for entry in report['per_image']]
            mean_key = key if key.startswith('baseline') else 'mean_%s' % key
            self.assertAlmostEqual(report[mean_key], np.mean(values))

    def test_skipped(self):
        image = np.full((48, 48, 3), 0.5)
        write_ppm(image, os.path.join(self.data, '0002_input.ppm'))
        write_ppm(image, os.path.join(self.data, '0002_gt.ppm'))
        with open(os.path.join(self.data, '0003_input.ppm'), 'wb') as stream:
            stream.write(b'P6\n32 32\n255\n')
        write_ppm(np.zeros((32, 32, 3)), os.path.join(self.data, '0003_gt.ppm'))

        report = evaluate_split(self.params, self.config, self.data)
        self.assertEqual(report['count'], 2)
        self.assertEqual(report['skipped'], 2)

    def test_nothing_evaluated(self):
        os.remove(os.path.join(self.data, '0000_gt.ppm'))
        os.remove(os.path.join(self.data, '0001_gt.ppm'))
        with self.assertRaises(DatasetError):
            evaluate_split(self.params, self.config, self.data)

    def test_restore_image_clamps(self):
        for name, tensor in self.params.items():
            if name.startswith('residual_head.conv2.bias'):
                tensor.data[:] = 5
        restored, output, _ = restore_image(np.full((32, 32, 3), 0.5), self.params, self.config)
        self.assertEqual(restored.max(), 1.0)
        self.assertGreater(output.restored.numpy().max(), 1.0)


class AblationTestCase(TempDirMixin, unittest.TestCase):
    def test_artefacts(self):
        data = self.path('data')
        out = self.path('out')
        write_dataset(data, 1, size=32, seed=0)
        summary = run_ablation(data, out, TrainConfig(steps=1, batch=1, crop=32),
                               aliases=['baseline', 'full'], model_settings=TINY)

        self.assertEqual(sorted(summary), ['baseline', 'full'])
        self.assertEqual(sorted(os.listdir(out)),
                         ['ablation.json', 'baseline.eval.json', 'baseline.log', 'baseline.ubnd',
                          'full.eval.json', 'full.log', 'full.ubnd'])
        with open(os.path.join(out, 'ablation.json')) as stream:
            self.assertEqual(json.load(stream), summary)
        self.assertLess(summary['baseline']['params'], summary['full']['params'])
        self.assertGreaterEqual(summary['full']['seconds'], 0)
        self.assertEqual(summary['full']['initial_loss'], summary['full']['final_loss'])


@unittest.skipUnless(SLOW, 'set UNIBLEND_SLOW=1 to run the training acceptance run')
class AcceptanceTestCase(TempDirMixin, unittest.TestCase):
    def test_ablation_ladder(self):
        data = self.path('data')
        write_dataset(data, 8, size=128, seed=1)
        summary = run_ablation(data, self.path('out'), TrainConfig())

        self.assertEqual(list(summary), list(ABLATIONS))
        for alias, row in summary.items():
            self.assertLess(row['final_loss'], 0.5 * row['initial_loss'], alias)
        full = summary['full']
        self.assertGreaterEqual(full['mean_psnr'], full['baseline_psnr'] + 3)
        self.assertLessEqual(full['final_loss'], summary['baseline']['final_loss'])
        self.assertLess(sum(row['seconds'] for row in summary.values()), 600)
