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

import unittest

import numpy as np

from uniblend.base import GradientCheckError
from uniblend.gradcheck import GradCheckResult
from uniblend.gradcheck import _op_cases
from uniblend.gradcheck import assert_passed
from uniblend.gradcheck import check_gradient
from uniblend.gradcheck import relative_error
from uniblend.gradcheck import run_grad_check
from uniblend.gradcheck import sample_points
from uniblend.tensor import Tensor
from uniblend.tensor import conv2d
from uniblend.tensor import get_precision
from uniblend.tensor import precision
from uniblend.tensor import sum_all

from tests.base import Float64Mixin

CHEAP_OPS = ['add', 'mul_broadcast', 'div', 'sigmoid', 'mean', 'take', 'down4', 'up_to',
             'dwt_haar', 'idwt_haar', 'conv2d_stride2', 'conv2d_depthwise', 'linear']


class HelpersTestCase(Float64Mixin, unittest.TestCase):
    def test_relative_error(self):
        self.assertEqual(relative_error(2.0, 1.0), 0.5)
        self.assertEqual(relative_error(1e-7, 0.0), 1e-7 / 1e-5)
        self.assertEqual(relative_error(0.0, 0.0), 0.0)

    def test_sample_points(self):
        tensors = [Tensor(np.zeros((2, 3))), Tensor(np.zeros(4))]
        points = sample_points(tensors, 7, np.random.default_rng(0))
        self.assertEqual(len(points), 7)
        self.assertEqual(len(set((id(t), i) for t, i in points)), 7)
        for tensor, index in points:
            self.assertLess(index, tensor.size)
        self.assertEqual(len(sample_points(tensors, 50, np.random.default_rng(0))), 10)

    def test_detects_wrong_gradient(self):
        x = Tensor(self.rng().uniform(1, 2, size=(3, )), requires_grad=True)
        # the detached factor hides half of the gradient
        self.assertAlmostEqual(check_gradient(lambda: sum_all(x.detach() * x), [x]), 0.5,
                               places=5)
        self.assertLess(check_gradient(lambda: sum_all(x * x), [x]), 1e-6)

    def test_restores_values(self):
        x = Tensor(self.rng().uniform(size=(2, 2)), requires_grad=True)
        before = x.numpy().copy()
        check_gradient(lambda: sum_all(x * x * x), [x])
        self.assertTrue((x.numpy() == before).all())

    def test_float32_graph(self):
        rng = self.rng(4)
        with precision('float32'):
            x = Tensor(rng.uniform(-1, 1, size=(1, 2, 6, 6)), requires_grad=True)
            w = Tensor(rng.uniform(-1, 1, size=(3, 2, 3, 3)), requires_grad=True)
            before = x.numpy()

            def fn():
                y = conv2d(x, w, None, 1, 1)
                return sum_all(y * y)

            self.assertLess(check_gradient(fn, [x, w], floor=1e-3), 1e-2)
            self.assertIs(x.numpy(), before)
            self.assertEqual(w.numpy().dtype, np.float32)
            self.assertEqual(w.grad.dtype, np.float32)

    def test_mixed_precision_conv(self):
        rng = self.rng(5)
        with precision('float32'):
            x = Tensor(rng.uniform(size=(1, 2, 5, 5)))
        w = Tensor(rng.uniform(-1, 1, size=(2, 2, 3, 3)))
        b = Tensor(rng.uniform(-1, 1, size=(2, )))
        y = conv2d(x, w, b, 1, 1)
        self.assertEqual(y.numpy().dtype, np.float64)
        expected = conv2d(Tensor(x.numpy()), w, b, 1, 1)
        np.testing.assert_allclose(y.numpy(), expected.numpy(), rtol=1e-12)


class RunTestCase(unittest.TestCase):
    def test_cases(self):
        self.assertEqual(list(_op_cases())[:3], ['add', 'sub', 'mul'])
        for name in ('conv2d', 'saam', 'context', 'ssim_loss', 'perc_loss', 'mask_loss'):
            self.assertIn(name, _op_cases())

    def test_float64(self):
        results = run_grad_check(seed=2, ops=CHEAP_OPS, model=False)
        self.assertEqual([r.op for r in results], CHEAP_OPS)
        for result in results:
            self.assertEqual(result.tolerance, 1e-4)
            self.assertTrue(result.passed, result)
        assert_passed(results)
        self.assertEqual(get_precision(), 'float32')

    def test_modules_and_losses(self):
        ops = ['saam', 'context', 'rec_loss', 'ssim_loss', 'grad_loss', 'mask_loss']
        assert_passed(run_grad_check(seed=3, ops=ops, model=False))

    def test_float32(self):
        ops = ['sigmoid', 'conv2d', 'conv2d_stride2', 'linear', 'saam', 'context', 'ssim_loss']
        results = run_grad_check(ops=ops, float64=False, model=False)
        self.assertEqual([r.op for r in results], ops)
        self.assertEqual([r.tolerance for r in results], [1e-2] * len(ops))
        assert_passed(results)

    def test_float32_model(self):
        results = run_grad_check(seed=1, ops=['model'], float64=False, samples=4)
        self.assertEqual([r.tolerance for r in results], [1e-2])
        assert_passed(results)

    def test_model(self):
        results = run_grad_check(seed=1, ops=['model'], samples=4)
        self.assertEqual([r.op for r in results], ['model'])
        assert_passed(results)

    def test_assert_passed(self):
        results = [GradCheckResult('add', 1e-6, 1e-4), GradCheckResult('conv2d', 0.3, 1e-4)]
        self.assertFalse(results[1].passed)
        with self.assertRaisesRegex(GradientCheckError, 'conv2d'):
            assert_passed(results)
        assert_passed(results[:1])
