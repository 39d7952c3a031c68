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

from numpy.testing import assert_allclose
from numpy.testing import assert_array_equal

from uniblend.base import ShapeError
from uniblend.context import context_forward
from uniblend.context import context_param_shapes
from uniblend.context import receptive_radius
from uniblend.params import init_params
from uniblend.params import table_size
from uniblend.tensor import Tensor
from uniblend.tensor import sum_all

from tests.base import Float64Mixin


class ContextTestCase(Float64Mixin, unittest.TestCase):
    def params(self, channels=4, seed=0):
        return init_params(context_param_shapes(channels), seed=seed)

    def test_zero_params(self):
        params = self.params()
        for tensor in params.values():
            tensor.data[:] = 0
        out = context_forward(Tensor(self.rng().uniform(size=(1, 3, 16, 16))), params)
        self.assertEqual(out.shape, (1, 4, 16, 16))
        assert_array_equal(out.numpy(), 0)

    def test_constant_interior(self):
        params = self.params(seed=1)
        out = context_forward(Tensor(np.full((1, 3, 24, 24), 0.6)), params).numpy()
        interior = out[:, :, 9:15, 9:15]
        assert_allclose(interior, np.broadcast_to(out[:, :, 9:10, 9:10], interior.shape),
                        rtol=1e-12)

    def test_impulse_support(self):
        params = self.params(channels=2)
        for name, tensor in params.items():
            tensor.data[:] = 0 if name.endswith('.bias') else 1
        params['context.proj.weight'].data[:] = np.eye(2).reshape(2, 2, 1, 1)

        img = np.zeros((1, 3, 31, 31))
        img[0, 0, 15, 15] = 1
        out = context_forward(Tensor(img), params).numpy()

        radius = receptive_radius()
        self.assertEqual(radius, 9)
        expected = np.zeros((31, 31), dtype=bool)
        expected[15 - radius:16 + radius, 15 - radius:16 + radius] = True
        for channel in out[0]:
            assert_array_equal(channel != 0, expected)

    def test_extent(self):
        params = self.params()
        for extent in (11, 12, 13):
            self.assertEqual(context_forward(Tensor(np.zeros((1, 3, extent, 16))), params).shape,
                             (1, 4, extent, 16))

    def test_too_small(self):
        with self.assertRaises(ShapeError):
            context_forward(Tensor(np.zeros((1, 3, 10, 16))), self.params())
        with self.assertRaises(ShapeError):
            context_forward(Tensor(np.zeros((1, 4, 16, 16))), self.params())

    def test_param_count(self):
        self.assertEqual(table_size(context_param_shapes(16)), 3472)
        self.assertEqual(context_param_shapes(16)['context.dw11.weight'].shape, (16, 1, 11, 11))

    def test_gradient(self):
        params = self.params(channels=2, seed=2)
        rng = self.rng(3)
        img = Tensor(rng.uniform(size=(1, 3, 12, 12)), requires_grad=True)
        r = Tensor(rng.normal(size=(1, 2, 12, 12)))
        self.assertGradient(lambda: sum_all(context_forward(img, params) * r),
                            [img] + list(params.values()))
