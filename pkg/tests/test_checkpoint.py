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

import struct
import unittest

import numpy as np

from numpy.testing import assert_array_equal

from uniblend.base import CheckpointError
from uniblend.base import CheckpointMagicError
from uniblend.base import CheckpointTruncatedError
from uniblend.base import CheckpointVersionError
from uniblend.base import ParameterShapeError
from uniblend.base import UnknownParameterError
from uniblend.checkpoint import dumps
from uniblend.checkpoint import load_params
from uniblend.checkpoint import loads
from uniblend.checkpoint import save_params
from uniblend.model import ModelConfig
from uniblend.model import ablation_config
from uniblend.model import init_params
from uniblend.tensor import Tensor
from uniblend.tensor import precision

from tests.base import TempDirMixin

#: Offset of the parameter count: magic, version and the packed configuration.
COUNT_OFFSET = 5 + 11


class CheckpointTestCase(TempDirMixin, unittest.TestCase):
    def setUp(self):
        super(CheckpointTestCase, self).setUp()
        self.config = ModelConfig(base_channels=2, context_channels=3)
        self.params = init_params(self.config, seed=7)
        self.data = dumps(self.params, self.config)

    def test_header(self):
        self.assertEqual(self.data[:5], b'UBND1')
        self.assertEqual(struct.unpack('<IIBBB', self.data[5:16]), (2, 3, 1, 1, 1))
        count, = struct.unpack('<I', self.data[16:20])
        self.assertEqual(count, len(self.params))

    def test_round_trip(self):
        params, config = loads(self.data)
        self.assertEqual(config, self.config)
        self.assertEqual(list(params), list(self.params))
        for name, tensor in params.items():
            assert_array_equal(tensor.numpy(), self.params[name].numpy())
            self.assertTrue(tensor.requires_grad)
        self.assertEqual(dumps(params, config), self.data)

    def test_loaded_params_are_writable(self):
        params, config = loads(self.data)
        params['encoder.0.conv1.bias'].data[:] = 1
        self.assertEqual(params['encoder.0.conv1.bias'].numpy().sum(), 2)

    def test_file(self):
        path = self.path('model.ubnd')
        save_params(self.params, self.config, path)
        with open(path, 'rb') as stream:
            self.assertEqual(stream.read(), self.data)
        params, config = load_params(path)
        self.assertEqual(dumps(params, config), self.data)

    def test_float64_is_stored_as_float32(self):
        with precision('float64'):
            params = init_params(self.config, seed=7)
            params['encoder.0.conv1.bias'].data[:] = 1.0 / 3
            data = dumps(params, self.config)
            loaded, _ = loads(data)
        value = loaded['encoder.0.conv1.bias'].numpy()[0]
        self.assertEqual(value, np.float32(1.0 / 3))
        self.assertEqual(len(data), len(self.data))

    def test_bad_magic(self):
        with self.assertRaises(CheckpointMagicError):
            loads(b'GPGM' + self.data[4:])
        with self.assertRaises(CheckpointMagicError):
            loads(b'')

    def test_bad_version(self):
        with self.assertRaises(CheckpointVersionError):
            loads(self.data[:4] + b'2' + self.data[5:])

    def test_truncated(self):
        for end in (10, 20, 40, len(self.data) - 1):
            with self.assertRaises(CheckpointTruncatedError):
                loads(self.data[:end])

    def test_trailing_data(self):
        with self.assertRaises(CheckpointError):
            loads(self.data + b'\0')

    def test_unknown_parameter(self):
        with self.assertRaises(UnknownParameterError) as cm:
            loads(self.data, ModelConfig(base_channels=2, context_channels=3, use_context=False))
        self.assertTrue(cm.exception.name.startswith('context.'))

    def test_shape_mismatch(self):
        with self.assertRaises(ParameterShapeError) as cm:
            loads(self.data, ModelConfig(base_channels=4, context_channels=3))
        self.assertEqual(cm.exception.name, 'encoder.0.conv1.weight')
        self.assertEqual(cm.exception.expected, (4, 3, 3, 3))
        self.assertEqual(cm.exception.found, (2, 3, 3, 3))

    def test_missing(self):
        baseline = ablation_config('baseline', base_channels=2, context_channels=3)
        data = dumps(init_params(baseline), baseline)
        with self.assertRaisesRegex(CheckpointError, 'mask_head.conv1.weight'):
            loads(data, ablation_config('mask', base_channels=2, context_channels=3))

    def test_duplicate(self):
        name = b'residual_head.conv2.bias'
        record = struct.pack('<H', len(name)) + name + struct.pack('<BI', 1, 3) + b'\0' * 12
        count, = struct.unpack('<I', self.data[COUNT_OFFSET:COUNT_OFFSET + 4])
        data = (self.data[:COUNT_OFFSET] + struct.pack('<I', count + 1)
                + self.data[COUNT_OFFSET + 4:] + record)
        with self.assertRaisesRegex(CheckpointError, 'twice'):
            loads(data)

    def test_dump_wrong_shape(self):
        self.params['decoder.0.proj.bias'] = Tensor(np.zeros(5))
        with self.assertRaises(ParameterShapeError):
            dumps(self.params, self.config)
