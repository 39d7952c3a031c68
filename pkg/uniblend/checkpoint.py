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

"""Binary checkpoint format.

All integers are little-endian, all parameter values 32-bit floats regardless of the engine
precision::

    magic      b"UBND" b"1"
    config     u32 base_channels, u32 context_channels, u8 use_mask, u8 use_saam, u8 use_context
    count      u32
    parameter  u16 name length, utf-8 name, u8 rank, u32 extent * rank, f32 value * size

Parameters are written in architecture-table order.
"""

from __future__ import unicode_literals, absolute_import

import logging
import struct

import numpy as np
import six

from .base import CHECKPOINT_MAGIC
from .base import CHECKPOINT_VERSION
from .base import CheckpointError
from .base import CheckpointMagicError
from .base import CheckpointTruncatedError
from .base import CheckpointVersionError
from .base import ParameterShapeError
from .base import UnknownParameterError
from .model import ModelConfig
from .model import param_shapes
from .params import ModelParams
from .tensor import Tensor

log = logging.getLogger(__name__)

_CONFIG = struct.Struct('<IIBBB')
_COUNT = struct.Struct('<I')
_NAME_LENGTH = struct.Struct('<H')
_RANK = struct.Struct('<B')


class _Reader(object):
    def __init__(self, data):
        self.stream = six.BytesIO(data)

    def read(self, size):
        data = self.stream.read(size)
        if len(data) != size:
            raise CheckpointTruncatedError(
                "Checkpoint truncated: expected %d more bytes, got %d." % (size, len(data)))
        return data

    def unpack(self, fmt):
        return fmt.unpack(self.read(fmt.size))

    def at_end(self):
        return self.stream.read(1) == b''


def dumps(params, config):
    """Serialize ``params`` of a model configured by ``config`` to bytes."""

    table = param_shapes(config)
    stream = six.BytesIO()
    stream.write(CHECKPOINT_MAGIC + CHECKPOINT_VERSION)
    stream.write(_CONFIG.pack(config.base_channels, config.context_channels,
                              config.use_mask, config.use_saam, config.use_context))
    stream.write(_COUNT.pack(len(table)))

    for name, spec in table.items():
        tensor = params[name]
        if tensor.shape != spec.shape:
            raise ParameterShapeError(name, spec.shape, tensor.shape)

        encoded = name.encode('utf-8')
        stream.write(_NAME_LENGTH.pack(len(encoded)))
        stream.write(encoded)
        stream.write(_RANK.pack(tensor.ndim))
        stream.write(struct.pack('<%dI' % tensor.ndim, *tensor.shape))
        stream.write(np.ascontiguousarray(tensor.data, dtype='<f4').tobytes())
    return stream.getvalue()


def loads(data, config=None):
    """Deserialize a checkpoint.

    Parameters
    ----------

    data : bytes
    config : :py:class:`~uniblend.model.ModelConfig`, optional
        The configuration the parameters must fit. Defaults to the configuration stored in the
        checkpoint.

    Returns
    -------

    params : :py:class:`~uniblend.params.ModelParams`
    config : :py:class:`~uniblend.model.ModelConfig`

    Raises
    ------

    CheckpointMagicError
        If ``data`` does not start with the checkpoint magic.
    CheckpointVersionError
        If the format version is not supported.
    CheckpointTruncatedError
        If ``data`` ends early.
    UnknownParameterError
        If a stored name is not a parameter of ``config``.
    ParameterShapeError
        If a stored parameter has a different shape than ``config`` requires.
    CheckpointError
        If parameters are missing or duplicated, or trailing data follows.
    """
    reader = _Reader(data)
    head = reader.stream.read(len(CHECKPOINT_MAGIC) + len(CHECKPOINT_VERSION))
    if head[:len(CHECKPOINT_MAGIC)] != CHECKPOINT_MAGIC:
        raise CheckpointMagicError("Not a uniblend checkpoint.")
    if head[len(CHECKPOINT_MAGIC):] != CHECKPOINT_VERSION:
        raise CheckpointVersionError("Unsupported checkpoint version: %r"
                                     % head[len(CHECKPOINT_MAGIC):])

    base, cg, use_mask, use_saam, use_context = reader.unpack(_CONFIG)
    stored = ModelConfig(base_channels=base, context_channels=cg, use_mask=use_mask,
                         use_saam=use_saam, use_context=use_context)
    if config is None:
        config = stored
    elif config != stored:
        log.debug('Loading a checkpoint of %r into %r', stored, config)

    table = param_shapes(config)
    loaded = {}
    count, = reader.unpack(_COUNT)
    for _ in six.moves.range(count):
        length, = reader.unpack(_NAME_LENGTH)
        name = reader.read(length).decode('utf-8')
        rank, = reader.unpack(_RANK)
        shape = struct.unpack('<%dI' % rank, reader.read(4 * rank))
        size = int(np.prod(shape)) if rank else 1
        values = np.frombuffer(reader.read(4 * size), dtype='<f4').reshape(shape)

        if name not in table:
            raise UnknownParameterError(name)
        if shape != table[name].shape:
            raise ParameterShapeError(name, table[name].shape, shape)
        if name in loaded:
            raise CheckpointError("%s: stored twice." % name)
        loaded[name] = values

    if not reader.at_end():
        raise CheckpointError("Trailing data after %d parameters." % count)
    missing = [name for name in table if name not in loaded]
    if missing:
        raise CheckpointError("Missing parameters: %s" % ', '.join(missing))

    params = ModelParams()
    for name in table:
        # frombuffer arrays are read-only
        params[name] = Tensor(loaded[name].copy(), requires_grad=True, name=name)
    return params, config


def save_params(params, config, path):
    data = dumps(params, config)
    with open(path, 'wb') as stream:
        stream.write(data)
    log.info('Wrote %d parameters to %s', len(params), path)


def load_params(path, config=None):
    """Load a checkpoint file, see :py:func:`loads`."""

    with open(path, 'rb') as stream:
        return loads(stream.read(), config=config)
