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

from collections import OrderedDict
from collections import namedtuple

from .base import ConfigurationError
from .tensor import conv2d
from .tensor import get_rng
from .tensor import he_normal
from .tensor import linear
from .tensor import zeros

#: One row of an architecture table. ``fan_in`` is ``None`` for biases (initialized to zero).
ParamSpec = namedtuple('ParamSpec', ['shape', 'fan_in'])


def conv_spec(table, name, cin, cout, k, groups=1):
    """Register the weight and bias of a ``k x k`` convolution in ``table``."""

    fan_in = cin // groups * k * k
    table['%s.weight' % name] = ParamSpec((cout, cin // groups, k, k), fan_in)
    table['%s.bias' % name] = ParamSpec((cout, ), None)
    return table


def linear_spec(table, name, din, dout):
    table['%s.weight' % name] = ParamSpec((dout, din), din)
    table['%s.bias' % name] = ParamSpec((dout, ), None)
    return table


def table_size(table):
    total = 0
    for spec in table.values():
        size = 1
        for extent in spec.shape:
            size *= extent
        total += size
    return total


class ModelParams(OrderedDict):
    """Named parameter tensors with unique dotted names, in architecture-table order."""

    def __missing__(self, name):
        raise ConfigurationError("%s: no such parameter." % name)

    def count(self):
        return sum(t.size for t in self.values())

    def zero_grad(self):
        for tensor in self.values():
            tensor.zero_grad()


def init_params(table, seed=0):
    """Instantiate ``table``: weights drawn He-normal from one seeded stream, biases zero."""

    rng = get_rng(seed)
    params = ModelParams()
    for name, spec in table.items():
        if spec.fan_in is None:
            tensor = zeros(spec.shape, requires_grad=True)
        else:
            tensor = he_normal(spec.shape, spec.fan_in, seed=rng, requires_grad=True)
        tensor.name = name
        params[name] = tensor
    return params


def conv(x, params, name, stride=1, pad=None, groups=1):
    """Apply the convolution registered as ``name``.

    ``pad`` defaults to ``k // 2``, which keeps the extent at stride 1.
    """
    weight = params['%s.weight' % name]
    if pad is None:
        pad = weight.shape[2] // 2
    return conv2d(x, weight, params['%s.bias' % name], stride=stride, pad=pad, groups=groups)


def dense(x, params, name):
    return linear(x, params['%s.weight' % name], params['%s.bias' % name])
