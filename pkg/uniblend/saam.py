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

"""Scale-aware aggregation at the bottleneck.

The bottleneck feature ``X`` is resampled into a three-level pyramid (``X``, ``X`` at 1/2 and
at 1/4), every level goes through one shared convolutional branch, the coarse outputs are
upsampled back, and a small MLP over the pooled branch outputs predicts one gate per scale and
channel. The result is ``X + w0 * Y0 + w1 * Y1 + w2 * Y2``.

Gates are independent sigmoids, not a softmax across scales.
"""

from __future__ import unicode_literals, absolute_import

from collections import OrderedDict
from collections import namedtuple

from .base import ShapeError
from .params import conv
from .params import conv_spec
from .params import dense
from .params import linear_spec
from .tensor import bilinear_resize
from .tensor import concat
from .tensor import global_avg_pool
from .tensor import relu
from .tensor import reshape
from .tensor import sigmoid

PyramidLevels = namedtuple('PyramidLevels', ['x0', 'x1', 'x2'])
ScaleWeights = namedtuple('ScaleWeights', ['w0', 'w1', 'w2'])


def hidden_width(channels):
    """Width of the MLP hidden layer, ``ceil(3C / 2)``."""

    return (3 * channels + 1) // 2


def saam_param_shapes(channels, prefix='saam', table=None):
    if table is None:
        table = OrderedDict()
    hidden = hidden_width(channels)
    conv_spec(table, '%s.branch.0' % prefix, channels, channels, 3)
    conv_spec(table, '%s.branch.1' % prefix, channels, channels, 3)
    linear_spec(table, '%s.mlp_hidden' % prefix, 3 * channels, hidden)
    linear_spec(table, '%s.mlp_out' % prefix, hidden, 3 * channels)
    return table


def saam_param_count(channels):
    hidden = hidden_width(channels)
    return (2 * (channels * channels * 9 + channels)
            + (3 * channels * hidden + hidden)
            + (hidden * 3 * channels + 3 * channels))


def build_pyramid(x):
    if x.ndim != 4 or x.shape[2] % 4 or x.shape[3] % 4:
        raise ShapeError("The pyramid requires N x C x H x W with H and W divisible by 4, got %s."
                         % (x.shape, ))
    return PyramidLevels(x, bilinear_resize(x, 'down2'), bilinear_resize(x, 'down4'))


def branch(x, params, prefix='saam'):
    """The shared branch: conv3x3, relu, conv3x3."""

    return conv(relu(conv(x, params, '%s.branch.0' % prefix)), params, '%s.branch.1' % prefix)


def scale_weights(y0, y1, y2, params, prefix='saam'):
    """Predict per-scale, per-channel gates from the pooled branch outputs.

    Parameters
    ----------

    y0, y1, y2 : :py:class:`~uniblend.tensor.Tensor`
        Branch outputs, each ``N x C x H x W`` (coarse levels already upsampled).
    params : :py:class:`~uniblend.params.ModelParams`
        Must contain ``<prefix>.mlp_hidden`` and ``<prefix>.mlp_out``.

    Returns
    -------

    :py:class:`ScaleWeights`
        Three ``N x C x 1 x 1`` tensors with values in ``(0, 1)``.
    """
    n, c = y0.shape[:2]
    for y in (y1, y2):
        if y.shape[:2] != (n, c):
            raise ShapeError("scale_weights: branch outputs %s and %s differ in N or C."
                             % (y0.shape, y.shape))

    v = concat([reshape(global_avg_pool(y), (n, c)) for y in (y0, y1, y2)])
    hidden = relu(dense(v, params, '%s.mlp_hidden' % prefix))
    w = sigmoid(dense(hidden, params, '%s.mlp_out' % prefix))
    return ScaleWeights(*[reshape(w[:, i * c:(i + 1) * c], (n, c, 1, 1)) for i in range(3)])


def saam_forward(x, params, prefix='saam'):
    levels = build_pyramid(x)
    h, w = x.shape[2:]

    y0 = branch(levels.x0, params, prefix)
    y1 = bilinear_resize(branch(levels.x1, params, prefix), (h, w))
    y2 = bilinear_resize(branch(levels.x2, params, prefix), (h, w))

    weights = scale_weights(y0, y1, y2, params, prefix)
    return x + y0 * weights.w0 + y1 * weights.w1 + y2 * weights.w2
