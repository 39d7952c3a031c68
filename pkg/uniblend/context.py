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

"""Global context branch over the raw input image.

A 3x3 stem followed by a chain of depthwise 7x7 and 11x11 convolutions. The outputs of all
three stages are summed and projected by a 1x1 convolution, so the receptive field grows
3 -> 9 -> 19 pixels while the parameter count stays small.
"""

from __future__ import unicode_literals, absolute_import

from collections import OrderedDict

from .base import ShapeError
from .params import conv
from .params import conv_spec
from .tensor import relu

#: The largest kernel (11x11) has to fit the input.
MIN_EXTENT = 11

KERNELS = (3, 7, 11)


def context_param_shapes(channels=16, prefix='context', table=None):
    if table is None:
        table = OrderedDict()
    conv_spec(table, '%s.stem' % prefix, 3, channels, 3)
    conv_spec(table, '%s.dw7' % prefix, channels, channels, 7, groups=channels)
    conv_spec(table, '%s.dw11' % prefix, channels, channels, 11, groups=channels)
    conv_spec(table, '%s.proj' % prefix, channels, channels, 1)
    return table


def receptive_radius():
    return sum((k - 1) // 2 for k in KERNELS)


def context_forward(img, params, prefix='context'):
    """Extract ``N x Cg x H x W`` context features from an ``N x 3 x H x W`` image."""

    if img.ndim != 4 or img.shape[1] != 3:
        raise ShapeError("The context branch expects N x 3 x H x W, got %s." % (img.shape, ))
    if min(img.shape[2:]) < MIN_EXTENT:
        raise ShapeError("The context branch needs extents >= %d, got %dx%d."
                         % ((MIN_EXTENT, ) + img.shape[2:]))

    channels = params['%s.proj.weight' % prefix].shape[0]
    y0 = relu(conv(img, params, '%s.stem' % prefix))
    y1 = conv(y0, params, '%s.dw7' % prefix, groups=channels)
    y2 = conv(y1, params, '%s.dw11' % prefix, groups=channels)
    return conv(y0 + y1 + y2, params, '%s.proj' % prefix)
