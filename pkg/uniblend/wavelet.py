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

"""Single-level 2D Haar wavelet transform and its inverse.

For every disjoint 2x2 block ``[a b; c d]`` the orthonormal transform is::

    LL = (a + b + c + d) / 2        LH = (a - b + c - d) / 2
    HL = (a + b - c - d) / 2        HH = (a - b - c + d) / 2

The detail bands are stacked along the channel axis in the fixed order ``[LH, HL, HH]``, each
block holding ``C`` channels. The order is part of the checkpoint contract of every model that
consumes the bands.
"""

from __future__ import unicode_literals, absolute_import

from collections import namedtuple

import numpy as np

from .base import ShapeError
from .tensor import _result

#: ``lf`` is the LL band (``N x C x H/2 x W/2``), ``hf`` the stacked details (``N x 3C x ...``).
DwtBands = namedtuple('DwtBands', ['lf', 'hf'])


def _split(x):
    return x[:, :, 0::2, 0::2], x[:, :, 0::2, 1::2], x[:, :, 1::2, 0::2], x[:, :, 1::2, 1::2]


def _forward(x):
    a, b, c, d = _split(x)
    ll = (a + b + c + d) / 2
    lh = (a - b + c - d) / 2
    hl = (a + b - c - d) / 2
    hh = (a - b - c + d) / 2
    return ll, np.concatenate([lh, hl, hh], axis=1)


def _inverse(ll, hf):
    c = ll.shape[1]
    lh, hl, hh = hf[:, :c], hf[:, c:2 * c], hf[:, 2 * c:]
    n, _, h, w = ll.shape
    out = np.empty((n, c, 2 * h, 2 * w), dtype=np.result_type(ll, hf))
    out[:, :, 0::2, 0::2] = (ll + lh + hl + hh) / 2
    out[:, :, 0::2, 1::2] = (ll - lh + hl - hh) / 2
    out[:, :, 1::2, 0::2] = (ll + lh - hl - hh) / 2
    out[:, :, 1::2, 1::2] = (ll - lh - hl + hh) / 2
    return out


def dwt_haar(x):
    """Decompose ``x`` (``N x C x H x W``, even extents) into :py:class:`DwtBands`.

    The transform is linear and orthonormal, so its vector-Jacobian product is the inverse
    transform.
    """
    if x.ndim != 4 or x.shape[2] % 2 or x.shape[3] % 2:
        raise ShapeError("dwt_haar requires N x C x H x W with even H and W, got %s."
                         % (x.shape, ))
    ll, hf = _forward(x.data)

    # one node for both bands, take() splits them
    packed = np.concatenate([ll, hf], axis=1)
    c = x.shape[1]

    def vjp(g):
        return _inverse(g[:, :c], g[:, c:]),
    bands = _result('dwt_haar', packed, (x, ), vjp)
    return DwtBands(lf=bands[:, :c], hf=bands[:, c:])


def idwt_haar(bands):
    """Exact inverse of :py:func:`dwt_haar`."""

    lf, hf = bands
    if (lf.ndim != 4 or hf.ndim != 4 or hf.shape[1] != 3 * lf.shape[1]
            or hf.shape[0] != lf.shape[0] or hf.shape[2:] != lf.shape[2:]):
        raise ShapeError("idwt_haar: inconsistent bands %s and %s." % (lf.shape, hf.shape))

    def vjp(g):
        ll, details = _forward(g)
        return ll, details
    return _result('idwt_haar', _inverse(lf.data, hf.data), (lf, hf), vjp)
