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

"""Evaluation metrics.

These are reference implementations on numpy arrays and always compute in 64 bit. Images are
``H x W`` or ``H x W x C`` arrays with values in ``[0, 1]``; :py:class:`~uniblend.tensor.Tensor`
arguments are accepted as well.
"""

from __future__ import unicode_literals, absolute_import

import numpy as np

from scipy.signal import correlate2d

from .base import ContractError
from .base import PSNR_CAP
from .base import ShapeError

SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
SSIM_C1 = 0.01 ** 2
SSIM_C2 = 0.03 ** 2


def _as_array(value):
    if hasattr(value, 'numpy'):
        value = value.numpy()
    return np.asarray(value, dtype=np.float64)


def _pair(a, b):
    a, b = _as_array(a), _as_array(b)
    if a.shape != b.shape:
        raise ShapeError("Images of shape %s and %s cannot be compared." % (a.shape, b.shape))
    return a, b


def gaussian_window(size=SSIM_WINDOW, sigma=SSIM_SIGMA):
    """Normalized ``size x size`` Gaussian window (outer product of a 1D Gaussian)."""

    x = np.arange(size, dtype=np.float64) - (size - 1) / 2.0
    g = np.exp(-x ** 2 / (2 * sigma ** 2))
    g /= g.sum()
    return np.outer(g, g)


def psnr(a, b, peak=1.0):
    """Peak signal-to-noise ratio in dB.

    Identical images yield :py:data:`~uniblend.base.PSNR_CAP` (99 dB) instead of infinity.

    Raises
    ------

    ShapeError
        If ``a`` and ``b`` differ in shape.
    ContractError
        If ``peak`` is not positive.
    """
    if peak <= 0:
        raise ContractError("peak must be positive, got %s." % peak)
    a, b = _pair(a, b)
    mse = np.mean((a - b) ** 2)
    if mse == 0:
        return PSNR_CAP
    return float(10.0 * np.log10(peak ** 2 / mse))


def ssim_map(a, b):
    """SSIM of every valid window position of two single-channel images."""

    window = gaussian_window()
    mu_a = correlate2d(a, window, mode='valid')
    mu_b = correlate2d(b, window, mode='valid')
    var_a = correlate2d(a * a, window, mode='valid') - mu_a ** 2
    var_b = correlate2d(b * b, window, mode='valid') - mu_b ** 2
    cov = correlate2d(a * b, window, mode='valid') - mu_a * mu_b

    return ((2 * mu_a * mu_b + SSIM_C1) * (2 * cov + SSIM_C2)
            / ((mu_a ** 2 + mu_b ** 2 + SSIM_C1) * (var_a + var_b + SSIM_C2)))


def ssim_metric(a, b):
    """Mean structural similarity, computed per channel and averaged.

    Uses an 11x11 Gaussian window (sigma 1.5) over valid positions only, with
    ``C1 = 0.01 ** 2`` and ``C2 = 0.03 ** 2``.

    Raises
    ------

    ShapeError
        If the images differ in shape, are not 2D or 3D, or are smaller than the window.
    """
    a, b = _pair(a, b)
    if a.ndim == 2:
        a, b = a[:, :, None], b[:, :, None]
    if a.ndim != 3:
        raise ShapeError("ssim_metric expects H x W or H x W x C images, got %s." % (a.shape, ))
    if min(a.shape[:2]) < SSIM_WINDOW:
        raise ShapeError("SSIM needs extents >= %d, got %dx%d."
                         % (SSIM_WINDOW, a.shape[0], a.shape[1]))

    return float(np.mean([ssim_map(a[:, :, c], b[:, :, c]).mean() for c in range(a.shape[2])]))
