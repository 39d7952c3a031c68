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

"""Training objective and pseudo ground-truth masks.

The objective is::

    L = L_rec + alpha1 * L_ssim + alpha2 * L_grad + alpha3 * L_perc + lambda_mask * L_mask

Every L1 term is a mean over elements, so loss magnitudes do not depend on the resolution.
"""

from __future__ import unicode_literals, absolute_import

from collections import namedtuple
from contextlib import contextmanager

import numpy as np

from scipy.ndimage import uniform_filter

from .base import ConfigurationError
from .base import ContractError
from .base import ShapeError
from .metrics import SSIM_C1
from .metrics import SSIM_C2
from .metrics import SSIM_WINDOW
from .metrics import gaussian_window
from .tensor import Tensor
from .tensor import absolute
from .tensor import as_tensor
from .tensor import conv2d
from .tensor import get_rng
from .tensor import he_normal
from .tensor import mean
from .tensor import relu
from .tensor import zeros

#: Luma weights of the grayscale conversion.
GRAY_WEIGHTS = (0.299, 0.587, 0.114)

PERCEPTUAL_SEED = 42
PERCEPTUAL_CHANNELS = (3, 8, 16, 32)


class LossWeights(object):
    """Weights of the objective terms besides the reconstruction term.

    Parameters
    ----------

    alpha1, alpha2, alpha3 : float, optional
        Weights of the SSIM, gradient and perceptual terms.
    lambda_mask : float, optional
        Weight of the mask supervision term.
    """

    def __init__(self, alpha1=0.2, alpha2=0.1, alpha3=0.01, lambda_mask=0.5):
        values = [float(v) for v in (alpha1, alpha2, alpha3, lambda_mask)]
        if any(v < 0 or np.isnan(v) for v in values):
            raise ConfigurationError("Loss weights must be >= 0, got %s." % (values, ))
        self.alpha1, self.alpha2, self.alpha3, self.lambda_mask = values

    @classmethod
    def from_string(cls, value):
        """Parse ``"alpha1,alpha2,alpha3,lambda_mask"``, e.g. ``"0.2,0.1,0.01,0.5"``."""

        try:
            values = [float(v) for v in value.split(',')]
        except ValueError:
            raise ConfigurationError("Loss weights must be numbers: %s" % value)
        if len(values) != 4:
            raise ConfigurationError("Expected four comma-separated loss weights, got '%s'."
                                     % value)
        return cls(*values)

    def get_settings(self):
        return {
            'alpha1': self.alpha1,
            'alpha2': self.alpha2,
            'alpha3': self.alpha3,
            'lambda_mask': self.lambda_mask,
        }

    @contextmanager
    def settings(self, **kwargs):
        my_settings = self.get_settings()
        my_settings.update(kwargs)
        yield self.__class__(**my_settings)


class PseudoMaskConfig(object):
    """Parameters of :py:func:`build_pseudo_mask`.

    Parameters
    ----------

    eps : float, optional
        Added to the clean gray level before dividing, must be positive.
    window : int, optional
        Side of the box filter, odd and >= 1.
    tau : float, optional
        Threshold in ``(0, 1)``; pixels whose local mean is strictly above it are masked.
    """

    def __init__(self, eps=1e-3, window=7, tau=0.1):
        if not eps > 0:
            raise ConfigurationError("eps must be positive, got %s." % eps)
        if int(window) != window or window < 1 or window % 2 == 0:
            raise ConfigurationError("window must be an odd integer >= 1, got %s." % window)
        if not 0 < tau < 1:
            raise ConfigurationError("tau must be in (0, 1), got %s." % tau)

        self.eps = float(eps)
        self.window = int(window)
        self.tau = float(tau)

    def get_settings(self):
        return {
            'eps': self.eps,
            'window': self.window,
            'tau': self.tau,
        }

    @contextmanager
    def settings(self, **kwargs):
        my_settings = self.get_settings()
        my_settings.update(kwargs)
        yield self.__class__(**my_settings)


class PerceptualExtractor(object):
    """Frozen random feature extractor for the perceptual term.

    Three 3x3 convolutions with stride 2 and relu (3 -> 8 -> 16 -> 32 channels). The weights are
    drawn He-normal from a generator seeded with ``seed`` and are never trained.
    """

    def __init__(self, seed=PERCEPTUAL_SEED):
        rng = get_rng(seed)
        self.layers = []
        for cin, cout in zip(PERCEPTUAL_CHANNELS[:-1], PERCEPTUAL_CHANNELS[1:]):
            weight = he_normal((cout, cin, 3, 3), cin * 9, seed=rng)
            self.layers.append((weight, zeros((cout, ))))

    @property
    def min_extent(self):
        return 2 ** len(self.layers)

    def features(self, x):
        if x.ndim != 4 or x.shape[1] != PERCEPTUAL_CHANNELS[0]:
            raise ShapeError("The perceptual extractor expects N x 3 x H x W, got %s."
                             % (x.shape, ))
        if min(x.shape[2:]) < self.min_extent:
            raise ShapeError("The perceptual extractor needs extents >= %d, got %dx%d."
                             % ((self.min_extent, ) + x.shape[2:]))

        features = []
        for weight, bias in self.layers:
            x = relu(conv2d(x, weight, bias, stride=2, pad=1))
            features.append(x)
        return features

    __call__ = features


def _check_pair(a, b, op):
    if a.shape != b.shape:
        raise ShapeError("%s: shapes %s and %s differ." % (op, a.shape, b.shape))


def _l1(a, b):
    return mean(absolute(a - b))


def rec_loss(out, gt):
    """Mean absolute error."""

    out, gt = as_tensor(out), as_tensor(gt)
    _check_pair(out, gt, 'rec_loss')
    return _l1(out, gt)


def ssim_loss(out, gt):
    """``1 - SSIM``, with the window and constants of :py:func:`~uniblend.metrics.ssim_metric`.

    The local statistics are depthwise convolutions with the Gaussian window over valid
    positions, so the loss is differentiable and agrees with the metric.
    """
    out, gt = as_tensor(out), as_tensor(gt)
    _check_pair(out, gt, 'ssim_loss')
    if out.ndim != 4:
        raise ShapeError("ssim_loss expects N x C x H x W, got %s." % (out.shape, ))
    if min(out.shape[2:]) < SSIM_WINDOW:
        raise ShapeError("SSIM needs extents >= %d, got %dx%d."
                         % ((SSIM_WINDOW, ) + out.shape[2:]))

    c = out.shape[1]
    window = Tensor(np.tile(gaussian_window(), (c, 1, 1, 1)))

    def blur(x):
        return conv2d(x, window, groups=c)

    mu_a = blur(out)
    mu_b = blur(gt)
    mu_aa, mu_bb, mu_ab = mu_a * mu_a, mu_b * mu_b, mu_a * mu_b
    var_a = blur(out * out) - mu_aa
    var_b = blur(gt * gt) - mu_bb
    cov = blur(out * gt) - mu_ab

    num = (mu_ab * 2.0 + SSIM_C1) * (cov * 2.0 + SSIM_C2)
    den = (mu_aa + mu_bb + SSIM_C1) * (var_a + var_b + SSIM_C2)
    return 1.0 - mean(num / den)


def grad_loss(out, gt):
    """Mean L1 of the forward differences of ``out - gt`` along x and y, averaged."""

    out, gt = as_tensor(out), as_tensor(gt)
    _check_pair(out, gt, 'grad_loss')
    if out.ndim != 4 or min(out.shape[2:]) < 2:
        raise ShapeError("grad_loss needs N x C x H x W with extents >= 2, got %s."
                         % (out.shape, ))

    e = out - gt
    dx = e[:, :, :, 1:] - e[:, :, :, :-1]
    dy = e[:, :, 1:, :] - e[:, :, :-1, :]
    return (mean(absolute(dx)) + mean(absolute(dy))) * 0.5


def perc_loss(out, gt, phi):
    """L1 distance of :py:class:`PerceptualExtractor` features, averaged over the layers."""

    out, gt = as_tensor(out), as_tensor(gt)
    _check_pair(out, gt, 'perc_loss')
    # gt is a constant, its features need no graph
    gt = gt.detach()

    total = None
    features = zip(phi.features(out), phi.features(gt))
    for fo, fg in features:
        term = _l1(fo, fg)
        total = term if total is None else total + term
    return total * (1.0 / len(phi.layers))


def mask_loss(pred, mgt):
    """Mean absolute error between the predicted and the pseudo ground-truth mask."""

    pred, mgt = as_tensor(pred), as_tensor(mgt)
    _check_pair(pred, mgt, 'mask_loss')
    return _l1(pred, mgt)


def to_gray(image):
    """Luma of an ``H x W x 3`` image in 64 bit."""

    image = np.asarray(image, dtype=np.float64)
    r, g, b = GRAY_WEIGHTS
    return r * image[:, :, 0] + g * image[:, :, 1] + b * image[:, :, 2]


def build_pseudo_mask(degraded, clean, config=None):
    """Binary mask of the regions where ``degraded`` is darker than ``clean``.

    The positive relative gray-level loss ``max(0, (gray(clean) - gray(degraded)) /
    (gray(clean) + eps))`` is box-filtered (zero padded) and thresholded strictly at ``tau``.

    Parameters
    ----------

    degraded, clean : array_like
        ``H x W x 3`` images with values in ``[0, 1]``.
    config : :py:class:`PseudoMaskConfig`, optional

    Returns
    -------

    numpy.ndarray
        ``1 x 1 x H x W`` array of zeros and ones.

    Raises
    ------

    ShapeError
        If the images differ in shape or are not RGB.
    ContractError
        If a value is outside ``[0, 1]``.
    """
    config = config or PseudoMaskConfig()
    degraded = np.asarray(degraded, dtype=np.float64)
    clean = np.asarray(clean, dtype=np.float64)
    if degraded.shape != clean.shape or degraded.ndim != 3 or degraded.shape[2] != 3:
        raise ShapeError("build_pseudo_mask expects two H x W x 3 images, got %s and %s."
                         % (degraded.shape, clean.shape))
    for image in (degraded, clean):
        if image.min() < 0 or image.max() > 1:
            raise ContractError("Image values must be in [0, 1], got [%s, %s]."
                                % (image.min(), image.max()))

    gray_clean = to_gray(clean)
    gray_degraded = to_gray(degraded)
    loss = np.maximum(0.0, (gray_clean - gray_degraded) / (gray_clean + config.eps))
    local = uniform_filter(loss, size=config.window, mode='constant', cval=0.0)
    mask = (local > config.tau).astype(np.float64)
    return mask.reshape((1, 1) + mask.shape)


_TERMS = ['lrec', 'lssim', 'lgrad', 'lperc', 'lmask', 'total']


class LossTerms(namedtuple('LossTerms', _TERMS)):
    """The individual terms of the objective and their weighted sum (all scalar tensors).

    ``lmask`` is ``None`` when no mask was predicted.
    """

    def as_dict(self):
        return dict((k, 0.0 if v is None else v.item()) for k, v in zip(self._fields, self))


def total_loss(out, gt, pred_mask, mgt, weights=None, phi=None):
    """The weighted objective.

    Parameters
    ----------

    out, gt : :py:class:`~uniblend.tensor.Tensor`
        Restored and clean ``N x 3 x H x W`` images.
    pred_mask : :py:class:`~uniblend.tensor.Tensor` or None
        The predicted mask. If ``None``, the mask term is not part of the total.
    mgt : array_like or None
        The pseudo ground-truth mask.
    weights : :py:class:`LossWeights`, optional
    phi : :py:class:`PerceptualExtractor`, optional
        Created with the default seed if not given.

    Returns
    -------

    :py:class:`LossTerms`
    """
    weights = weights or LossWeights()
    phi = phi or PerceptualExtractor()

    lrec = rec_loss(out, gt)
    lssim = ssim_loss(out, gt)
    lgrad = grad_loss(out, gt)
    lperc = perc_loss(out, gt, phi)

    total = (lrec + lssim * weights.alpha1 + lgrad * weights.alpha2
             + lperc * weights.alpha3)
    lmask = None
    if pred_mask is not None:
        lmask = mask_loss(pred_mask, mgt)
        total = total + lmask * weights.lambda_mask
    return LossTerms(lrec, lssim, lgrad, lperc, lmask, total)
