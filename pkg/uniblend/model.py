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

"""The UniBlendNet restoration network.

A three-stage encoder/decoder over the input image, with the Haar low-frequency band fused
into every encoder stage and the high-frequency bands re-injected into the matching decoder
stage. The bottleneck optionally passes through scale-aware aggregation, a separate context
branch optionally feeds the residual head, and the final image is::

    restored = input + mask * residual

Parameters are plain :py:class:`~uniblend.params.ModelParams`, the functions in this module
are stateless. :py:class:`UniBlendNet` bundles a configuration with its parameters.
"""

from __future__ import unicode_literals, absolute_import

import logging

from collections import OrderedDict
from collections import namedtuple
from contextlib import contextmanager

import numpy as np

from .base import ConfigurationError
from .base import ShapeError
from .base import SIZE_MULTIPLE
from .context import context_forward
from .context import context_param_shapes
from .params import conv
from .params import conv_spec
from .params import dense
from .params import init_params as _init_table
from .params import linear_spec
from .params import table_size
from .saam import saam_forward
from .saam import saam_param_shapes
from .tensor import Tensor
from .tensor import bilinear_resize
from .tensor import concat
from .tensor import constant
from .tensor import count_macs
from .tensor import global_avg_pool
from .tensor import relu
from .tensor import reshape
from .tensor import sigmoid
from .tensor import zeros
from .wavelet import dwt_haar

log = logging.getLogger(__name__)

ForwardOutput = namedtuple('ForwardOutput', ['restored', 'mask', 'residual'])
EncoderOutput = namedtuple('EncoderOutput', ['down', 'skip', 'hf'])


class ModelConfig(object):
    """Architecture and ablation switches of a model.

    Parameters
    ----------

    base_channels : int, optional
        Channels ``C`` of the first stage; the stages use ``C``, ``2C`` and ``4C``, the
        bottleneck ``8C``.
    context_channels : int, optional
        Channels ``Cg`` of the context branch.
    use_mask : bool, optional
        Predict a guidance mask. If ``False``, the mask is constant one.
    use_saam : bool, optional
        Apply scale-aware aggregation at the bottleneck. If ``False``, the bottleneck feature
        passes through unchanged.
    use_context : bool, optional
        Run the context branch and feed its features to the residual head.
    stages : int, optional
        Number of encoder/decoder stages. Only ``3`` is supported.
    """

    def __init__(self, base_channels=16, context_channels=16, use_mask=True, use_saam=True,
                 use_context=True, stages=3):
        if int(base_channels) < 1 or int(context_channels) < 1:
            raise ConfigurationError("Channel counts must be >= 1, got %s and %s."
                                     % (base_channels, context_channels))
        if stages != 3:
            raise ConfigurationError("Only 3 stages are supported, got %s." % stages)

        self.base_channels = int(base_channels)
        self.context_channels = int(context_channels)
        self.use_mask = bool(use_mask)
        self.use_saam = bool(use_saam)
        self.use_context = bool(use_context)
        self.stages = stages

    @property
    def channels(self):
        """Output channels of every stage, e.g. ``[16, 32, 64]``."""

        return [self.base_channels * 2 ** i for i in range(self.stages)]

    @property
    def input_channels(self):
        """Input channels of every encoder stage, e.g. ``[3, 32, 64]``."""

        return [3] + [2 * c for c in self.channels[:-1]]

    @property
    def bottleneck_channels(self):
        return 2 * self.channels[-1]

    @property
    def size_multiple(self):
        return SIZE_MULTIPLE

    def get_settings(self):
        return {
            'base_channels': self.base_channels,
            'context_channels': self.context_channels,
            'use_mask': self.use_mask,
            'use_saam': self.use_saam,
            'use_context': self.use_context,
            'stages': self.stages,
        }

    @contextmanager
    def settings(self, **kwargs):
        my_settings = self.get_settings()
        my_settings.update(kwargs)
        yield self.__class__(**my_settings)

    def __eq__(self, other):
        return isinstance(other, ModelConfig) and self.get_settings() == other.get_settings()

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return '<ModelConfig %s>' % ', '.join(
            '%s=%s' % (k, v) for k, v in sorted(self.get_settings().items()))


#: The rows of the ablation ladder, from the plain backbone to the full model.
ABLATIONS = OrderedDict([
    ('baseline', {'use_mask': False, 'use_saam': False, 'use_context': False}),
    ('mask', {'use_mask': True, 'use_saam': False, 'use_context': False}),
    ('mask_saam', {'use_mask': True, 'use_saam': True, 'use_context': False}),
    ('full', {'use_mask': True, 'use_saam': True, 'use_context': True}),
])


def ablation_config(alias, **overrides):
    """Get the :py:class:`ModelConfig` of the ablation row ``alias``.

    Any keyword arguments override the preset, e.g. ``ablation_config('full', base_channels=8)``.

    Raises
    ------

    ConfigurationError
        If ``alias`` is not a key of :py:data:`ABLATIONS`.
    """
    try:
        params = dict(ABLATIONS[alias])
    except KeyError:
        raise ConfigurationError("Unknown ablation '%s', choose one of %s."
                                 % (alias, ', '.join(ABLATIONS)))
    params.update(overrides)
    return ModelConfig(**params)


######################
# Architecture table #
######################

def encoder_param_shapes(stage, cin, cs, table):
    prefix = 'encoder.%d' % stage
    conv_spec(table, '%s.conv1' % prefix, cin, cs, 3)
    conv_spec(table, '%s.conv2' % prefix, cs, cs, 3)
    conv_spec(table, '%s.lf_fuse' % prefix, cin, cs, 1)
    conv_spec(table, '%s.down' % prefix, cs, 2 * cs, 3)
    return table


def decoder_param_shapes(stage, cin, cs, table):
    prefix = 'decoder.%d' % stage
    conv_spec(table, '%s.up' % prefix, 2 * cs, cs, 3)
    conv_spec(table, '%s.hf_fuse' % prefix, 3 * cin, cs, 1)
    linear_spec(table, '%s.gate' % prefix, 2 * cs, cs)
    conv_spec(table, '%s.proj' % prefix, 2 * cs, cs, 1)
    return table


def param_shapes(config):
    """The architecture table of ``config``: parameter name to shape and fan-in, in order.

    The order is encoder, SAAM, decoder (deepest stage first), context branch, mask head and
    residual head. It is also the order of checkpoints and of seeded initialization.
    """
    table = OrderedDict()
    c, cg = config.base_channels, config.context_channels

    for i, (cin, cs) in enumerate(zip(config.input_channels, config.channels)):
        encoder_param_shapes(i, cin, cs, table)
    if config.use_saam:
        saam_param_shapes(config.bottleneck_channels, 'saam', table)
    for i in reversed(range(config.stages)):
        decoder_param_shapes(i, config.input_channels[i], config.channels[i], table)
    if config.use_context:
        context_param_shapes(cg, 'context', table)
    if config.use_mask:
        conv_spec(table, 'mask_head.conv1', c, c, 3)
        conv_spec(table, 'mask_head.conv2', c, 1, 1)

    head_in = c + cg if config.use_context else c
    conv_spec(table, 'residual_head.conv1', head_in, c, 3)
    conv_spec(table, 'residual_head.conv2', c, 3, 3)
    return table


def count_params(config):
    return table_size(param_shapes(config))


def init_params(config, seed=0):
    """He-normal weights and zero biases for ``config``, drawn from one stream seeded by ``seed``.
    """

    return _init_table(param_shapes(config), seed)


##########
# Stages #
##########

def encoder_stage(feat, params, stage):
    """One encoder stage.

    Parameters
    ----------

    feat : :py:class:`~uniblend.tensor.Tensor`
        ``N x Cin x H x W`` with even ``H`` and ``W``.
    params : :py:class:`~uniblend.params.ModelParams`
    stage : int
        Index of the stage, selects the ``encoder.<stage>`` parameters.

    Returns
    -------

    :py:class:`EncoderOutput`
        ``down`` (``N x 2Cs x H/2 x W/2``), ``skip`` (``N x Cs x H x W``) and ``hf``, the Haar
        detail bands of ``feat`` (``N x 3Cin x H/2 x W/2``) for the matching decoder stage.
    """
    prefix = 'encoder.%d' % stage
    h, w = feat.shape[2:]

    bands = dwt_haar(feat)
    skip = relu(conv(relu(conv(feat, params, '%s.conv1' % prefix)), params, '%s.conv2' % prefix))
    skip = skip + conv(bilinear_resize(bands.lf, (h, w)), params, '%s.lf_fuse' % prefix)
    down = conv(skip, params, '%s.down' % prefix, stride=2, pad=1)
    return EncoderOutput(down, skip, bands.hf)


def decoder_stage(feat, skip, hf, params, stage):
    """One decoder stage: upsample ``feat``, fuse skip and detail features gated per channel.

    ``skip`` must have twice the extent of ``feat``, ``hf`` the same extent as ``feat``.
    """
    prefix = 'decoder.%d' % stage
    n, _, h, w = feat.shape
    sh, sw = skip.shape[2:]
    if (sh, sw) != (2 * h, 2 * w):
        raise ShapeError("decoder stage %d: skip extent %dx%d is not twice the feature extent "
                         "%dx%d." % (stage, sh, sw, h, w))
    if hf.shape[2:] != (h, w):
        raise ShapeError("decoder stage %d: detail bands %s do not match the feature extent "
                         "%dx%d." % (stage, hf.shape, h, w))

    up = relu(conv(bilinear_resize(feat, (sh, sw)), params, '%s.up' % prefix))
    hf_proj = bilinear_resize(conv(hf, params, '%s.hf_fuse' % prefix), (sh, sw))
    fused_in = concat([skip, hf_proj])

    cs = up.shape[1]
    pooled = reshape(global_avg_pool(fused_in), (n, fused_in.shape[1]))
    gate = reshape(sigmoid(dense(pooled, params, '%s.gate' % prefix)), (n, cs, 1, 1))
    return up + conv(fused_in, params, '%s.proj' % prefix) * gate


#########
# Heads #
#########

def predict_mask(f_d, params):
    """The guidance mask ``sigmoid(H_m(F_d))``, ``N x 1 x H x W`` with values in ``(0, 1)``."""

    hidden = relu(conv(f_d, params, 'mask_head.conv1'))
    return sigmoid(conv(hidden, params, 'mask_head.conv2'))


def predict_residual(f_d, f_g, params):
    """The unbounded ``N x 3 x H x W`` residual from the decoder (and context) features.

    ``f_g`` is ``None`` for models without the context branch.
    """
    if f_g is not None:
        if f_g.shape[0] != f_d.shape[0] or f_g.shape[2:] != f_d.shape[2:]:
            raise ShapeError("Context features %s do not match decoder features %s."
                             % (f_g.shape, f_d.shape))
        f_d = concat([f_d, f_g])
    hidden = relu(conv(f_d, params, 'residual_head.conv1'))
    return conv(hidden, params, 'residual_head.conv2')


def compose_output(inp, mask, residual):
    """``inp + mask * residual``; the single-channel mask broadcasts over the color channels.

    The result is not clamped.
    """
    if residual.shape != inp.shape:
        raise ShapeError("Residual %s does not match input %s." % (residual.shape, inp.shape))
    if mask.ndim != 4 or mask.shape[1] != 1 or mask.shape[2:] != inp.shape[2:] \
            or mask.shape[0] != inp.shape[0]:
        raise ShapeError("Mask %s does not match input %s." % (mask.shape, inp.shape))
    return inp + residual * mask


def check_input(inp):
    if inp.ndim != 4 or inp.shape[1] != 3:
        raise ShapeError("The model expects N x 3 x H x W images, got %s." % (inp.shape, ))
    h, w = inp.shape[2:]
    if h % SIZE_MULTIPLE or w % SIZE_MULTIPLE:
        raise ShapeError("Image extents must be multiples of %d, got %dx%d."
                         % (SIZE_MULTIPLE, h, w))


def forward(inp, params, config):
    """Run the full model.

    Parameters
    ----------

    inp : :py:class:`~uniblend.tensor.Tensor`
        ``N x 3 x H x W`` images in ``[0, 1]``, ``H`` and ``W`` multiples of 32.
    params : :py:class:`~uniblend.params.ModelParams`
    config : :py:class:`ModelConfig`

    Returns
    -------

    :py:class:`ForwardOutput`

    Raises
    ------

    ShapeError
        If the input is not a batch of RGB images or its extents are not multiples of 32.
    """
    check_input(inp)
    n, _, h, w = inp.shape

    feat = inp
    skips = []
    for i in range(config.stages):
        feat, skip, hf = encoder_stage(feat, params, i)
        skips.append((skip, hf))

    if config.use_saam:
        feat = saam_forward(feat, params, 'saam')

    for i in reversed(range(config.stages)):
        skip, hf = skips[i]
        feat = decoder_stage(feat, skip, hf, params, i)

    f_g = context_forward(inp, params, 'context') if config.use_context else None
    if config.use_mask:
        mask = predict_mask(feat, params)
    else:
        mask = constant((n, 1, h, w), 1.0)
    residual = predict_residual(feat, f_g, params)
    return ForwardOutput(compose_output(inp, mask, residual), mask, residual)


def complexity(config, size=128):
    """Parameter count and multiply-accumulate operations of one forward pass.

    Parameters
    ----------

    config : :py:class:`ModelConfig`
    size : int, optional
        Extent of the square ``1 x 3 x size x size`` input.

    Returns
    -------

    dict
        ``{'params': int, 'macs': int}``
    """
    params = init_params(config, seed=0)
    with count_macs() as counter:
        forward(zeros((1, 3, size, size)), params, config)
    return {'params': params.count(), 'macs': counter.macs}


class UniBlendNet(object):
    """A configuration bundled with its parameters.

    >>> net = UniBlendNet(ablation_config('full'), seed=3)
    >>> out = net(images)  # doctest: +SKIP
    """

    def __init__(self, config=None, params=None, seed=0):
        self.config = config or ModelConfig()
        if params is None:
            params = init_params(self.config, seed)
        self.params = params
        log.debug('Model with %d parameters: %r', self.params.count(), self.config)

    def __call__(self, inp):
        if not isinstance(inp, Tensor):
            inp = Tensor(np.asarray(inp))
        return forward(inp, self.params, self.config)

    def count_params(self):
        return self.params.count()

    def parameters(self):
        return list(self.params.values())
