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

"""Finite-difference verification of the analytic gradients.

Every differentiable operation, every loss term and the full model are checked against central
differences with a step of ``1e-5``. The analytic gradient comes from a graph in the requested
precision, the finite differences are always taken in 64 bit. A 64 bit graph must match to a
relative error of ``1e-4``, a 32 bit graph to ``1e-2``.
"""

from __future__ import unicode_literals, absolute_import

import logging

from collections import OrderedDict
from collections import namedtuple

import numpy as np

from .base import GradientCheckError
from .base import PRECISION_FLOAT32
from .base import PRECISION_FLOAT64
from .context import context_forward
from .context import context_param_shapes
from .losses import PerceptualExtractor
from .losses import grad_loss
from .losses import mask_loss
from .losses import perc_loss
from .losses import rec_loss
from .losses import ssim_loss
from .losses import total_loss
from .model import ModelConfig
from .model import forward
from .model import init_params as init_model_params
from .params import init_params
from .saam import saam_forward
from .saam import saam_param_shapes
from .tensor import Graph
from .tensor import Tensor
from .tensor import absolute
from .tensor import activation
from .tensor import bilinear_resize
from .tensor import concat
from .tensor import conv2d
from .tensor import get_rng
from .tensor import global_avg_pool
from .tensor import linear
from .tensor import mean
from .tensor import precision
from .tensor import reshape
from .tensor import sum_all
from .wavelet import DwtBands
from .wavelet import dwt_haar
from .wavelet import idwt_haar

log = logging.getLogger(__name__)

#: Finite-difference step.
STEP = 1e-5

#: Gradients smaller than this are compared absolutely.
ERROR_FLOOR = 1e-5

#: tolerance and error floor per precision of the analytic graph
SETTINGS = {
    PRECISION_FLOAT64: (1e-4, ERROR_FLOOR),
    PRECISION_FLOAT32: (1e-2, 1e-3),
}

#: Parameters sampled for the full-model check.
MODEL_SAMPLES = 20


class GradCheckResult(namedtuple('GradCheckResult', ['op', 'error', 'tolerance'])):
    @property
    def passed(self):
        return self.error <= self.tolerance


def relative_error(analytic, numeric, floor=ERROR_FLOOR):
    return abs(analytic - numeric) / max(abs(analytic), abs(numeric), floor)


def sample_points(tensors, count, rng):
    """``count`` distinct ``(tensor, flat index)`` pairs drawn uniformly over all elements."""

    sizes = np.array([t.size for t in tensors])
    offsets = np.concatenate([[0], np.cumsum(sizes)])
    chosen = rng.choice(int(offsets[-1]), size=min(count, int(offsets[-1])), replace=False)
    points = []
    for flat in sorted(chosen):
        i = int(np.searchsorted(offsets, flat, side='right')) - 1
        points.append((tensors[i], int(flat - offsets[i])))
    return points


def check_gradient(fn, tensors, h=STEP, points=None, floor=ERROR_FLOOR):
    """Worst relative error between backward() and central differences.

    ``backward()`` runs in the current precision. The differences are always evaluated in 64 bit
    on a copy of ``tensors``, so a 32 bit graph is compared with an accurate reference.

    Parameters
    ----------

    fn : callable
        Takes no arguments and returns a scalar tensor computed from ``tensors``.
    tensors : list of :py:class:`~uniblend.tensor.Tensor`
        The tensors to differentiate by; they must require gradients.
    h : float, optional
        Finite-difference step.
    points : list of tuple, optional
        ``(tensor, flat index)`` pairs to check, all elements of all ``tensors`` by default.
    floor : float, optional
        Gradients smaller than this are compared absolutely.

    Returns
    -------

    float
    """
    for tensor in tensors:
        tensor.zero_grad()
    with Graph() as graph:
        loss = fn()
        graph.backward(loss)
    analytic = dict((id(t), t.grad.reshape(-1).copy()) for t in tensors)

    if points is None:
        points = [(t, i) for t in tensors for i in range(t.size)]

    originals = [t.data for t in tensors]
    worst = 0.0
    try:
        with precision(PRECISION_FLOAT64):
            for tensor in tensors:
                tensor.data = tensor.data.astype(np.float64)

            for tensor, index in points:
                flat = tensor.data.reshape(-1)
                orig = flat[index]
                flat[index] = orig + h
                plus = fn().item()
                flat[index] = orig - h
                minus = fn().item()
                flat[index] = orig

                numeric = (plus - minus) / (2 * h)
                error = relative_error(float(analytic[id(tensor)][index]), numeric, floor)
                worst = max(worst, error)
    finally:
        for tensor, data in zip(tensors, originals):
            tensor.data = data
    return worst


###########
# Cases   #
###########

def _var(shape, rng, low=-1.0, high=1.0):
    return Tensor(rng.uniform(low, high, size=shape), requires_grad=True)


def _project(rng):
    """A fixed random linear functional, so every output element contributes to the loss."""

    weights = {}

    def project(y):
        if y.shape not in weights:
            weights[y.shape] = Tensor(rng.uniform(-1, 1, size=y.shape))
        return sum_all(y * weights[y.shape])
    return project


def _op_cases():
    cases = OrderedDict()

    def elementwise(op, b_shape=(1, 2, 3, 3), positive=False):
        def make(rng):
            a = _var((1, 2, 3, 3), rng)
            b = _var(b_shape, rng, 0.5, 1.5) if positive else _var(b_shape, rng)
            project = _project(rng)
            fns = {'add': lambda: a + b, 'sub': lambda: a - b,
                   'mul': lambda: a * b, 'div': lambda: a / b}
            return (lambda: project(fns[op]())), [a, b]
        return make

    for op in ('add', 'sub', 'mul'):
        cases[op] = elementwise(op)
    cases['mul_broadcast'] = elementwise('mul', (1, 2, 1, 1))
    cases['div'] = elementwise('div', (1, 1, 3, 3), positive=True)

    def unary(fn, shape=(1, 2, 4, 4)):
        def make(rng):
            x = _var(shape, rng)
            project = _project(rng)
            return (lambda: project(fn(x))), [x]
        return make

    cases['relu'] = unary(lambda x: activation(x, 'relu'))
    cases['sigmoid'] = unary(lambda x: activation(x, 'sigmoid'))
    cases['abs'] = unary(absolute)
    cases['mean'] = unary(lambda x: mean(x * x))
    cases['global_avg_pool'] = unary(global_avg_pool)
    cases['reshape'] = unary(lambda x: reshape(x, (2, 16)))
    cases['take'] = unary(lambda x: x[:, 1:, 1:3])
    cases['down2'] = unary(lambda x: bilinear_resize(x, 'down2'))
    cases['down4'] = unary(lambda x: bilinear_resize(x, 'down4'))
    cases['up_to'] = unary(lambda x: bilinear_resize(x, (6, 5)), (1, 2, 3, 2))
    cases['dwt_haar'] = unary(lambda x: concat(list(dwt_haar(x))))

    def make_idwt(rng):
        lf, hf = _var((1, 1, 2, 3), rng), _var((1, 3, 2, 3), rng)
        project = _project(rng)
        return (lambda: project(idwt_haar(DwtBands(lf, hf)))), [lf, hf]
    cases['idwt_haar'] = make_idwt

    def make_concat(rng):
        a, b = _var((1, 2, 3, 3), rng), _var((1, 3, 3, 3), rng)
        project = _project(rng)
        return (lambda: project(concat([a, b]))), [a, b]
    cases['concat'] = make_concat

    def conv(stride=1, pad=1, groups=1, cin=2, cout=3):
        def make(rng):
            x = _var((1, cin, 5, 5), rng)
            w = _var((cout, cin // groups, 3, 3), rng)
            b = _var((cout, ), rng)
            project = _project(rng)
            return (lambda: project(conv2d(x, w, b, stride, pad, groups))), [x, w, b]
        return make

    cases['conv2d'] = conv()
    cases['conv2d_stride2'] = conv(stride=2)
    cases['conv2d_depthwise'] = conv(groups=2, cin=2, cout=2)

    def make_linear(rng):
        x, w, b = _var((2, 3), rng), _var((4, 3), rng), _var((4, ), rng)
        project = _project(rng)
        return (lambda: project(linear(x, w, b))), [x, w, b]
    cases['linear'] = make_linear

    def make_saam(rng):
        x = _var((1, 4, 8, 8), rng)
        params = init_params(saam_param_shapes(4), seed=rng)
        project = _project(rng)
        return (lambda: project(saam_forward(x, params))), [x] + list(params.values())
    cases['saam'] = make_saam

    def make_context(rng):
        img = _var((1, 3, 12, 12), rng, 0, 1)
        params = init_params(context_param_shapes(2), seed=rng)
        project = _project(rng)
        return (lambda: project(context_forward(img, params))), [img] + list(params.values())
    cases['context'] = make_context

    def loss(fn, shape=(1, 3, 12, 12)):
        def make(rng):
            out = _var(shape, rng, 0, 1)
            gt = Tensor(rng.uniform(0, 1, size=shape))
            return (lambda: fn(out, gt)), [out]
        return make

    cases['rec_loss'] = loss(rec_loss)
    cases['ssim_loss'] = loss(ssim_loss)
    cases['grad_loss'] = loss(grad_loss, (1, 3, 4, 4))
    phi = {}
    cases['perc_loss'] = loss(lambda out, gt: perc_loss(out, gt, phi.setdefault(
        'phi', PerceptualExtractor())), (1, 3, 8, 8))
    cases['mask_loss'] = loss(mask_loss, (1, 1, 6, 6))
    return cases


def _model_case(rng, samples):
    config = ModelConfig()
    params = init_model_params(config, seed=rng)
    inp = Tensor(rng.uniform(0, 1, size=(1, 3, 32, 32)))
    gt = Tensor(rng.uniform(0, 1, size=(1, 3, 32, 32)))
    mgt = Tensor((rng.uniform(size=(1, 1, 32, 32)) > 0.5).astype(np.float64))
    phi = PerceptualExtractor()

    def fn():
        out = forward(inp, params, config)
        return total_loss(out.restored, gt, out.mask, mgt, phi=phi).total

    tensors = list(params.values())
    return fn, tensors, sample_points(tensors, samples, rng)


def run_grad_check(seed=0, float64=True, ops=None, model=True, samples=MODEL_SAMPLES):
    """Check every operation (and the full model) and return a :py:class:`GradCheckResult` each.

    Parameters
    ----------

    seed : int, optional
    float64 : bool, optional
        Build the analytic graph in 64 bit (the default) or in 32 bit with a coarser tolerance.
    ops : list of str, optional
        Restrict the check to these operations.
    model : bool, optional
        Include the full-model check (``"model"``).
    samples : int, optional
        Number of randomly chosen parameters in the full-model check.
    """
    mode = PRECISION_FLOAT64 if float64 else PRECISION_FLOAT32
    tolerance, floor = SETTINGS[mode]
    rng = get_rng(seed)
    results = []

    with precision(mode):
        for op, make in _op_cases().items():
            if ops is not None and op not in ops:
                continue
            fn, tensors = make(rng)
            error = check_gradient(fn, tensors, floor=floor)
            log.debug('%s: %.3e', op, error)
            results.append(GradCheckResult(op, error, tolerance))

        if model and (ops is None or 'model' in ops):
            fn, tensors, points = _model_case(rng, samples)
            error = check_gradient(fn, tensors, points=points, floor=floor)
            results.append(GradCheckResult('model', error, tolerance))
    return results


def assert_passed(results):
    """Raise :py:class:`~uniblend.base.GradientCheckError` naming every failed operation."""

    failed = [r for r in results if not r.passed]
    if failed:
        raise GradientCheckError('Gradient check failed: %s' % ', '.join(
            '%s (%.3e > %.0e)' % (r.op, r.error, r.tolerance) for r in failed))
