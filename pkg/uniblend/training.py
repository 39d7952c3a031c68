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

"""Optimizer, training loop, evaluation and the ablation ladder."""

from __future__ import unicode_literals, absolute_import

import json
import logging
import os
import time

from contextlib import contextmanager

import numpy as np

from .base import ConfigurationError
from .base import ContractError
from .base import DatasetError
from .base import ImageFormatError
from .base import ShapeError
from .base import SIZE_MULTIPLE
from .checkpoint import save_params
from .data import PairedDataset
from .data import augment
from .data import images_to_tensor
from .data import tensor_to_image
from .losses import LossWeights
from .losses import PerceptualExtractor
from .losses import PseudoMaskConfig
from .losses import build_pseudo_mask
from .losses import total_loss
from .metrics import psnr
from .metrics import ssim_metric
from .model import ABLATIONS
from .model import ablation_config
from .model import complexity
from .model import forward
from .model import init_params
from .tensor import Graph
from .tensor import Tensor
from .tensor import get_rng

log = logging.getLogger(__name__)

#: How many trailing log entries ``run_ablation`` averages into the final loss.
FINAL_LOSS_WINDOW = 10


########
# Adam #
########

class AdamState(object):
    """First and second moment buffers of every parameter plus the step counter.

    Parameters
    ----------

    params : :py:class:`~uniblend.params.ModelParams`
        The buffers mirror the shapes and dtypes of these tensors.
    lr, beta1, beta2, eps : float, optional
    """

    def __init__(self, params, lr=1e-4, beta1=0.9, beta2=0.999, eps=1e-8):
        if lr <= 0:
            raise ConfigurationError("The learning rate must be positive, got %s." % lr)
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m = dict((name, np.zeros_like(p.data)) for name, p in params.items())
        self.v = dict((name, np.zeros_like(p.data)) for name, p in params.items())


def adam_step(params, state, grads=None):
    """Apply one bias-corrected Adam update and clear the gradients.

    Parameters
    ----------

    params : :py:class:`~uniblend.params.ModelParams`
    state : :py:class:`AdamState`
    grads : dict, optional
        Gradient per parameter name. Defaults to the ``grad`` attribute of every parameter.

    Raises
    ------

    ContractError
        If a parameter has no gradient.
    """
    if grads is None:
        grads = dict((name, p.grad) for name, p in params.items())
    for name in params:
        if grads.get(name) is None:
            raise ContractError("%s: no gradient, was backward() called?" % name)

    state.t += 1
    bias1 = 1 - state.beta1 ** state.t
    bias2 = 1 - state.beta2 ** state.t
    for name, p in params.items():
        g = grads[name]
        m = state.m[name] = state.beta1 * state.m[name] + (1 - state.beta1) * g
        v = state.v[name] = state.beta2 * state.v[name] + (1 - state.beta2) * g * g
        update = state.lr * (m / bias1) / (np.sqrt(v / bias2) + state.eps)
        p.data = (p.data - update).astype(p.data.dtype)
        p.grad = None


############
# Training #
############

class TrainConfig(object):
    """Step budget, batching and objective of a training run.

    Parameters
    ----------

    steps : int, optional
    batch : int, optional
    crop : int, optional
        Side of the square training crops, a multiple of 32.
    lr : float, optional
    seed : int, optional
        Seeds the initialization, the batch order and the augmentation.
    weights : :py:class:`~uniblend.losses.LossWeights`, optional
    mask_config : :py:class:`~uniblend.losses.PseudoMaskConfig`, optional
    log_every : int, optional
        Log progress every this many steps.
    """

    def __init__(self, steps=300, batch=4, crop=64, lr=1e-4, seed=1, weights=None,
                 mask_config=None, log_every=25):
        if steps < 0 or batch < 1:
            raise ConfigurationError("steps must be >= 0 and batch >= 1, got %s and %s."
                                     % (steps, batch))
        if crop < 1 or crop % SIZE_MULTIPLE:
            raise ConfigurationError("crop must be a positive multiple of %d, got %s."
                                     % (SIZE_MULTIPLE, crop))
        self.steps = steps
        self.batch = batch
        self.crop = crop
        self.lr = lr
        self.seed = seed
        self.weights = weights or LossWeights()
        self.mask_config = mask_config or PseudoMaskConfig()
        self.log_every = max(1, log_every)

    def get_settings(self):
        return {
            'steps': self.steps,
            'batch': self.batch,
            'crop': self.crop,
            'lr': self.lr,
            'seed': self.seed,
            'weights': self.weights,
            'mask_config': self.mask_config,
            'log_every': self.log_every,
        }

    @contextmanager
    def settings(self, **kwargs):
        my_settings = self.get_settings()
        my_settings.update(kwargs)
        yield self.__class__(**my_settings)


def _load_pairs(data_dir, train_config):
    dataset = PairedDataset(data_dir)
    pairs = []
    for pair in dataset:
        if train_config.crop > min(pair.clean.shape[:2]):
            raise ShapeError("Crop %d exceeds pair %04d of extent %dx%d."
                             % ((train_config.crop, pair.index) + pair.clean.shape[:2]))
        mask = build_pseudo_mask(pair.degraded, pair.clean, train_config.mask_config)
        pairs.append((pair.degraded, pair.clean, mask[0, 0]))
    return pairs


def _schedule(count, batch, rng):
    """Endless batches of pair positions, one seeded permutation per epoch."""

    order = []
    while True:
        chosen = []
        while len(chosen) < batch:
            if not order:
                order = list(rng.permutation(count))
            chosen.append(int(order.pop(0)))
        yield chosen


def train_loop(data_dir, config, train_config=None, log_path=None, checkpoint=None):
    """Train a model from scratch.

    Parameters
    ----------

    data_dir : str
        A dataset directory, see :py:mod:`uniblend.data`.
    config : :py:class:`~uniblend.model.ModelConfig`
    train_config : :py:class:`TrainConfig`, optional
    log_path : str, optional
        Write one JSON object per step to this file.
    checkpoint : str, optional
        Save the final parameters to this file.

    Returns
    -------

    params : :py:class:`~uniblend.params.ModelParams`
    log : list of dict
        The loss terms of every step.
    """
    train_config = train_config or TrainConfig()
    pairs = _load_pairs(data_dir, train_config)
    params = init_params(config, seed=train_config.seed)
    state = AdamState(params, lr=train_config.lr)
    phi = PerceptualExtractor()
    rng = get_rng(train_config.seed)
    batches = _schedule(len(pairs), train_config.batch, rng)
    log.info('Training %d parameters on %d pairs for %d steps', params.count(), len(pairs),
             train_config.steps)

    records = []
    stream = open(log_path, 'w') if log_path else None
    try:
        for step in range(train_config.steps):
            crops = [augment(pairs[i], train_config.crop, rng) for i in next(batches)]
            inp = images_to_tensor([c[0] for c in crops])
            gt = images_to_tensor([c[1] for c in crops])
            mgt = Tensor(np.stack([c[2][None] for c in crops]))

            with Graph() as graph:
                out = forward(inp, params, config)
                terms = total_loss(out.restored, gt, out.mask if config.use_mask else None, mgt,
                                   train_config.weights, phi)
                graph.backward(terms.total)
            adam_step(params, state)

            record = {'step': step}
            record.update(terms.as_dict())
            records.append(record)
            if stream is not None:
                stream.write('%s\n' % json.dumps(record, sort_keys=True))
            if (step + 1) % train_config.log_every == 0 or step + 1 == train_config.steps:
                log.info('step %d/%d: total %.5f (rec %.5f, mask %.5f)', step + 1,
                         train_config.steps, record['total'], record['lrec'], record['lmask'])
    finally:
        if stream is not None:
            stream.close()

    if checkpoint:
        save_params(params, config, checkpoint)
    return params, records


##############
# Evaluation #
##############

def restore_image(image, params, config):
    """Run the model on one ``H x W x 3`` image.

    Returns
    -------

    restored : numpy.ndarray
        Clamped to ``[0, 1]``.
    output : :py:class:`~uniblend.model.ForwardOutput`
        The raw tensors.
    inp : :py:class:`~uniblend.tensor.Tensor`
        The input as the model saw it (cast to the engine precision).
    """
    inp = images_to_tensor([image])
    output = forward(inp, params, config)
    return np.clip(tensor_to_image(output.restored), 0, 1), output, inp


def evaluate_split(params, config, data_dir):
    """PSNR and SSIM of the model and of the unrestored input on every pair of ``data_dir``.

    Unreadable pairs and pairs whose extents are not multiples of 32 are skipped with a warning
    and counted in ``skipped``.

    Returns
    -------

    dict
        ``mean_psnr``, ``mean_ssim``, ``baseline_psnr``, ``baseline_ssim``, ``per_image``,
        ``count``, ``skipped`` and ``lpips`` (always ``"unavailable"``).
    """
    dataset = PairedDataset(data_dir)
    per_image = []
    skipped = 0

    for position, index in enumerate(dataset.indexes):
        try:
            pair = dataset[position]
            restored, _, inp = restore_image(pair.degraded, params, config)
        except (ImageFormatError, DatasetError, ShapeError, IOError) as e:
            log.warning('Skipping pair %04d: %s', index, e)
            skipped += 1
            continue

        baseline = tensor_to_image(inp)
        per_image.append({
            'index': pair.index,
            'psnr': psnr(restored, pair.clean),
            'ssim': ssim_metric(restored, pair.clean),
            'baseline_psnr': psnr(baseline, pair.clean),
            'baseline_ssim': ssim_metric(baseline, pair.clean),
        })

    if not per_image:
        raise DatasetError("%s: no pair could be evaluated (%d skipped)." % (data_dir, skipped))

    def average(key):
        return float(np.mean([entry[key] for entry in per_image]))

    return {
        'mean_psnr': average('psnr'),
        'mean_ssim': average('ssim'),
        'baseline_psnr': average('baseline_psnr'),
        'baseline_ssim': average('baseline_ssim'),
        'per_image': per_image,
        'count': len(per_image),
        'skipped': skipped,
        'lpips': 'unavailable',
    }


def write_json(data, path):
    with open(path, 'w') as stream:
        json.dump(data, stream, indent=4, sort_keys=True)


############
# Ablation #
############

def run_ablation(data_dir, out_dir, train_config=None, aliases=None, model_settings=None):
    """Train and evaluate every row of the ablation ladder on the same data and seed.

    ``model_settings`` (e.g. ``{"base_channels": 8}``) are applied to every row.

    For every alias, ``out_dir`` receives ``<alias>.ubnd`` (checkpoint), ``<alias>.log``
    (training log) and ``<alias>.eval.json`` (evaluation report). The summary is written to
    ``ablation.json`` and returned.
    """
    train_config = train_config or TrainConfig()
    aliases = aliases or list(ABLATIONS)
    if not os.path.isdir(out_dir):
        os.makedirs(out_dir)

    summary = {}
    for alias in aliases:
        config = ablation_config(alias, **(model_settings or {}))
        log.info('Ablation %s: %r', alias, config)
        start = time.time()
        params, records = train_loop(
            data_dir, config, train_config,
            log_path=os.path.join(out_dir, '%s.log' % alias),
            checkpoint=os.path.join(out_dir, '%s.ubnd' % alias))
        report = evaluate_split(params, config, data_dir)
        write_json(report, os.path.join(out_dir, '%s.eval.json' % alias))

        totals = [r['total'] for r in records]
        cost = complexity(config, train_config.crop)
        summary[alias] = {
            'initial_loss': totals[0] if totals else None,
            'final_loss': float(np.mean(totals[-FINAL_LOSS_WINDOW:])) if totals else None,
            'mean_psnr': report['mean_psnr'],
            'mean_ssim': report['mean_ssim'],
            'baseline_psnr': report['baseline_psnr'],
            'params': cost['params'],
            'macs': cost['macs'],
            'seconds': round(time.time() - start, 1),
        }

    write_json(summary, os.path.join(out_dir, 'ablation.json'))
    return summary
