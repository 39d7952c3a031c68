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

"""Synthetic paired data, netpbm image files and training augmentation.

Clean scenes are smooth random textures with a few solid shapes; the degraded image is the
clean image multiplied by an attenuation field made of Gaussian blobs, so degradation only ever
darkens the scene. Images are ``H x W x 3`` float arrays with values in ``[0, 1]``.

A dataset directory contains, for every index ``NNNN`` (zero padded to four digits)::

    NNNN_input.ppm      the degraded image
    NNNN_gt.ppm         the clean image
    NNNN_mask.pgm       the pseudo ground-truth mask (optional, 0 or 255)

plus a ``meta.json`` manifest.
"""

from __future__ import unicode_literals, absolute_import

import json
import logging
import os
import re

from collections import namedtuple

import numpy as np
import six

from .base import DATASET_FORMAT_VERSION
from .base import DatasetError
from .base import ImageFormatError
from .base import ShapeError
from .base import SIZE_MULTIPLE
from .losses import build_pseudo_mask
from .tensor import Tensor

log = logging.getLogger(__name__)

Blob = namedtuple('Blob', ['cy', 'cx', 'radius', 'depth'])
Pair = namedtuple('Pair', ['index', 'degraded', 'clean', 'mask'])

CLEAN_RANGE = (0.05, 1.0)
ATTENUATION_RANGE = (0.2, 1.0)
DEPTH_RANGE = (0.3, 0.8)

MAXVAL = 255
_INPUT_RE = re.compile(r'^(\d{4})_input\.ppm$')


##########
# Scenes #
##########

class SceneSpec(object):
    """Parameters of one synthetic scene.

    Parameters
    ----------

    size : int, optional
        Height and width, a multiple of 32.
    seed : int, optional
    n_blobs : int, optional
        Number of attenuation blobs. Drawn from ``2..5`` if not given.
    blobs : list of :py:class:`Blob`, optional
        Explicit blobs, overriding ``n_blobs``.
    """

    def __init__(self, size=128, seed=0, n_blobs=None, blobs=None):
        if size < SIZE_MULTIPLE or size % SIZE_MULTIPLE:
            raise ShapeError("Scene size must be a positive multiple of %d, got %s."
                             % (SIZE_MULTIPLE, size))
        if n_blobs is not None and n_blobs < 0:
            raise ShapeError("n_blobs must be >= 0, got %s." % n_blobs)
        self.size = size
        self.seed = seed
        self.n_blobs = n_blobs
        self.blobs = blobs


def _texture(size, rng):
    y, x = np.mgrid[0:size, 0:size].astype(np.float64)
    image = np.empty((size, size, 3))
    image[:] = rng.uniform(0.3, 0.8, size=3)

    for _ in range(3):
        fy, fx = rng.uniform(0.5, 3.0, size=2)
        phase = rng.uniform(0, 2 * np.pi)
        amplitude = rng.uniform(0.05, 0.15, size=3)
        field = np.cos(2 * np.pi * (fy * y + fx * x) / size + phase)
        image += field[:, :, None] * amplitude

    for _ in range(rng.integers(1, 4)):
        color = rng.uniform(0.1, 1.0, size=3)
        cy, cx = rng.uniform(0, size, size=2)
        extent = rng.uniform(size / 10.0, size / 4.0)
        if rng.random() < 0.5:
            region = (np.abs(y - cy) <= extent) & (np.abs(x - cx) <= extent)
        else:
            region = (y - cy) ** 2 + (x - cx) ** 2 <= extent ** 2
        image[region] = color

    return np.clip(image, *CLEAN_RANGE)


def random_blobs(size, count, rng):
    blobs = []
    for _ in range(count):
        cy, cx = rng.uniform(0, size, size=2)
        radius = rng.uniform(size / 8.0, size / 3.0)
        blobs.append(Blob(cy, cx, radius, rng.uniform(*DEPTH_RANGE)))
    return blobs


def attenuation(size, blobs):
    """``1 - sum(depth * gaussian)`` over ``blobs``, clipped to ``[0.2, 1]``."""

    y, x = np.mgrid[0:size, 0:size].astype(np.float64)
    field = np.ones((size, size))
    for blob in blobs:
        r2 = (y - blob.cy) ** 2 + (x - blob.cx) ** 2
        field -= blob.depth * np.exp(-r2 / (2 * blob.radius ** 2))
    return np.clip(field, *ATTENUATION_RANGE)


def generate_pair(spec):
    """Render the ``(degraded, clean)`` pair of ``spec``; deterministic in ``spec.seed``."""

    texture_seq, blob_seq = np.random.SeedSequence(spec.seed).spawn(2)
    clean = _texture(spec.size, np.random.default_rng(texture_seq))

    blobs = spec.blobs
    if blobs is None:
        rng = np.random.default_rng(blob_seq)
        count = spec.n_blobs if spec.n_blobs is not None else int(rng.integers(2, 6))
        blobs = random_blobs(spec.size, count, rng)

    degraded = clean * attenuation(spec.size, blobs)[:, :, None]
    return degraded, clean


###########
# Netpbm  #
###########

def _quantize(image):
    return np.round(np.clip(np.asarray(image, dtype=np.float64), 0, 1) * MAXVAL).astype(np.uint8)


def _write_netpbm(path, magic, data):
    height, width = data.shape[:2]
    with open(path, 'wb') as stream:
        stream.write(('%s\n%d %d\n%d\n' % (magic, width, height, MAXVAL)).encode('ascii'))
        stream.write(data.tobytes())


def _read_netpbm(path, magic, channels):
    with open(path, 'rb') as stream:
        data = stream.read()

    # magic, width, height and maxval, separated by whitespace and comments
    tokens = []
    pos = 0
    while len(tokens) < 4:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if data[pos:pos + 1] == b'#':
            while pos < len(data) and data[pos:pos + 1] not in (b'\n', b'\r'):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        if start == pos:
            raise ImageFormatError("%s: truncated header." % path)
        tokens.append(data[start:pos])
    pos += 1  # single whitespace after maxval

    if tokens[0] != magic.encode('ascii'):
        raise ImageFormatError("%s: expected magic %s, got %r." % (path, magic, tokens[0]))
    try:
        width, height, maxval = [int(t) for t in tokens[1:]]
    except ValueError:
        raise ImageFormatError("%s: malformed header." % path)
    if maxval != MAXVAL:
        raise ImageFormatError("%s: only maxval %d is supported, got %d." % (path, MAXVAL, maxval))
    if width < 1 or height < 1:
        raise ImageFormatError("%s: invalid extent %dx%d." % (path, width, height))

    size = width * height * channels
    payload = data[pos:pos + size]
    if len(payload) != size:
        raise ImageFormatError("%s: truncated payload, expected %d bytes, got %d."
                               % (path, size, len(payload)))
    pixels = np.frombuffer(payload, dtype=np.uint8).astype(np.float64) / MAXVAL
    return pixels.reshape((height, width, channels))


def write_ppm(image, path):
    """Write an ``H x W x 3`` image as binary PPM (P6), values clamped and rounded to 0..255."""

    image = np.asarray(image)
    if image.ndim != 3 or image.shape[2] != 3:
        raise ShapeError("write_ppm expects H x W x 3, got %s." % (image.shape, ))
    _write_netpbm(path, 'P6', _quantize(image))


def read_ppm(path):
    """Read a binary PPM (P6, maxval 255) as an ``H x W x 3`` float image.

    Raises
    ------

    ImageFormatError
        On a wrong magic number, a maxval other than 255 or a truncated file.
    """
    return _read_netpbm(path, 'P6', 3)


def write_pgm(image, path):
    """Write an ``H x W`` map (or any array with that trailing shape) as binary PGM (P5)."""

    image = np.asarray(image)
    image = image.reshape(image.shape[-2:])
    _write_netpbm(path, 'P5', _quantize(image))


def read_pgm(path):
    return _read_netpbm(path, 'P5', 1)[:, :, 0]


################
# Augmentation #
################

def augment(images, crop, seed, flip=True):
    """Crop and flip several aligned images identically.

    Parameters
    ----------

    images : sequence of numpy.ndarray
        Arrays sharing their leading ``H x W`` extents, e.g. a degraded image, its clean
        counterpart and its mask.
    crop : int
        Side of the square window, a multiple of 32 and at most ``min(H, W)``.
    seed : int or numpy.random.Generator
        Draws the window position and one 0.5-probability flip per axis, in that order.
    flip : bool, optional
        If ``False``, the flip draws are still made but not applied.

    Returns
    -------

    tuple of numpy.ndarray
    """
    height, width = images[0].shape[:2]
    for image in images[1:]:
        if image.shape[:2] != (height, width):
            raise ShapeError("augment: images of extents %s and %s are not aligned."
                             % (images[0].shape[:2], image.shape[:2]))
    if crop < 1 or crop % SIZE_MULTIPLE:
        raise ShapeError("Crop must be a positive multiple of %d, got %s." % (SIZE_MULTIPLE, crop))
    if crop > min(height, width):
        raise ShapeError("Crop %d exceeds the image extent %dx%d." % (crop, height, width))

    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    top = int(rng.integers(0, height - crop + 1))
    left = int(rng.integers(0, width - crop + 1))
    flip_h = rng.random() < 0.5
    flip_v = rng.random() < 0.5

    out = []
    for image in images:
        image = image[top:top + crop, left:left + crop]
        if flip and flip_h:
            image = image[:, ::-1]
        if flip and flip_v:
            image = image[::-1]
        out.append(np.ascontiguousarray(image))
    return tuple(out)


############
# Datasets #
############

def _name(index, kind, ext):
    return '%04d_%s.%s' % (index, kind, ext)


def write_dataset(out, count, size=128, seed=0, n_blobs=None):
    """Generate ``count`` pairs into the directory ``out`` (sample ``i`` uses seed ``seed + i``).

    Masks are built from the quantized images, i.e. from exactly what is read back.
    """
    if count < 1:
        raise DatasetError("count must be >= 1, got %s." % count)
    if not os.path.isdir(out):
        os.makedirs(out)

    for i in six.moves.range(count):
        degraded, clean = generate_pair(SceneSpec(size=size, seed=seed + i, n_blobs=n_blobs))
        input_path = os.path.join(out, _name(i, 'input', 'ppm'))
        gt_path = os.path.join(out, _name(i, 'gt', 'ppm'))
        write_ppm(degraded, input_path)
        write_ppm(clean, gt_path)

        mask = build_pseudo_mask(read_ppm(input_path), read_ppm(gt_path))
        write_pgm(mask, os.path.join(out, _name(i, 'mask', 'pgm')))

    meta = {
        'count': count,
        'size': size,
        'seed': seed,
        'format_version': DATASET_FORMAT_VERSION,
    }
    with open(os.path.join(out, 'meta.json'), 'w') as stream:
        json.dump(meta, stream, indent=4, sort_keys=True)
    log.info('Wrote %d pairs of %dx%d to %s', count, size, size, out)
    return meta


class PairedDataset(object):
    """Read access to a dataset directory; pairs are associated by index.

    Raises
    ------

    DatasetError
        If the directory does not exist or holds no ``NNNN_input.ppm`` file.
    """

    def __init__(self, root):
        if not os.path.isdir(root):
            raise DatasetError("%s: not a directory." % root)
        self.root = root
        self.indexes = sorted(int(m.group(1)) for m in
                              (_INPUT_RE.match(f) for f in os.listdir(root)) if m)
        if not self.indexes:
            raise DatasetError("%s: no pairs found." % root)

    @property
    def meta(self):
        path = os.path.join(self.root, 'meta.json')
        if not os.path.exists(path):
            return {}
        with open(path) as stream:
            return json.load(stream)

    def __len__(self):
        return len(self.indexes)

    def __iter__(self):
        for position in six.moves.range(len(self)):
            yield self[position]

    def path(self, index, kind, ext='ppm'):
        return os.path.join(self.root, _name(index, kind, ext))

    def __getitem__(self, position):
        index = self.indexes[position]
        gt_path = self.path(index, 'gt')
        if not os.path.exists(gt_path):
            raise DatasetError("%s: missing ground truth for pair %04d." % (self.root, index))

        degraded = read_ppm(self.path(index, 'input'))
        clean = read_ppm(gt_path)
        if degraded.shape != clean.shape:
            raise ShapeError("Pair %04d: input %s and ground truth %s differ."
                             % (index, degraded.shape, clean.shape))

        mask = None
        mask_path = self.path(index, 'mask', 'pgm')
        if os.path.exists(mask_path):
            mask = read_pgm(mask_path)
        return Pair(index, degraded, clean, mask)


######################
# Array <-> tensors  #
######################

def images_to_tensor(images):
    """Stack ``H x W x C`` arrays into an ``N x C x H x W`` tensor."""

    return Tensor(np.stack([np.transpose(image, (2, 0, 1)) for image in images]))


def tensor_to_image(tensor, index=0):
    """The ``index``-th image of an ``N x C x H x W`` tensor as ``H x W x C`` float64 array."""

    return np.transpose(np.asarray(tensor.numpy()[index], dtype=np.float64), (1, 2, 0))
