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

"""Dense tensors with reverse-mode automatic differentiation.

Operations executed while a :py:class:`Graph` is active (``with Graph() as graph: ...``) and
that involve at least one tensor with ``requires_grad=True`` are recorded on that graph.
:py:meth:`Graph.backward` then walks the recorded nodes once, in reverse execution order, and
accumulates gradients into ``Tensor.grad``. Outside of a graph, operations only compute values,
which is what inference uses.

The compute precision is a global engine setting, see :py:func:`precision`.
"""

from __future__ import unicode_literals, absolute_import

from collections import OrderedDict
from contextlib import contextmanager
from threading import local

import numpy as np
import six

from numpy.lib.stride_tricks import sliding_window_view

from scipy.special import expit

from .base import ConfigurationError
from .base import ContractError
from .base import PRECISION_FLOAT32
from .base import PRECISION_FLOAT64
from .base import ShapeError

MAX_RANK = 4

_DTYPES = {
    PRECISION_FLOAT32: np.float32,
    PRECISION_FLOAT64: np.float64,
}

_engine = {
    'precision': PRECISION_FLOAT32,
}

# per-thread stacks of active graphs and MAC counters
_local = local()


def _stack(name):
    if hasattr(_local, name) is False:
        setattr(_local, name, [])
    return getattr(_local, name)


##############
# Precision  #
##############

def get_precision():
    return _engine['precision']


def set_precision(mode):
    """Set the global compute precision (``"float32"`` or ``"float64"``)."""

    if mode not in _DTYPES:
        raise ConfigurationError("Unknown precision: %s" % mode)
    _engine['precision'] = mode


def get_dtype():
    return _DTYPES[_engine['precision']]


@contextmanager
def precision(mode):
    """Temporarily switch the global compute precision.

    Tensors created inside the block use the new precision; tensors created before keep their
    buffers. Gradient verification runs in ``float64``::

        >>> with precision('float64'):
        ...     x = uniform([4], seed=1)
    """
    old = get_precision()
    set_precision(mode)
    try:
        yield
    finally:
        set_precision(old)


##########
# Tensor #
##########

class Tensor(object):
    """A dense real tensor of rank 1 to 4 (canonical layout ``N x C x H x W``).

    Parameters
    ----------

    data : array_like
        The values. Scalars become tensors of shape ``(1,)``. The buffer is converted to the
        current engine precision.
    requires_grad : bool, optional
        Whether gradients are accumulated for this tensor. Constants default to ``False``.
    name : str, optional
        A name used in error messages.
    """

    def __init__(self, data, requires_grad=False, name=None):
        data = np.ascontiguousarray(data, dtype=get_dtype())
        if data.ndim == 0:
            data = data.reshape(1)
        if data.ndim > MAX_RANK:
            raise ShapeError("Tensors have at most %d extents, got shape %s."
                             % (MAX_RANK, data.shape))

        self.data = data
        self.requires_grad = requires_grad
        self.grad = None
        self.name = name

    @property
    def shape(self):
        return self.data.shape

    @property
    def ndim(self):
        return self.data.ndim

    @property
    def size(self):
        return self.data.size

    def numpy(self):
        return self.data

    def item(self):
        if self.data.size != 1:
            raise ContractError("item() requires a tensor with one element, got %s"
                                % (self.shape, ))
        return float(self.data.reshape(-1)[0])

    def detach(self):
        return Tensor(self.data)

    def zero_grad(self):
        self.grad = None

    def __repr__(self):
        label = ' %s' % self.name if self.name else ''
        return '<Tensor%s shape=%s requires_grad=%s>' % (label, self.shape, self.requires_grad)

    def __add__(self, other):
        return binary_elementwise(self, other, 'add')

    __radd__ = __add__

    def __sub__(self, other):
        return binary_elementwise(self, other, 'sub')

    def __rsub__(self, other):
        return binary_elementwise(-self, other, 'add')

    def __mul__(self, other):
        return binary_elementwise(self, other, 'mul')

    __rmul__ = __mul__

    def __truediv__(self, other):
        return binary_elementwise(self, other, 'div')

    __div__ = __truediv__

    def __neg__(self):
        return binary_elementwise(self, -1.0, 'mul')

    def __getitem__(self, index):
        return take(self, index)

    def reshape(self, *shape):
        if len(shape) == 1 and isinstance(shape[0], (tuple, list)):
            shape = shape[0]
        return reshape(self, shape)

    def sum(self):
        return sum_all(self)

    def mean(self):
        return mean(self)


def as_tensor(value):
    if isinstance(value, Tensor):
        return value
    return Tensor(value)


#########
# Graph #
#########

class Node(object):
    """One executed operation: its output, operands and vector-Jacobian product."""

    __slots__ = ('op', 'output', 'inputs', 'vjp')

    def __init__(self, op, output, inputs, vjp):
        self.op = op
        self.output = output
        self.inputs = inputs
        self.vjp = vjp


class Graph(object):
    """Append-only record of executed operations.

    Use it as a context manager; operations executed inside the ``with`` block on tensors that
    require gradients are recorded. Graphs are bound to the thread that entered them.
    """

    def __init__(self):
        self.nodes = []

    def __enter__(self):
        _stack('graphs').append(self)
        return self

    def __exit__(self, *args):
        stack = _stack('graphs')
        if stack and stack[-1] is self:
            stack.pop()

    def __len__(self):
        return len(self.nodes)

    def record(self, op, output, inputs, vjp):
        self.nodes.append(Node(op, output, inputs, vjp))

    def backward(self, loss):
        """Accumulate ``dloss/dtensor`` into ``.grad`` of every reachable tensor.

        Parameters
        ----------

        loss : :py:class:`Tensor`
            A scalar tensor (shape ``(1,)``) computed while this graph was active.

        Raises
        ------

        ContractError
            If ``loss`` is not a scalar.
        """
        if loss.shape != (1, ):
            raise ContractError("backward() requires a scalar loss of shape (1,), got %s."
                                % (loss.shape, ))

        grads = {id(loss): np.ones_like(loss.data)}
        tensors = {id(loss): loss}

        for node in reversed(self.nodes):
            g = grads.pop(id(node.output), None)
            if g is None:
                continue
            _accumulate(node.output, g)

            for tensor, tg in zip(node.inputs, node.vjp(g)):
                if tg is None or tensor.requires_grad is False:
                    continue
                key = id(tensor)
                if key in grads:
                    grads[key] = grads[key] + tg
                else:
                    grads[key] = tg
                    tensors[key] = tensor

        # leaves: tensors that are not the output of any recorded node
        for key, g in grads.items():
            _accumulate(tensors[key], g)

        # operands that are not connected to the loss still get a (zero) gradient
        for node in self.nodes:
            for tensor in node.inputs:
                if tensor.requires_grad and tensor.grad is None:
                    tensor.grad = np.zeros_like(tensor.data)


def _accumulate(tensor, g):
    if tensor.requires_grad is False:
        return
    if tensor.grad is None:
        tensor.grad = np.array(g, dtype=tensor.data.dtype).reshape(tensor.shape)
    else:
        tensor.grad = tensor.grad + g


def backward(graph, loss):
    """Functional spelling of :py:meth:`Graph.backward`."""

    graph.backward(loss)


def current_graph():
    stack = _stack('graphs')
    return stack[-1] if stack else None


def _result(op, data, inputs, vjp):
    out = Tensor(data)
    graph = current_graph()
    if graph is not None and any(t.requires_grad for t in inputs):
        out.requires_grad = True
        graph.record(op, out, inputs, vjp)
    return out


################
# MAC counting #
################

class MacCounter(object):
    """Accumulates multiply-accumulate operations of :py:func:`conv2d` and :py:func:`linear`."""

    def __init__(self):
        self.macs = 0
        self.by_op = OrderedDict()

    def add(self, op, macs):
        self.macs += int(macs)
        self.by_op[op] = self.by_op.get(op, 0) + int(macs)


@contextmanager
def count_macs():
    counter = MacCounter()
    stack = _stack('counters')
    stack.append(counter)
    try:
        yield counter
    finally:
        stack.remove(counter)


def _count(op, macs):
    for counter in _stack('counters'):
        counter.add(op, macs)


############
# Creation #
############

def _check_shape(shape):
    if isinstance(shape, six.integer_types):
        shape = (shape, )
    shape = tuple(int(s) for s in shape)
    if not 1 <= len(shape) <= MAX_RANK:
        raise ShapeError("Tensors have 1 to %d extents, got %s." % (MAX_RANK, shape))
    if any(s < 1 for s in shape):
        raise ShapeError("All extents must be >= 1, got %s." % (shape, ))
    return shape


def get_rng(seed):
    """Return a :py:class:`numpy.random.Generator` for ``seed`` (an int or a generator)."""

    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def zeros(shape, requires_grad=False):
    return Tensor(np.zeros(_check_shape(shape)), requires_grad=requires_grad)


def constant(shape, value, requires_grad=False):
    return Tensor(np.full(_check_shape(shape), value), requires_grad=requires_grad)


def uniform(shape, low=0.0, high=1.0, seed=None, requires_grad=False):
    shape = _check_shape(shape)
    return Tensor(get_rng(seed).uniform(low, high, size=shape), requires_grad=requires_grad)


def he_normal(shape, fan_in, seed=None, requires_grad=False):
    """Draw from ``N(0, 2 / fan_in)``.

    Values are always drawn in 64 bit and then cast, so both precisions see the same
    initialization.
    """
    shape = _check_shape(shape)
    if fan_in < 1:
        raise ShapeError("fan_in must be >= 1, got %s." % fan_in)
    std = np.sqrt(2.0 / fan_in)
    return Tensor(get_rng(seed).normal(0.0, std, size=shape), requires_grad=requires_grad)


_FILL_MODES = {
    'zeros': zeros,
    'constant': constant,
    'uniform': uniform,
    'he_normal': he_normal,
}


def tensor_create(shape, fill_mode='zeros', **kwargs):
    """Create a tensor filled according to ``fill_mode``.

    Parameters
    ----------

    shape : tuple of int
        One to four extents, each ``>= 1``.
    fill_mode : {'zeros', 'constant', 'uniform', 'he_normal'}
        ``constant`` takes ``value``, ``uniform`` takes ``low``, ``high`` and ``seed``,
        ``he_normal`` takes ``fan_in`` and ``seed``.

    Raises
    ------

    ShapeError
        If an extent is zero or negative.
    """
    try:
        factory = _FILL_MODES[fill_mode]
    except KeyError:
        raise ConfigurationError("Unknown fill mode: %s" % fill_mode)
    return factory(shape, **kwargs)


###############
# Elementwise #
###############

def _unbroadcast(g, shape):
    while g.ndim > len(shape):
        g = g.sum(axis=0)
    for axis, extent in enumerate(shape):
        if extent == 1 and g.shape[axis] != 1:
            g = g.sum(axis=axis, keepdims=True)
    return g


def binary_elementwise(a, b, op):
    """Elementwise ``add``, ``sub``, ``mul`` or ``div`` of ``a`` and ``b``.

    ``b`` may broadcast over singleton extents of ``a`` (e.g. per-channel weights of shape
    ``N x C x 1 x 1`` or a single-channel mask ``N x 1 x H x W``); the result always has the
    shape of ``a``. Broadcast axes are sum-reduced in the backward pass.
    """
    a = as_tensor(a)
    b = as_tensor(b)
    try:
        shape = np.broadcast_shapes(a.shape, b.shape)
    except ValueError:
        raise ShapeError("%s: shapes %s and %s are incompatible." % (op, a.shape, b.shape))
    if shape != a.shape:
        raise ShapeError("%s: operand of shape %s does not broadcast onto %s."
                         % (op, b.shape, a.shape))

    x, y = a.data, b.data
    if op == 'add':
        data = x + y

        def vjp(g):
            return g, _unbroadcast(g, y.shape)
    elif op == 'sub':
        data = x - y

        def vjp(g):
            return g, -_unbroadcast(g, y.shape)
    elif op == 'mul':
        data = x * y

        def vjp(g):
            return g * y, _unbroadcast(g * x, y.shape)
    elif op == 'div':
        data = x / y

        def vjp(g):
            return g / y, -_unbroadcast(g * x / (y * y), y.shape)
    else:
        raise ConfigurationError("Unknown elementwise operation: %s" % op)

    return _result(op, data, (a, b), vjp)


def activation(x, kind):
    """Apply ``relu`` or ``sigmoid``. The relu subgradient at exactly 0 is 0."""

    if kind == 'relu':
        mask = x.data > 0
        data = np.where(mask, x.data, 0)

        def vjp(g):
            return g * mask,
    elif kind == 'sigmoid':
        data = expit(x.data)

        def vjp(g):
            return g * data * (1 - data),
    else:
        raise ConfigurationError("Unknown activation: %s" % kind)
    return _result(kind, data, (x, ), vjp)


def relu(x):
    return activation(x, 'relu')


def sigmoid(x):
    return activation(x, 'sigmoid')


def absolute(x):
    """Elementwise ``|x|``; the subgradient at 0 is 0."""

    sign = np.sign(x.data)

    def vjp(g):
        return g * sign,
    return _result('abs', np.abs(x.data), (x, ), vjp)


##############
# Reductions #
##############

def sum_all(x):
    def vjp(g):
        return np.broadcast_to(g.reshape((1, ) * x.ndim), x.shape).copy(),
    return _result('sum', np.sum(x.data).reshape(1), (x, ), vjp)


def mean(x):
    n = x.size

    def vjp(g):
        return np.broadcast_to(g.reshape((1, ) * x.ndim) / n, x.shape).copy(),
    return _result('mean', np.mean(x.data).reshape(1), (x, ), vjp)


def global_avg_pool(x):
    """Per-channel spatial mean, ``N x C x H x W -> N x C x 1 x 1``."""

    if x.ndim != 4:
        raise ShapeError("global_avg_pool expects N x C x H x W, got %s." % (x.shape, ))
    n, c, h, w = x.shape

    def vjp(g):
        return np.broadcast_to(g / (h * w), x.shape).copy(),
    return _result('global_avg_pool', x.data.mean(axis=(2, 3), keepdims=True), (x, ), vjp)


#########
# Shape #
#########

def reshape(x, shape):
    shape = tuple(int(s) for s in shape)
    if int(np.prod(shape)) != x.size:
        raise ShapeError("Cannot reshape %s into %s." % (x.shape, shape))

    def vjp(g):
        return g.reshape(x.shape),
    return _result('reshape', x.data.reshape(shape), (x, ), vjp)


def take(x, index):
    """Basic slicing (slices only, so the rank is preserved)."""

    if not isinstance(index, tuple):
        index = (index, )
    if not all(isinstance(i, slice) for i in index):
        raise ContractError("Only slice indexing is supported, got %r." % (index, ))

    def vjp(g):
        full = np.zeros_like(x.data)
        full[index] = g
        return full,
    return _result('take', x.data[index], (x, ), vjp)


def concat(tensors):
    """Concatenate along the channel axis (axis 1)."""

    first = tensors[0]
    for t in tensors[1:]:
        if t.ndim != first.ndim or t.shape[:1] + t.shape[2:] != first.shape[:1] + first.shape[2:]:
            raise ShapeError("Cannot concatenate %s and %s along channels."
                             % (first.shape, t.shape))
    bounds = np.cumsum([0] + [t.shape[1] for t in tensors])

    def vjp(g):
        return tuple(g[:, bounds[i]:bounds[i + 1]] for i in range(len(tensors)))
    return _result('concat', np.concatenate([t.data for t in tensors], axis=1),
                   tuple(tensors), vjp)


def concat_channels(a, b):
    """Channels of ``a`` followed by channels of ``b``; all other extents must match."""

    return concat([a, b])


#################
# Convolutions  #
#################

def _out_extent(extent, k, stride, pad):
    span = extent + 2 * pad - k
    if span < 0:
        raise ShapeError("Kernel of size %d does not fit extent %d with padding %d."
                         % (k, extent, pad))
    return span // stride + 1


def conv2d(x, weight, bias=None, stride=1, pad=0, groups=1):
    """2D cross-correlation with zero padding.

    Parameters
    ----------

    x : :py:class:`Tensor`
        Input of shape ``N x Cin x H x W``.
    weight : :py:class:`Tensor`
        Kernel of shape ``Cout x Cin/groups x k x k`` with ``k`` odd.
    bias : :py:class:`Tensor`, optional
        Shape ``Cout``.
    stride, pad, groups : int
        The output extent is ``(H + 2 * pad - k) // stride + 1``. A depthwise convolution
        uses ``groups = Cin = Cout``.
    """
    if x.ndim != 4 or weight.ndim != 4:
        raise ShapeError("conv2d expects 4D input and weight, got %s and %s."
                         % (x.shape, weight.shape))
    n, cin, h, w = x.shape
    cout, cg, k, k2 = weight.shape
    if k != k2 or k % 2 == 0:
        raise ShapeError("conv2d requires square kernels of odd size, got %dx%d." % (k, k2))
    if groups < 1 or cin % groups or cout % groups or cg != cin // groups:
        raise ShapeError("conv2d: %d input channels, weight %s and %d groups are inconsistent."
                         % (cin, weight.shape, groups))
    if bias is not None and bias.shape != (cout, ):
        raise ShapeError("conv2d: bias must have shape (%d,), got %s." % (cout, bias.shape))

    ho = _out_extent(h, k, stride, pad)
    wo = _out_extent(w, k, stride, pad)
    og = cout // groups
    hp, wp = h + 2 * pad, w + 2 * pad
    dtype = np.result_type(*[t.data for t in (x, weight, bias) if t is not None])

    xp = x.data
    if pad:
        xp = np.pad(xp, ((0, 0), (0, 0), (pad, pad), (pad, pad)))
    xg = xp.reshape(n, groups, cg, hp, wp)
    wg = weight.data.reshape(groups, og, cg, k, k)

    def window(i, j):
        return (slice(None), slice(None), slice(None),
                slice(i, i + stride * (ho - 1) + 1, stride),
                slice(j, j + stride * (wo - 1) + 1, stride))

    # dense kernels: one matmul over unfolded patches; depthwise: accumulate shifted inputs
    unfold = cg > 1
    if unfold:
        cols = sliding_window_view(xp, (k, k), axis=(2, 3))[:, :, ::stride, ::stride]
        cols = cols.reshape(n, groups, cg, ho, wo, k, k).transpose(0, 1, 2, 5, 6, 3, 4)
        cols = np.ascontiguousarray(cols, dtype=dtype).reshape(n, groups, cg * k * k, ho * wo)
        wcols = wg.reshape(groups, og, cg * k * k)
        out = np.matmul(wcols, cols)
    else:
        out = np.zeros((n, groups, og, ho * wo), dtype=dtype)
        for i in six.moves.range(k):
            for j in six.moves.range(k):
                patch = xg[window(i, j)].reshape(n, groups, cg, ho * wo)
                out += np.matmul(wg[:, :, :, i, j], patch)
    out = out.reshape(n, cout, ho, wo)
    if bias is not None:
        out += bias.data.reshape(1, cout, 1, 1)

    _count('conv2d', n * cout * cg * k * k * ho * wo)

    def vjp(g):
        gg = g.reshape(n, groups, og, ho * wo)
        gxp = np.zeros((n, groups, cg, hp, wp), dtype=dtype) if x.requires_grad else None
        gw = None

        if unfold:
            if weight.requires_grad:
                gw = np.matmul(gg, cols.transpose(0, 1, 3, 2)).sum(axis=0)
            if gxp is not None:
                dcols = np.matmul(wcols.transpose(0, 2, 1), gg)
                dcols = dcols.reshape(n, groups, cg, k, k, ho, wo)
                for i in six.moves.range(k):
                    for j in six.moves.range(k):
                        gxp[window(i, j)] += dcols[:, :, :, i, j]
        else:
            if weight.requires_grad:
                gw = np.zeros((groups, og, cg, k, k), dtype=dtype)
            for i in six.moves.range(k):
                for j in six.moves.range(k):
                    patch = xg[window(i, j)].reshape(n, groups, cg, ho * wo)
                    if gw is not None:
                        gw[:, :, :, i, j] = np.matmul(gg, patch.transpose(0, 1, 3, 2)).sum(axis=0)
                    if gxp is not None:
                        dpatch = np.matmul(wg[:, :, :, i, j].transpose(0, 2, 1), gg)
                        gxp[window(i, j)] += dpatch.reshape(n, groups, cg, ho, wo)

        gx = None
        if gxp is not None:
            gx = gxp.reshape(n, cin, hp, wp)[:, :, pad:pad + h, pad:pad + w]
        if gw is not None:
            gw = gw.reshape(weight.shape)
        gb = g.sum(axis=(0, 2, 3)) if bias is not None else None
        return gx, gw, gb

    inputs = (x, weight) if bias is None else (x, weight, bias)
    return _result('conv2d', out, inputs, vjp)


def linear(x, weight, bias=None):
    """``y = x W^T + b`` for ``x`` of shape ``N x Din`` and ``W`` of shape ``Dout x Din``."""

    if x.ndim != 2 or weight.ndim != 2 or x.shape[1] != weight.shape[1]:
        raise ShapeError("linear: input %s does not match weight %s." % (x.shape, weight.shape))
    if bias is not None and bias.shape != (weight.shape[0], ):
        raise ShapeError("linear: bias must have shape (%d,), got %s."
                         % (weight.shape[0], bias.shape))

    out = np.matmul(x.data, weight.data.T)
    if bias is not None:
        out = out + bias.data
    _count('linear', x.shape[0] * weight.shape[0] * weight.shape[1])

    def vjp(g):
        gb = g.sum(axis=0) if bias is not None else None
        return np.matmul(g, weight.data), np.matmul(g.T, x.data), gb

    inputs = (x, weight) if bias is None else (x, weight, bias)
    return _result('linear', out, inputs, vjp)


##############
# Resampling #
##############

_interp_cache = {}


def interp_matrix(n_out, n_in):
    """Bilinear interpolation matrix (half-pixel centers, edge clamped), ``n_out x n_in``."""

    key = (n_out, n_in)
    if key not in _interp_cache:
        src = (np.arange(n_out) + 0.5) * (float(n_in) / n_out) - 0.5
        src = np.maximum(src, 0.0)
        i0 = np.minimum(np.floor(src).astype(int), n_in - 1)
        i1 = np.minimum(i0 + 1, n_in - 1)
        lam = src - i0
        m = np.zeros((n_out, n_in))
        rows = np.arange(n_out)
        np.add.at(m, (rows, i0), 1.0 - lam)
        np.add.at(m, (rows, i1), lam)
        _interp_cache[key] = m
    return _interp_cache[key]


def _block_mean(x, factor):
    n, c, h, w = x.shape
    if h % factor or w % factor:
        raise ShapeError("down%d requires extents divisible by %d, got %dx%d."
                         % (factor, factor, h, w))
    data = x.data.reshape(n, c, h // factor, factor, w // factor, factor).mean(axis=(3, 5))

    def vjp(g):
        g = np.repeat(np.repeat(g, factor, axis=2), factor, axis=3)
        return g / (factor * factor),
    return _result('down%d' % factor, data, (x, ), vjp)


def up_to(x, height, width):
    """Bilinear resampling of ``x`` to ``height x width``."""

    mh = interp_matrix(height, x.shape[2]).astype(x.data.dtype)
    mw = interp_matrix(width, x.shape[3]).astype(x.data.dtype)
    data = np.matmul(np.matmul(mh, x.data), mw.T)

    def vjp(g):
        return np.matmul(np.matmul(mh.T, g), mw),
    return _result('up_to', data, (x, ), vjp)


def bilinear_resize(x, factor):
    """Resize ``x`` by ``'down2'``, ``'down4'`` or to an explicit ``(height, width)``.

    Downsampling by an integer factor is the mean of each disjoint block, which equals bilinear
    sampling at half-pixel centers.
    """
    if x.ndim != 4:
        raise ShapeError("bilinear_resize expects N x C x H x W, got %s." % (x.shape, ))
    if factor == 'down2':
        return _block_mean(x, 2)
    elif factor == 'down4':
        return _block_mean(x, 4)
    elif isinstance(factor, (tuple, list)) and len(factor) == 2:
        return up_to(x, int(factor[0]), int(factor[1]))
    raise ConfigurationError("Unknown resize factor: %r" % (factor, ))
