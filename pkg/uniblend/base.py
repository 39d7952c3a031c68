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

from __future__ import unicode_literals, absolute_import

# Constants
PRECISION_FLOAT32 = 'float32'
PRECISION_FLOAT64 = 'float64'

#: Extents of every model input must be a multiple of this (2 ** stages * SAAM pyramid depth).
SIZE_MULTIPLE = 32

#: PSNR reported for identical images.
PSNR_CAP = 99.0

CHECKPOINT_MAGIC = b'UBND'
CHECKPOINT_VERSION = b'1'

DATASET_FORMAT_VERSION = 1


class UniBlendError(Exception):
    """Base class for all exceptions."""

    pass


class ShapeError(UniBlendError, ValueError):
    """Thrown when tensor shapes or image extents violate an operation's contract."""

    pass


class ContractError(UniBlendError):
    """Thrown when a precondition other than a shape is violated."""

    pass


class ConfigurationError(UniBlendError, ValueError):
    """Thrown when a configuration value or preset name is invalid."""

    pass


class ImageFormatError(UniBlendError):
    """Thrown when a netpbm file cannot be parsed."""

    pass


class DatasetError(UniBlendError):
    """Thrown when a dataset directory is empty or unusable."""

    pass


class GradientCheckError(UniBlendError):
    """Thrown when an analytic gradient disagrees with finite differences."""

    pass


class CheckpointError(UniBlendError):
    """Base class for checkpoint (de)serialization errors."""

    pass


class CheckpointMagicError(CheckpointError):
    """Thrown when a file does not start with the checkpoint magic."""

    pass


class CheckpointVersionError(CheckpointError):
    """Thrown when the checkpoint format version is not supported."""

    pass


class CheckpointTruncatedError(CheckpointError):
    """Thrown when a checkpoint ends before all declared data was read."""

    pass


class UnknownParameterError(CheckpointError):
    """Thrown when a checkpoint names a parameter the configured model does not have."""

    def __init__(self, name):
        self.name = name
        super(UnknownParameterError, self).__init__("%s: unknown parameter." % name)


class ParameterShapeError(CheckpointError):
    """Thrown when a stored parameter does not have the shape the configured model expects."""

    def __init__(self, name, expected, found):
        self.name = name
        self.expected = tuple(expected)
        self.found = tuple(found)
        super(ParameterShapeError, self).__init__(
            "%s: expected shape %s, found %s." % (name, self.expected, self.found))
