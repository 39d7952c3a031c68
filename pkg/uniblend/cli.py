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

"""The ``uniblend`` command line interface.

Exit codes: 0 on success, 1 on usage and configuration errors, 2 on IO, format and shape
errors, 3 when the gradient check fails.
"""

from __future__ import unicode_literals, absolute_import, print_function

import argparse
import json
import logging
import sys

from collections import OrderedDict

from .base import CheckpointError
from .base import ConfigurationError
from .base import DatasetError
from .base import GradientCheckError
from .base import ImageFormatError
from .base import ShapeError
from .checkpoint import load_params
from .data import read_ppm
from .data import tensor_to_image
from .data import write_dataset
from .data import write_pgm
from .data import write_ppm
from .gradcheck import assert_passed
from .gradcheck import run_grad_check
from .losses import LossWeights
from .model import ABLATIONS
from .model import ModelConfig
from .model import ablation_config
from .model import complexity
from .training import TrainConfig
from .training import evaluate_split
from .training import restore_image
from .training import run_ablation
from .training import train_loop
from .training import write_json

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_CHECK_FAILED = 3


class UsageError(Exception):
    pass


class ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError('%s\n%s: error: %s' % (self.format_usage().rstrip(), self.prog, message))


class BaseCommand(object):
    help = None

    def add_arguments(self, parser):
        pass

    def handle(self, **options):
        raise NotImplementedError


def _add_train_arguments(parser):
    parser.add_argument('--data', required=True, metavar='DIR', help="Dataset directory.")
    parser.add_argument('--steps', type=int, default=300)
    parser.add_argument('--batch', type=int, default=4)
    parser.add_argument('--crop', type=int, default=64)
    parser.add_argument('--lr', type=float, default=1e-4)
    parser.add_argument('--seed', type=int, default=1)
    parser.add_argument('--base-channels', type=int, default=16, metavar='C')
    parser.add_argument('--context-channels', type=int, default=16, metavar='CG')


def _train_config(options, **kwargs):
    return TrainConfig(steps=options['steps'], batch=options['batch'], crop=options['crop'],
                       lr=options['lr'], seed=options['seed'], **kwargs)


class GenerateDataCommand(BaseCommand):
    help = "Generate a synthetic dataset of degraded/clean pairs."

    def add_arguments(self, parser):
        parser.add_argument('--out', required=True, metavar='DIR')
        parser.add_argument('--count', type=int, default=8)
        parser.add_argument('--size', type=int, default=128)
        parser.add_argument('--seed', type=int, default=0)
        parser.add_argument('--blobs', type=int, metavar='B',
                            help="Attenuation blobs per scene (default: random, 2 to 5).")

    def handle(self, **options):
        write_dataset(options['out'], options['count'], size=options['size'],
                      seed=options['seed'], n_blobs=options['blobs'])


class TrainCommand(BaseCommand):
    help = "Train a model on a dataset directory."

    def add_arguments(self, parser):
        _add_train_arguments(parser)
        parser.add_argument('--out', required=True, metavar='CKPT', help="Checkpoint to write.")
        parser.add_argument('--no-mask', action='store_true')
        parser.add_argument('--no-saam', action='store_true')
        parser.add_argument('--no-context', action='store_true')
        parser.add_argument('--weights', metavar='a1,a2,a3,lam',
                            help="Loss weights (default: 0.2,0.1,0.01,0.5).")
        parser.add_argument('--log', metavar='FILE', help="Write the per-step loss log here.")

    def handle(self, **options):
        config = ModelConfig(base_channels=options['base_channels'],
                             context_channels=options['context_channels'],
                             use_mask=not options['no_mask'], use_saam=not options['no_saam'],
                             use_context=not options['no_context'])
        weights = None
        if options['weights']:
            weights = LossWeights.from_string(options['weights'])
        train_loop(options['data'], config, _train_config(options, weights=weights),
                   log_path=options['log'], checkpoint=options['out'])


class InferCommand(BaseCommand):
    help = "Restore a single PPM image."

    def add_arguments(self, parser):
        parser.add_argument('--model', required=True, metavar='CKPT')
        parser.add_argument('--input', required=True, metavar='IMG')
        parser.add_argument('--output', required=True, metavar='IMG')
        parser.add_argument('--dump-mask', metavar='PGM', help="Write the soft guidance mask.")
        parser.add_argument('--dump-residual', metavar='PPM',
                            help="Write the residual, mapped to 0.5 + 0.5 * R.")

    def handle(self, **options):
        params, config = load_params(options['model'])
        image = read_ppm(options['input'])
        restored, output, _ = restore_image(image, params, config)
        write_ppm(restored, options['output'])

        if options['dump_mask']:
            write_pgm(output.mask.numpy()[0, 0], options['dump_mask'])
        if options['dump_residual']:
            write_ppm(0.5 + 0.5 * tensor_to_image(output.residual), options['dump_residual'])


class EvalCommand(BaseCommand):
    help = "Evaluate a model on a dataset directory."

    def add_arguments(self, parser):
        parser.add_argument('--model', required=True, metavar='CKPT')
        parser.add_argument('--data', required=True, metavar='DIR')
        parser.add_argument('--report', required=True, metavar='JSON')

    def handle(self, **options):
        params, config = load_params(options['model'])
        report = evaluate_split(params, config, options['data'])
        write_json(report, options['report'])
        print('PSNR %.2f dB (input %.2f dB), SSIM %.4f (input %.4f), %d skipped' % (
            report['mean_psnr'], report['baseline_psnr'], report['mean_ssim'],
            report['baseline_ssim'], report['skipped']))


class GradCheckCommand(BaseCommand):
    help = "Verify all analytic gradients against finite differences."

    def add_arguments(self, parser):
        parser.add_argument('--seed', type=int, default=0)
        parser.add_argument('--f64', action='store_true', help="Check in 64 bit.")

    def handle(self, **options):
        results = run_grad_check(seed=options['seed'], float64=options['f64'])
        for result in results:
            print('%-20s %.3e  %s' % (result.op, result.error,
                                      'ok' if result.passed else 'FAILED'))
        assert_passed(results)


class AblateCommand(BaseCommand):
    help = "Train and evaluate every row of the ablation ladder."

    def add_arguments(self, parser):
        _add_train_arguments(parser)
        parser.add_argument('--out', required=True, metavar='DIR')
        parser.add_argument('--only', nargs='+', choices=list(ABLATIONS), metavar='ALIAS')

    def handle(self, **options):
        model_settings = {
            'base_channels': options['base_channels'],
            'context_channels': options['context_channels'],
        }
        summary = run_ablation(options['data'], options['out'], _train_config(options),
                               aliases=options['only'], model_settings=model_settings)
        print(json.dumps(summary, indent=4, sort_keys=True))


class ComplexityCommand(BaseCommand):
    help = "Print parameters and multiply-accumulates of every ablation row."

    def add_arguments(self, parser):
        parser.add_argument('--size', type=int, default=128)

    def handle(self, **options):
        table = OrderedDict((alias, complexity(ablation_config(alias), options['size']))
                            for alias in ABLATIONS)
        print(json.dumps(table, indent=4))


COMMANDS = OrderedDict([
    ('gen-data', GenerateDataCommand),
    ('train', TrainCommand),
    ('infer', InferCommand),
    ('eval', EvalCommand),
    ('grad-check', GradCheckCommand),
    ('ablate', AblateCommand),
    ('complexity', ComplexityCommand),
])


def get_parser():
    parser = ArgumentParser(prog='uniblend', description="Ambient lighting normalization.")
    parser.add_argument('-v', '--verbose', action='store_true', help="Log debug messages.")
    subparsers = parser.add_subparsers(dest='command', metavar='command',
                                       parser_class=ArgumentParser)
    for name, cls in COMMANDS.items():
        command = cls()
        subparser = subparsers.add_parser(name, help=command.help, description=command.help)
        command.add_arguments(subparser)
        subparser.set_defaults(handler=command)
    return parser


def main(argv=None):
    """Parse ``argv`` (defaults to ``sys.argv[1:]``), run the command and return the exit code."""

    parser = get_parser()
    try:
        args = parser.parse_args(sys.argv[1:] if argv is None else argv)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE

    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format='%(levelname)s %(name)s: %(message)s', stream=sys.stderr)

    options = vars(args)
    handler = options.pop('handler')
    try:
        return handler.handle(**options) or EXIT_OK
    except ConfigurationError as e:
        print('Error: %s' % e, file=sys.stderr)
        return EXIT_USAGE
    except (ImageFormatError, CheckpointError, DatasetError, ShapeError, IOError) as e:
        print('Error: %s' % e, file=sys.stderr)
        return EXIT_IO
    except GradientCheckError as e:
        print('Error: %s' % e, file=sys.stderr)
        return EXIT_CHECK_FAILED
