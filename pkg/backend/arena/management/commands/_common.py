import logging

from django.core.management.base import BaseCommand, CommandError

from arena.exceptions import ArenaError
from arena.manifest import load_manifest
from arena.round_service import ArenaRoundService

logger = logging.getLogger(__name__)


class ArenaCommand(BaseCommand):
    """Base for the arena phase commands: --manifest/--out handling and exit codes."""

    title = ''

    def add_arguments(self, parser):
        parser.add_argument(
            '--manifest',
            required=True,
            help='Path to the run manifest (JSON)',
        )
        parser.add_argument(
            '--out',
            required=True,
            help='Run directory holding the phase artifacts',
        )

    def banner(self, text):
        self.stdout.write('=' * 80)
        self.stdout.write(self.style.SUCCESS(text))
        self.stdout.write('=' * 80)

    def load_service(self, options, **overrides):
        manifest = load_manifest(options['manifest']).with_overrides(**overrides)
        self.stdout.write(f"Manifest: {options['manifest']} (hash {manifest.hash[:12]})")
        self.stdout.write(f"Run directory: {options['out']}\n")
        return ArenaRoundService(manifest, options['out'])

    def run(self, service, options):
        raise NotImplementedError

    def handle(self, *args, **options):
        self.banner(self.title or self.help)
        try:
            service = self.load_service(options, **self.overrides(options))
            self.run(service, options)
        except ArenaError as e:
            logger.error(f"{type(e).__name__}: {e}")
            raise CommandError(str(e), returncode=e.exit_code)

    def overrides(self, options):
        return {}


def add_bootstrap_arguments(parser):
    parser.add_argument(
        '--bootstrap-iterations',
        type=int,
        help='Number of bootstrap resamples (overrides the manifest)',
    )
    parser.add_argument(
        '--bootstrap-seed',
        type=int,
        help='Seed for the bootstrap resample streams (overrides the manifest)',
    )
    parser.add_argument(
        '--alpha',
        type=float,
        help='Tail mass on each side of the percentile interval (default 0.025)',
    )


def bootstrap_overrides(options):
    return {
        'bootstrap_iterations': options.get('bootstrap_iterations'),
        'bootstrap_seed': options.get('bootstrap_seed'),
        'alpha': options.get('alpha'),
    }


def print_leaderboard(command, report):
    command.stdout.write(f"\n{'#':>3}  {'Model':<28} {'Solve':>6} {'Author':>6} {'Comp.':>6}  Range")
    command.stdout.write('-' * 80)
    for row in report.leaderboard:
        author = '-' if row.author is None else f"{row.author:.0f}"
        comp = '-' if row.composite is None else f"{row.composite:.0f}"
        bounds = '-' if row.range is None else f"{row.range[0]}-{row.range[1]}"
        command.stdout.write(f"{row.rank:>3}  {row.model:<28} {row.solve:>6.0f} {author:>6} {comp:>6}  {bounds}")
