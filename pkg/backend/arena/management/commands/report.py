from arena.leaderboard import FORMATS
from arena.management.commands._common import ArenaCommand, print_leaderboard


def _names(value):
    return [name.strip() for name in value.split(',') if name.strip()] if value else None


class Command(ArenaCommand):
    help = 'Assemble report.json and export the leaderboard'
    title = 'Building report'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument(
            '--format',
            action='append',
            choices=FORMATS,
            help='Leaderboard export format; repeat for several (default: markdown)',
        )
        parser.add_argument(
            '--newcomers',
            help='Comma-separated authors whose break rate is reported against --incumbents',
        )
        parser.add_argument(
            '--incumbents',
            help='Comma-separated solvers used for the break-rate analysis',
        )

    def run(self, service, options):
        report = service.report(
            newcomers=_names(options.get('newcomers')),
            incumbents=_names(options.get('incumbents')),
            formats=tuple(options.get('format') or ['markdown']),
        )
        print_leaderboard(self, report)
        counts = report.counts
        self.stdout.write(
            f"\nProblems: {counts['problems']} ({counts['valid']} valid, {counts['excluded']} excluded, "
            f"{counts['held']} held); observations: {counts['observations']}"
        )
        self.stdout.write(self.style.SUCCESS('Report written'))
