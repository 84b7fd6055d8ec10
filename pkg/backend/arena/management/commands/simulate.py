from arena.exceptions import ConfigurationError
from arena.management.commands._common import (
    ArenaCommand,
    add_bootstrap_arguments,
    bootstrap_overrides,
    print_leaderboard,
)


class Command(ArenaCommand):
    help = 'Run a full round with synthetic agents only'
    title = 'Simulating an all-synthetic round'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        add_bootstrap_arguments(parser)
        parser.add_argument(
            '--parallelism',
            type=int,
            help='Worker count for dispatch and bootstrap (does not affect results)',
        )

    def overrides(self, options):
        return {**bootstrap_overrides(options), 'parallelism': options.get('parallelism')}

    def run(self, service, options):
        unbound = [model.name for model in service.manifest.models if not model.is_synthetic]
        if unbound:
            raise ConfigurationError(f"simulate needs synthetic models only; endpoint-bound: {', '.join(unbound)}")
        report = service.run_round()
        print_leaderboard(self, report)
        self.stdout.write(self.style.SUCCESS(f"\nSimulated round written to {service.out_dir}"))
