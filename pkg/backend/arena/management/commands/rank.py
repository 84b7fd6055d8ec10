from arena.management.commands._common import ArenaCommand, add_bootstrap_arguments, bootstrap_overrides


class Command(ArenaCommand):
    help = 'Phase 4: fit the Rasch model and bootstrap rating intervals'
    title = 'Ranking models'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        add_bootstrap_arguments(parser)

    def overrides(self, options):
        return bootstrap_overrides(options)

    def run(self, service, options):
        full, intervals, ranges = service.rank()
        self.stdout.write(
            f"Fit: {len(full.abilities)} solvers, {len(full.difficulties)} problems, "
            f"{full.iterations} sweeps, gradient norm {full.final_grad_norm:.2e}"
        )
        self.stdout.write(f"Intervals: {len(intervals)} rows over {len(ranges)} models")
        self.stdout.write(self.style.SUCCESS('Fit, intervals and rank ranges written'))
