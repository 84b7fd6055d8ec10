from arena.management.commands._common import ArenaCommand


class Command(ArenaCommand):
    help = 'Re-run verification with another backbone and measure agreement'
    title = 'Replaying verification'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument(
            '--backbone',
            required=True,
            help='Manifest model to use as the verifier for the replay',
        )

    def run(self, service, options):
        report = service.replay_verify(options['backbone'])
        self.stdout.write(f"Problems compared: {report.total}")
        self.stdout.write(f"Same exclusion decision: {report.exclusion_agreement:.1%} ({report.same_exclusion}/{report.total})")
        if report.answer_agreement is not None:
            self.stdout.write(
                f"Same selected answer: {report.answer_agreement:.1%} ({report.same_answer}/{report.kept_by_both})"
            )
        for item in report.exclusion_disagreements + report.answer_disagreements:
            self.stdout.write(self.style.WARNING(f"  disagreement: {item}"))
        self.stdout.write(self.style.SUCCESS('Agreement written'))
