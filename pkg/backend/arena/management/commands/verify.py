from arena.management.commands._common import ArenaCommand


class Command(ArenaCommand):
    help = 'Phase 3: the verifier judges every problem with a failed attempt'
    title = 'Verifying disputed problems'

    def run(self, service, options):
        verdicts, held = service.verify()
        excluded = sum(1 for v in verdicts if not v.valid)
        self.stdout.write(f"Verdicts: {len(verdicts)} ({excluded} excluded)")
        if held:
            self.stdout.write(self.style.WARNING(f"{len(held)} problem(s) held for manual replay: {', '.join(held)}"))
        self.stdout.write(self.style.SUCCESS('Verdicts written'))
