from arena.management.commands._common import ArenaCommand


class Command(ArenaCommand):
    help = 'Phase 1: every author writes its problems'
    title = 'Generating problems'

    def run(self, service, options):
        problems = service.generate()
        authors = sorted({p.author for p in problems})
        self.stdout.write(self.style.SUCCESS(f"Generated {len(problems)} problems from {len(authors)} authors"))
