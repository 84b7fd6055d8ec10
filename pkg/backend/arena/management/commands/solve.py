from collections import Counter

from arena.management.commands._common import ArenaCommand


class Command(ArenaCommand):
    help = 'Phase 2: every solver attempts every problem it did not author'
    title = 'Solving problems'

    def run(self, service, options):
        records = service.solve()
        judgements = Counter(str(r.judgement) for r in records)
        correct = sum(r.outcome for r in records)
        self.stdout.write(f"Attempts: {len(records)}, correct: {correct}")
        for judgement, count in sorted(judgements.items()):
            self.stdout.write(f"  {judgement}: {count}")
        self.stdout.write(self.style.SUCCESS('Solve records written'))
