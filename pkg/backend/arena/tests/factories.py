"""
Manifests and artifacts for tests.
"""
from arena.domain import Judgement, SolveRecord, Verdict
from arena.manifest import parse_manifest
from rating.tests.factories import make_problem


def manifest_data(n_agents=4, problems_per_model=3, **overrides):
    models = [
        {
            'name': f"agent-{i:02d}",
            'roles': ['author', 'solver', 'verifier'] if i == 0 else ['author', 'solver'],
            'synthetic': {
                'latent_ability': -1.0 + 2.0 * i / max(n_agents - 1, 1),
                'authoring_difficulty_spread': 1.0,
            },
        }
        for i in range(n_agents)
    ]
    data = {
        'models': models,
        'problems_per_model': problems_per_model,
        'anchor_model': 'agent-00',
        'bootstrap_iterations': 20,
        'pipeline_stages': 1,
        'amplification_rounds': 0,
        'seed': 17,
        'parallelism': 1,
    }
    data.update(overrides)
    return data


def synthetic_manifest(n_agents=4, problems_per_model=3, **overrides):
    return parse_manifest(manifest_data(n_agents, problems_per_model, **overrides))


def make_record(solver, problem, answer='1', outcome=1, trace='work'):
    judgement = Judgement.CORRECT if outcome else Judgement.INCORRECT
    return SolveRecord(solver=solver, problem=problem, answer=answer, trace=trace, outcome=outcome, judgement=judgement)


def make_verdict(problem, valid=1, selected='1', backbone='agent-00', index=1):
    return Verdict(
        problem=problem,
        backbone=backbone,
        valid=valid,
        selected=selected if valid else None,
        selected_index=index if valid else None,
    )


__all__ = ['make_problem', 'make_record', 'make_verdict', 'manifest_data', 'synthetic_manifest']
