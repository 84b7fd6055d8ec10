"""
Problem taxonomy and per-author domain schedules.
"""
import logging

from arena.domain import DomainTag
from arena.exceptions import ConfigurationError
from arena.randomness import keyed_rng

logger = logging.getLogger(__name__)

TAXONOMY = {
    'Analysis': [
        'real analysis',
        'measure and integration',
        'functional analysis',
        'PDEs',
        'complex analysis',
    ],
    'Algebra': [
        'linear algebra',
        'abstract algebra (groups/rings/fields)',
        'representation theory',
        'algebraic geometry',
        'category theory',
    ],
    'Geometry & Topology': [
        'differential geometry',
        'smooth manifolds',
        'point-set topology',
        'algebraic topology',
        'homotopy theory',
    ],
    'Discrete Mathematics': [
        'combinatorics',
        'graph theory',
        'logic and foundations',
        'algorithms',
        'complexity',
    ],
    'Probability & Statistics': [
        'probability theory',
        'mathematical statistics',
        'stochastic processes',
        'stochastic calculus',
        'Markov chains',
    ],
    'Applied & Computational Mathematics': [
        'differential equations',
        'optimization',
        'numerical analysis',
        'dynamical systems',
        'control theory',
    ],
}

BROAD_AREAS = list(TAXONOMY)


def default_taxonomy():
    return [DomainTag(area, subfield) for area, subfields in TAXONOMY.items() for subfield in subfields]


def is_known_tag(tag):
    return tag.subfield in TAXONOMY.get(tag.broad_area, ())


def group_by_area(taxonomy):
    """Ordered mapping broad area -> subfields, preserving first appearance."""
    areas = {}
    for tag in taxonomy:
        subfields = areas.setdefault(tag.broad_area, [])
        if tag.subfield not in subfields:
            subfields.append(tag.subfield)
    return areas


def plan_domain_schedule(k, taxonomy, seed=0, key=''):
    """
    Spread k problem slots over the broad areas of the taxonomy.

    Every area gets floor(k/n) or ceil(k/n) slots; the areas that receive the
    extra slots are drawn from a stream keyed by (seed, key). Subfields rotate
    round-robin inside an area and slots are interleaved across areas.
    """
    if k < 1:
        raise ConfigurationError(f"Problems per model must be at least 1, got {k}")
    areas = group_by_area(taxonomy or [])
    if not areas:
        raise ConfigurationError('Domain taxonomy is empty')

    names = list(areas)
    base, extra = divmod(k, len(names))
    counts = {name: base for name in names}
    if extra:
        order = keyed_rng(seed, 'schedule', key).permutation(len(names))
        for index in sorted(order[:extra]):
            counts[names[index]] += 1

    schedule = []
    for slot in range(max(counts.values())):
        for name in names:
            if slot < counts[name]:
                subfields = areas[name]
                schedule.append(DomainTag(name, subfields[slot % len(subfields)]))

    logger.debug(f"Planned {k} slots over {len(names)} areas for '{key}': {counts}")
    return schedule
