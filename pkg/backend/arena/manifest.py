"""
Run manifest loading.

The manifest file is validated through RunManifestSerializer and turned into
frozen dataclasses. Its hash is taken once, at load time, over the effective
configuration minus `parallelism`; command-line overrides applied afterwards
never change it, so ranking knobs can be varied against the same artifacts.
"""
import hashlib
import json
import logging
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Optional

from arena.domain import DomainTag, Role
from arena.exceptions import ConfigurationError
from arena.serializers import RunManifestSerializer
from arena.taxonomy import default_taxonomy
from rating.bootstrap import BootstrapSpec
from rating.elo import RankConfig

logger = logging.getLogger(__name__)

UNHASHED_FIELDS = ('parallelism',)


@dataclass(frozen=True)
class EndpointBinding:
    model_name: str
    base_url: str
    auth_env: str
    temperature: Optional[float] = None
    max_retries: int = 3
    timeout: float = 300.0
    backoff: float = 1.0


@dataclass(frozen=True)
class SyntheticBinding:
    latent_ability: float = 0.0
    authoring_difficulty_mean: float = 0.0
    authoring_difficulty_spread: float = 1.0
    gold_error_rate: float = 0.0
    seed: Optional[int] = None
    canned: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ModelBinding:
    name: str
    roles: tuple
    endpoint: Optional[EndpointBinding] = None
    synthetic: Optional[SyntheticBinding] = None

    @property
    def is_synthetic(self):
        return self.synthetic is not None

    def has_role(self, role):
        return role in self.roles


@dataclass(frozen=True)
class RunManifest:
    models: tuple
    problems_per_model: int
    domains: tuple
    lam: float
    anchor_model: str
    anchor_rating: float
    weights: tuple
    bootstrap_iterations: int
    pipeline_stages: int
    amplification_rounds: int
    seed: int
    parallelism: int
    verifier: str
    verifier_samples: int
    temperature: float
    fit_tolerance: float
    fit_max_iterations: int
    alpha: float
    bootstrap_seed: Optional[int] = None
    hash: str = ''

    @property
    def names(self):
        return [model.name for model in self.models]

    @property
    def authors(self):
        return [model.name for model in self.models if model.has_role(Role.AUTHOR)]

    @property
    def solvers(self):
        return [model.name for model in self.models if model.has_role(Role.SOLVER)]

    def binding(self, name):
        for model in self.models:
            if model.name == name:
                return model
        raise ConfigurationError(f"Model '{name}' is not listed in the manifest")

    @property
    def all_synthetic(self):
        return all(model.is_synthetic for model in self.models)

    def rank_config(self):
        return RankConfig(
            anchor_model=self.anchor_model,
            anchor_rating=self.anchor_rating,
            weights=tuple(self.weights),
            lam=self.lam,
            tolerance=self.fit_tolerance,
            max_iterations=self.fit_max_iterations,
        )

    def bootstrap_spec(self):
        return BootstrapSpec(
            iterations=self.bootstrap_iterations,
            alpha=self.alpha,
            seed=self.seed if self.bootstrap_seed is None else self.bootstrap_seed,
            n_jobs=self.parallelism,
        )

    def with_overrides(self, **overrides):
        """Copy with command-line overrides applied; None values are ignored and the hash is kept."""
        changes = {key: value for key, value in overrides.items() if value is not None}
        if not changes:
            return self
        logger.info(f"Manifest overrides: {changes}")
        try:
            updated = replace(self, **changes)
            updated.bootstrap_spec()
            updated.rank_config()
        except TypeError as e:
            raise ConfigurationError(f"Unknown manifest override: {e}") from e
        return updated

    def to_dict(self):
        data = asdict(self)
        data.pop('hash')
        data['lambda'] = data.pop('lam')
        data['weights'] = list(self.weights)
        data['domains'] = [{'broad_area': d.broad_area, 'subfield': d.subfield} for d in self.domains]
        data['models'] = [_binding_dict(model) for model in self.models]
        return data


def _binding_dict(model):
    data = {'name': model.name, 'roles': list(model.roles)}
    if model.endpoint is not None:
        data['endpoint'] = asdict(model.endpoint)
    if model.synthetic is not None:
        data['synthetic'] = asdict(model.synthetic)
    return data


def canonical_json(data):
    return json.dumps(data, sort_keys=True, separators=(',', ':'), ensure_ascii=False)


def manifest_hash(data):
    hashed = {key: value for key, value in data.items() if key not in UNHASHED_FIELDS}
    return hashlib.sha256(canonical_json(hashed).encode('utf-8')).hexdigest()


def _build_binding(data):
    endpoint = data.get('endpoint')
    synthetic = data.get('synthetic')
    return ModelBinding(
        name=data['name'],
        roles=tuple(dict.fromkeys(str(role) for role in data['roles'])),
        endpoint=EndpointBinding(**endpoint) if endpoint else None,
        synthetic=SyntheticBinding(**{**synthetic, 'canned': dict(synthetic.get('canned') or {})}) if synthetic else None,
    )


def parse_manifest(data):
    """Validate a manifest mapping and build the RunManifest."""
    if not isinstance(data, dict):
        raise ConfigurationError('Manifest must be a JSON object')
    serializer = RunManifestSerializer(data=data)
    if not serializer.is_valid():
        raise ConfigurationError(f"Invalid manifest: {json.dumps(serializer.errors, default=str)}", errors=serializer.errors)
    valid = serializer.validated_data

    domains = valid.get('domains')
    manifest = RunManifest(
        models=tuple(_build_binding(model) for model in valid['models']),
        problems_per_model=valid['problems_per_model'],
        domains=tuple(DomainTag(**d) for d in domains) if domains else tuple(default_taxonomy()),
        lam=valid['lambda'],
        anchor_model=valid['anchor_model'],
        anchor_rating=valid['anchor_rating'],
        weights=tuple(valid['weights']),
        bootstrap_iterations=valid['bootstrap_iterations'],
        pipeline_stages=valid['pipeline_stages'],
        amplification_rounds=valid['amplification_rounds'],
        seed=valid['seed'],
        parallelism=valid['parallelism'],
        verifier=valid['verifier'],
        verifier_samples=valid['verifier_samples'],
        temperature=valid['temperature'],
        fit_tolerance=valid['fit_tolerance'],
        fit_max_iterations=valid['fit_max_iterations'],
        alpha=valid['alpha'],
        bootstrap_seed=valid.get('bootstrap_seed'),
    )
    return replace(manifest, hash=manifest_hash(manifest.to_dict()))


def load_manifest(path):
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding='utf-8'))
    except FileNotFoundError:
        raise ConfigurationError(f"Manifest file not found: {path}")
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"Manifest {path} is not valid JSON: {e}")
    manifest = parse_manifest(data)
    logger.info(f"Loaded manifest {path} ({len(manifest.models)} models, hash {manifest.hash[:12]})")
    return manifest
