"""
Schemas for the run manifest and for every persisted artifact row.

Validation only: nothing here touches a database. Field errors surface as
ConfigurationError (manifest) or LoadError (artifacts) in the callers.
"""
import math

from django.conf import settings
from rest_framework import serializers

from arena.domain import Axis, DomainTag, Judgement, Role, Validity
from arena.taxonomy import TAXONOMY, is_known_tag


# -----------------------
# Manifest
# -----------------------
class EndpointBindingSerializer(serializers.Serializer):
    model_name = serializers.CharField()
    base_url = serializers.CharField()
    auth_env = serializers.CharField()
    temperature = serializers.FloatField(required=False, allow_null=True, min_value=0.0, default=None)
    max_retries = serializers.IntegerField(min_value=0, default=lambda: settings.ARENA_ENDPOINT_MAX_RETRIES)
    timeout = serializers.FloatField(min_value=0.001, default=lambda: settings.ARENA_ENDPOINT_TIMEOUT)
    backoff = serializers.FloatField(min_value=0.0, default=lambda: settings.ARENA_ENDPOINT_BACKOFF)


class SyntheticBindingSerializer(serializers.Serializer):
    latent_ability = serializers.FloatField(default=0.0)
    authoring_difficulty_mean = serializers.FloatField(default=0.0)
    authoring_difficulty_spread = serializers.FloatField(min_value=0.0, default=1.0)
    gold_error_rate = serializers.FloatField(min_value=0.0, max_value=1.0, default=0.0)
    seed = serializers.IntegerField(required=False, allow_null=True, default=None)
    canned = serializers.DictField(child=serializers.CharField(allow_blank=True), required=False, default=dict)


class ModelBindingSerializer(serializers.Serializer):
    name = serializers.CharField()
    roles = serializers.ListField(
        child=serializers.ChoiceField(choices=Role.choices),
        default=lambda: [Role.AUTHOR, Role.SOLVER],
    )
    endpoint = EndpointBindingSerializer(required=False)
    synthetic = SyntheticBindingSerializer(required=False)

    def validate(self, data):
        bound = [key for key in ('endpoint', 'synthetic') if data.get(key) is not None]
        if len(bound) != 1:
            raise serializers.ValidationError(
                f"Model '{data.get('name')}' needs exactly one of 'endpoint' or 'synthetic'"
            )
        return data


class DomainTagSerializer(serializers.Serializer):
    broad_area = serializers.ChoiceField(choices=list(TAXONOMY))
    subfield = serializers.CharField()

    def validate(self, data):
        if not is_known_tag(DomainTag(data['broad_area'], data['subfield'])):
            raise serializers.ValidationError(
                f"Subfield '{data['subfield']}' is not listed under '{data['broad_area']}'"
            )
        return data


class RunManifestSerializer(serializers.Serializer):
    models = ModelBindingSerializer(many=True)
    problems_per_model = serializers.IntegerField(min_value=1)
    domains = DomainTagSerializer(many=True, required=False)
    anchor_model = serializers.CharField()
    anchor_rating = serializers.FloatField(default=lambda: settings.ARENA_ANCHOR_RATING)
    weights = serializers.ListField(
        child=serializers.FloatField(min_value=0.0),
        min_length=2,
        max_length=2,
        default=lambda: list(settings.ARENA_WEIGHTS),
    )
    bootstrap_iterations = serializers.IntegerField(min_value=1, default=lambda: settings.ARENA_BOOTSTRAP_ITERATIONS)
    pipeline_stages = serializers.IntegerField(min_value=1, max_value=3, default=lambda: settings.ARENA_PIPELINE_STAGES)
    amplification_rounds = serializers.IntegerField(min_value=0, default=lambda: settings.ARENA_AMPLIFICATION_ROUNDS)
    seed = serializers.IntegerField(default=0)
    parallelism = serializers.IntegerField(min_value=1, default=lambda: settings.ARENA_PARALLELISM)
    verifier = serializers.CharField(required=False)
    verifier_samples = serializers.IntegerField(min_value=1, default=lambda: settings.ARENA_VERIFIER_SAMPLES)
    temperature = serializers.FloatField(min_value=0.0, default=lambda: settings.ARENA_TEMPERATURE)
    fit_tolerance = serializers.FloatField(min_value=0.0, default=lambda: settings.ARENA_FIT_TOLERANCE)
    fit_max_iterations = serializers.IntegerField(min_value=1, default=lambda: settings.ARENA_FIT_MAX_ITERATIONS)
    alpha = serializers.FloatField(default=lambda: settings.ARENA_BOOTSTRAP_ALPHA)
    bootstrap_seed = serializers.IntegerField(required=False, allow_null=True, default=None)

    def get_fields(self):
        fields = super().get_fields()
        # 'lambda' is a keyword, so it cannot be declared as a class attribute
        fields['lambda'] = serializers.FloatField(min_value=0.0, default=lambda: settings.ARENA_DEFAULT_LAMBDA)
        return fields

    def validate(self, data):
        names = [model['name'] for model in data['models']]
        if not names:
            raise serializers.ValidationError({'models': 'At least one model is required'})
        duplicates = sorted({name for name in names if names.count(name) > 1})
        if duplicates:
            raise serializers.ValidationError({'models': f"Duplicate model names: {', '.join(duplicates)}"})
        if data['anchor_model'] not in names:
            raise serializers.ValidationError({'anchor_model': f"'{data['anchor_model']}' is not a listed model"})
        if not math.isclose(sum(data['weights']), 1.0, abs_tol=1e-9):
            raise serializers.ValidationError({'weights': 'w_solve + w_author must equal 1'})
        if not 0.0 < data['alpha'] < 0.5:
            raise serializers.ValidationError({'alpha': 'alpha must lie in (0, 0.5)'})
        if data['fit_tolerance'] <= 0:
            raise serializers.ValidationError({'fit_tolerance': 'fit_tolerance must be positive'})
        verifier = data.get('verifier')
        if verifier is None:
            flagged = [m['name'] for m in data['models'] if Role.VERIFIER in m['roles']]
            if not flagged:
                raise serializers.ValidationError({'verifier': 'Name a verifier or give one model the verifier role'})
            data['verifier'] = flagged[0]
        elif verifier not in names:
            raise serializers.ValidationError({'verifier': f"'{verifier}' is not a listed model"})
        return data


# -----------------------
# Artifact rows
# -----------------------
def verbatim(**kwargs):
    """Free text stored verbatim."""
    return serializers.CharField(trim_whitespace=False, **kwargs)


class HeaderSerializer(serializers.Serializer):
    schema_version = serializers.IntegerField()
    manifest_hash = serializers.CharField()
    kind = serializers.CharField()


class MetaPromptRowSerializer(serializers.Serializer):
    author = serializers.CharField()
    domain = DomainTagSerializer()
    text = verbatim()


class ProvenanceRowSerializer(serializers.Serializer):
    meta_prompt = MetaPromptRowSerializer(allow_null=True)
    draft_statement = verbatim()
    draft_gold = verbatim()
    amplification_history = serializers.ListField(
        child=serializers.ListField(child=verbatim(), min_length=2, max_length=2)
    )


class OracleRowSerializer(serializers.Serializer):
    latent_difficulty = serializers.FloatField()
    true_answer = verbatim()


class ProblemRowSerializer(serializers.Serializer):
    id = serializers.CharField()
    author = serializers.CharField()
    domain = DomainTagSerializer()
    statement = verbatim()
    gold = verbatim()
    original_gold = verbatim()
    gold_overridden = serializers.BooleanField()
    validity = serializers.ChoiceField(choices=Validity.choices)
    stages_used = serializers.IntegerField(min_value=1, max_value=3)
    provenance = ProvenanceRowSerializer()
    oracle = OracleRowSerializer(allow_null=True)


class SolveRecordRowSerializer(serializers.Serializer):
    solver = serializers.CharField()
    problem = serializers.CharField()
    answer = verbatim(allow_blank=True)
    trace = verbatim(allow_blank=True)
    outcome = serializers.ChoiceField(choices=[0, 1])
    judgement = serializers.ChoiceField(choices=Judgement.choices)


class VerdictRowSerializer(serializers.Serializer):
    problem = serializers.CharField()
    backbone = serializers.CharField()
    valid = serializers.ChoiceField(choices=[0, 1])
    selected = verbatim(allow_null=True)
    selected_index = serializers.IntegerField(allow_null=True, min_value=1)
    rationale = verbatim(allow_blank=True)
    samples = serializers.IntegerField(min_value=1)
    conflict = serializers.BooleanField()

    def validate(self, data):
        if data['valid'] == 1 and not data.get('selected'):
            raise serializers.ValidationError({'selected': 'A valid verdict must select an answer'})
        return data


class IntervalRowSerializer(serializers.Serializer):
    model = serializers.CharField()
    axis = serializers.ChoiceField(choices=Axis.choices)
    point = serializers.FloatField()
    lower = serializers.FloatField()
    upper = serializers.FloatField()

    def validate(self, data):
        if data['lower'] > data['upper']:
            raise serializers.ValidationError({'lower': 'lower bound exceeds upper bound'})
        return data


class FitSerializer(serializers.Serializer):
    abilities = serializers.DictField(child=serializers.FloatField())
    difficulties = serializers.DictField(child=serializers.FloatField())
    converged = serializers.BooleanField()
    iterations = serializers.IntegerField(min_value=0)
    final_grad_norm = serializers.FloatField()
    log_likelihood = serializers.FloatField()

    def get_fields(self):
        fields = super().get_fields()
        fields['lambda'] = serializers.FloatField(min_value=0.0)
        return fields
