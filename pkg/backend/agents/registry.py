import logging
import threading

from agents.endpoint import EndpointAgent
from agents.synthetic import SyntheticAgent
from arena.randomness import stream_seed

logger = logging.getLogger(__name__)


def build_agent(binding, manifest, limiter=None):
    if binding.is_synthetic:
        spec = binding.synthetic
        seed = spec.seed if spec.seed is not None else stream_seed(manifest.seed, binding.name)
        return SyntheticAgent(
            name=binding.name,
            latent_ability=spec.latent_ability,
            authoring_difficulty_mean=spec.authoring_difficulty_mean,
            authoring_difficulty_spread=spec.authoring_difficulty_spread,
            gold_error_rate=spec.gold_error_rate,
            seed=seed,
            canned=spec.canned,
        )
    spec = binding.endpoint
    return EndpointAgent(
        name=binding.name,
        model_name=spec.model_name,
        base_url=spec.base_url,
        auth_env=spec.auth_env,
        temperature=manifest.temperature if spec.temperature is None else spec.temperature,
        max_retries=spec.max_retries,
        timeout=spec.timeout,
        backoff=spec.backoff,
        limiter=limiter,
    )


def build_agents(manifest):
    """Agents for every model in the manifest, sharing one concurrency limiter."""
    limiter = threading.BoundedSemaphore(manifest.parallelism)
    agents = {binding.name: build_agent(binding, manifest, limiter) for binding in manifest.models}
    synthetic = sum(1 for agent in agents.values() if agent.synthetic)
    logger.info(f"Built {len(agents)} agents ({synthetic} synthetic, {len(agents) - synthetic} endpoint)")
    return agents
