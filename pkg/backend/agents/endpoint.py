"""
Chat-completion endpoint adapter.

The only module that knows the wire format: POST {base_url}/chat/completions
with {model, messages, temperature} and a bearer token read from the
environment variable the manifest names.
"""
import contextlib
import logging
import os
import time
import uuid

import requests

from agents.base import Agent
from arena.exceptions import ConfigurationError, EndpointError, TransportError

logger = logging.getLogger(__name__)

RETRYABLE_STATUS = {408, 409, 425, 429, 500, 502, 503, 504}


class EndpointAgent(Agent):
    def __init__(
        self,
        name,
        model_name,
        base_url,
        auth_env,
        temperature=1.0,
        max_retries=3,
        timeout=300.0,
        backoff=1.0,
        limiter=None,
        sleep=time.sleep,
    ):
        super().__init__(name)
        self.model_name = model_name
        self.base_url = base_url.rstrip('/')
        self.auth_env = auth_env
        self.temperature = temperature
        self.max_retries = max_retries
        self.timeout = timeout
        self.backoff = backoff
        self.limiter = limiter
        self.sleep = sleep

    @property
    def url(self):
        return f"{self.base_url}/chat/completions"

    def _api_key(self):
        key = os.environ.get(self.auth_env, '').strip()
        if not key:
            raise ConfigurationError(
                f"Environment variable '{self.auth_env}' holding the key for '{self.name}' is not set"
            )
        return key

    def _extract(self, response):
        try:
            payload = response.json()
            content = payload['choices'][0]['message']['content']
        except (ValueError, KeyError, IndexError, TypeError):
            raise EndpointError(response.status_code, f"Malformed completion body: {response.text[:300]}")
        return payload.get('id', ''), content or ''

    def complete(self, prompt, *, purpose, context=None):
        api_key = self._api_key()
        body = {
            'model': self.model_name,
            'messages': [{'role': 'user', 'content': prompt}],
            'temperature': self.temperature,
        }
        last_error = None

        for attempt in range(self.max_retries + 1):
            request_id = uuid.uuid4().hex
            headers = {
                'Authorization': f"Bearer {api_key}",
                'Content-Type': 'application/json',
                'X-Request-ID': request_id,
            }
            try:
                with self.limiter if self.limiter is not None else contextlib.nullcontext():
                    response = requests.post(self.url, json=body, headers=headers, timeout=self.timeout)
            except (requests.ConnectionError, requests.Timeout) as e:
                last_error = f"{type(e).__name__}: {e}"
            else:
                if 200 <= response.status_code < 300:
                    response_id, content = self._extract(response)
                    logger.info(
                        f"Completion model={self.model_name} purpose={purpose} temperature={self.temperature} "
                        f"request_id={request_id} response_id={response_id} retries={attempt}"
                    )
                    return content
                if response.status_code not in RETRYABLE_STATUS:
                    logger.error(
                        f"Endpoint '{self.name}' rejected request {request_id} with HTTP {response.status_code}"
                    )
                    raise EndpointError(response.status_code, response.text[:300])
                last_error = f"HTTP {response.status_code}"

            if attempt < self.max_retries:
                delay = self.backoff * (2 ** attempt)
                logger.warning(
                    f"Retrying '{self.name}' ({purpose}) after {last_error}; "
                    f"retry {attempt + 1}/{self.max_retries} in {delay:.1f}s (request_id={request_id})"
                )
                self.sleep(delay)

        raise TransportError(
            f"Endpoint '{self.name}' failed after {self.max_retries + 1} attempts: {last_error}"
        )
