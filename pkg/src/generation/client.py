"""
Chat-completion client - HTTP access to an OpenAI-compatible endpoint.

This module provides:
- Automatic retry with exponential backoff for transport failures
- Retry-After handling for rate limits
- No retry on authentication failures
- Dropping of sampling fields the endpoint rejects
- Optional replay/record of request/response pairs
"""

import logging
import os
import threading
from typing import Any, Dict, List, Optional

import backoff
import httpx

from errors import AuthFailure, MalformedResponse, RateLimited, TransportError
from generation.models import GenerationConfig, GenerationTask
from generation.prompts import render_prompts
from generation.replay import ReplayStore

debug = logging.getLogger("ergdiv")

# sampling fields outside the core OpenAI schema; an endpoint may refuse them
OPTIONAL_FIELDS = ("top_k", "repetition_penalty", "num_beams")


def _retryable(e: TransportError) -> bool:
    status = e.context.get("status")
    return status is None or status >= 500


def _retry_after(response: httpx.Response) -> Optional[float]:
    value = response.headers.get("retry-after")
    if value is None:
        return None
    try:
        return max(0.0, float(value))
    except ValueError:
        return None


class HttpClient:
    """
    Shared request path for the chat and archive clients.

    Transport failures and 5xx answers are retried ``max_retries`` times with
    exponential backoff; 429 waits for Retry-After (or the backoff factor)
    and retries within the same budget; 401/403 fail at once.
    """

    def __init__(self, timeout: float = 60.0, max_retries: int = 5, backoff_factor: float = 1.0,
                 transport: Optional[httpx.BaseTransport] = None):
        self.timeout = timeout
        self.max_retries = max_retries
        self.backoff_factor = backoff_factor
        self._session = httpx.Client(timeout=timeout, follow_redirects=True, transport=transport)

        max_tries = max_retries + 1
        send = backoff.on_exception(
            backoff.expo,
            TransportError,
            max_tries=max_tries,
            giveup=lambda e: not _retryable(e),
            factor=backoff_factor,
            logger="ergdiv",
        )(self._send_once)
        self._send = backoff.on_exception(
            backoff.runtime,
            RateLimited,
            max_tries=max_tries,
            value=lambda e: e.retry_after if e.retry_after is not None else backoff_factor,
            jitter=None,
            logger="ergdiv",
        )(send)

    def close(self) -> None:
        self._session.close()

    def _send_once(self, method: str, url: str, **kwargs) -> httpx.Response:
        debug.debug(f"HTTP {method} {url}")
        try:
            response = self._session.request(method, url, **kwargs)
        except httpx.TimeoutException as e:
            raise TransportError(f"request timed out after {self.timeout}s", url=url) from e
        except httpx.RequestError as e:
            raise TransportError(f"request failed: {e}", url=url) from e

        debug.debug(f"HTTP response: {response.status_code} ({len(response.content)} bytes)")
        status = response.status_code
        if status in (401, 403):
            raise AuthFailure(f"endpoint refused the credential (HTTP {status})", url=url, status=status)
        if status == 429:
            raise RateLimited("rate limited", retry_after=_retry_after(response), url=url)
        if status >= 500:
            raise TransportError(f"server error {status}", url=url, status=status)
        return response

    def request_json(self, method: str, url: str, **kwargs) -> Any:
        response = self._send(method, url, **kwargs)
        if response.status_code >= 400:
            raise TransportError(f"HTTP error {response.status_code}", url=url, status=response.status_code,
                                 body=response.text[:500])
        try:
            return response.json()
        except ValueError as e:
            raise MalformedResponse(f"invalid JSON from {url}", url=url) from e


class ChatClient(HttpClient):
    """Renders a task's prompts and asks the endpoint for one completion"""

    def __init__(
        self,
        config: GenerationConfig,
        replay: Optional[ReplayStore] = None,
        record: Optional[ReplayStore] = None,
        api_key: Optional[str] = None,
        transport: Optional[httpx.BaseTransport] = None,
        backoff_factor: float = 1.0,
    ):
        super().__init__(timeout=config.timeout, max_retries=config.max_retries,
                         backoff_factor=backoff_factor, transport=transport)
        self.config = config
        self.replay = replay
        self.recorder = record
        self._api_key = api_key
        self._dropped = set(config.unsupported_params)
        self._lock = threading.Lock()

    def build_request(self, task: GenerationTask) -> Dict[str, Any]:
        """The request as configured; the replay digest is taken over this form"""
        system, user = render_prompts(task)
        payload: Dict[str, Any] = {
            "model": self.config.model,
            "messages": [
                {"role": "system", "content": system},
                {"role": "user", "content": user},
            ],
        }
        payload.update(self.config.sampling_fields())
        return payload

    def _credential(self) -> Dict[str, str]:
        if self._api_key is None and self.config.api_key_env:
            self._api_key = os.environ.get(self.config.api_key_env)
            if not self._api_key:
                raise AuthFailure(f"environment variable {self.config.api_key_env} is not set",
                                  env=self.config.api_key_env)
        return {"Authorization": f"Bearer {self._api_key}"} if self._api_key else {}

    def _without_dropped(self, payload: Dict[str, Any]) -> Dict[str, Any]:
        with self._lock:
            dropped = set(self._dropped)
        return {k: v for k, v in payload.items() if k not in dropped}

    def _rejected_fields(self, response: httpx.Response, payload: Dict[str, Any]) -> List[str]:
        body = response.text
        return [name for name in OPTIONAL_FIELDS if name in payload and name in body]

    def _post(self, payload: Dict[str, Any]) -> Dict[str, Any]:
        headers = self._credential()
        while True:
            body = self._without_dropped(payload)
            response = self._send("POST", self.config.endpoint, json=body, headers=headers)
            if response.status_code == 400:
                rejected = self._rejected_fields(response, body)
                if rejected:
                    debug.warning(f"{self.config.model}: endpoint rejects {', '.join(rejected)}; "
                                  f"dropping them from every request")
                    with self._lock:
                        self._dropped.update(rejected)
                    continue
            if response.status_code >= 400:
                raise TransportError(f"HTTP error {response.status_code}", url=self.config.endpoint,
                                     status=response.status_code, body=response.text[:500])
            try:
                return response.json()
            except ValueError as e:
                raise MalformedResponse("invalid JSON from chat endpoint", url=self.config.endpoint) from e

    @staticmethod
    def completion_text(data: Dict[str, Any]) -> str:
        try:
            text = data["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as e:
            raise MalformedResponse(f"response has no choices[0].message.content ({e!r})") from e
        if not isinstance(text, str):
            raise MalformedResponse("completion content is not a string")
        return text

    def generate(self, task: GenerationTask) -> str:
        """
        First completion for ``task``.

        Raises:
            ReplayMiss: replay mode and the request was never recorded
            AuthFailure, RateLimited, TransportError, MalformedResponse
        """
        payload = self.build_request(task)
        if self.replay is not None:
            return self.completion_text(self.replay.lookup(payload))

        data = self._post(payload)
        text = self.completion_text(data)
        if self.recorder is not None:
            self.recorder.record(payload, data)
        return text
