"""
News archive client: month-by-month article metadata, turned into
generation tasks (headline + first three words of the lead).

Raw month responses are cached in a ``diskcache.Cache`` so repeated runs
over the same months do not download them again.
"""

import logging
import os
from typing import Any, Dict, Iterable, List, Optional, Tuple

import diskcache as dc
import httpx
import regex

from errors import AuthFailure, ConfigError, MalformedResponse
from generation.client import HttpClient
from generation.models import GenerationTask

debug = logging.getLogger("ergdiv")

DEFAULT_ENDPOINT = "https://api.nytimes.com/svc/archive/v1/{year}/{month}.json"
MIN_LEAD_TOKENS = 3

_MONTH = regex.compile(r"^(\d{4})-(0[1-9]|1[0-2])$")


def parse_months(spec: str) -> List[Tuple[int, int]]:
    """``2023-01`` or an inclusive range ``2023-01:2023-03`` -> [(year, month), ...]"""
    parts = spec.split(":")
    if len(parts) > 2:
        raise ConfigError(f"bad month range '{spec}'", months=spec)
    bounds = []
    for part in parts:
        match = _MONTH.match(part.strip())
        if not match:
            raise ConfigError(f"bad month '{part}', expected YYYY-MM", months=spec)
        bounds.append((int(match.group(1)), int(match.group(2))))
    first, last = bounds[0], bounds[-1]
    if last < first:
        raise ConfigError(f"month range '{spec}' runs backwards", months=spec)

    months = []
    year, month = first
    while (year, month) <= last:
        months.append((year, month))
        year, month = (year + 1, 1) if month == 12 else (year, month + 1)
    return months


def tasks_from_docs(docs: Iterable[Dict[str, Any]]) -> List[GenerationTask]:
    """One task per article with a headline and a lead of at least three tokens"""
    tasks = []
    skipped = 0
    for doc in docs:
        headline = ((doc.get("headline") or {}).get("main") or "").strip()
        lead = (doc.get("lead_paragraph") or "").strip()
        source_id = str(doc.get("_id") or doc.get("uri") or "")
        if not headline or len(lead.split()) < MIN_LEAD_TOKENS or not source_id:
            skipped += 1
            continue
        tasks.append(GenerationTask.from_lead(headline, lead, source_id))
    if skipped:
        debug.debug(f"Skipped {skipped} articles without a headline or a usable lead")
    return tasks


class ArchiveClient(HttpClient):
    def __init__(
        self,
        endpoint: str = DEFAULT_ENDPOINT,
        key_env: str = "NYT_API_KEY",
        cache: Optional[dc.Cache] = None,
        cache_ttl: int = 604800,
        timeout: float = 30.0,
        max_retries: int = 5,
        backoff_factor: float = 1.0,
        api_key: Optional[str] = None,
        transport: Optional[httpx.BaseTransport] = None,
    ):
        super().__init__(timeout=timeout, max_retries=max_retries, backoff_factor=backoff_factor,
                         transport=transport)
        self.endpoint = endpoint
        self.key_env = key_env
        self.cache = cache
        self.cache_ttl = cache_ttl
        self._api_key = api_key

    def _key(self) -> str:
        if self._api_key is None:
            self._api_key = os.environ.get(self.key_env)
        if not self._api_key:
            raise AuthFailure(f"environment variable {self.key_env} is not set", env=self.key_env)
        return self._api_key

    def fetch_month(self, year: int, month: int) -> List[Dict[str, Any]]:
        cache_key = f"archive:{self.endpoint}:{year}-{month:02d}"
        if self.cache is not None:
            cached = self.cache.get(cache_key)
            if cached is not None:
                debug.debug(f"Archive {year}-{month:02d} loaded from cache")
                return cached

        url = self.endpoint.format(year=year, month=month)
        data = self.request_json("GET", url, params={"api-key": self._key()})
        try:
            docs = data["response"]["docs"]
        except (KeyError, TypeError) as e:
            raise MalformedResponse(f"archive response for {year}-{month:02d} has no response.docs",
                                    url=url) from e
        if not isinstance(docs, list):
            raise MalformedResponse(f"archive docs for {year}-{month:02d} is not a list", url=url)

        if self.cache is not None:
            self.cache.set(cache_key, docs, expire=self.cache_ttl)
        debug.info(f"Archive {year}-{month:02d}: {len(docs)} articles")
        return docs


def fetch_headlines(client: ArchiveClient, months: Iterable[Tuple[int, int]]) -> List[GenerationTask]:
    """Tasks for every usable article of every month, first occurrence of a source_id wins"""
    tasks: List[GenerationTask] = []
    seen = set()
    for year, month in months:
        for task in tasks_from_docs(client.fetch_month(year, month)):
            if task.source_id in seen:
                continue
            seen.add(task.source_id)
            tasks.append(task)
    debug.info(f"Built {len(tasks)} generation tasks")
    return tasks
