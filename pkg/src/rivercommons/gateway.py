"""Uniform access to a chat-completion endpoint (OpenAI-style wire schema)
plus a deterministic scripted stub so every pipeline runs offline.
"""
from __future__ import annotations

import hashlib
import json
import os
import re
import time
from dataclasses import dataclass

from .errors import ConfigurationError, SchemaError, TemplateError, TransportError

ENV_ENDPOINT = "RIVERCOMMONS_ENDPOINT"
ENV_API_KEY = "RIVERCOMMONS_API_KEY"
ENV_MODEL = "RIVERCOMMONS_MODEL"


@dataclass(frozen=True)
class ChatRequest:
    model: str
    messages: tuple          # ordered (role, content) pairs; role in {system, user}
    temperature: float = 0.0
    max_tokens: int = 256

    def __post_init__(self):
        msgs = tuple((str(r), str(c)) for r, c in self.messages)
        if not msgs:
            raise ConfigurationError("a chat request needs at least one message")
        if any(r not in ("system", "user") for r, _ in msgs):
            raise ConfigurationError("message roles must be 'system' or 'user'")
        if self.temperature < 0:
            raise ConfigurationError("temperature must be >= 0")
        object.__setattr__(self, "messages", msgs)


@dataclass
class GatewayConfig:
    backend: str = "stub"                 # "stub" or "http"
    endpoint: str = None
    model: str = None
    timeout: float = 30.0
    max_retries: int = 2
    backoff_base: float = 0.5
    fixture_path: str = None
    log_path: str = None

    def __post_init__(self):
        if self.backend not in ("stub", "http"):
            raise ConfigurationError(f"unknown gateway backend: {self.backend!r}")
        if self.max_retries < 0:
            raise ConfigurationError("max_retries must be >= 0")
        if self.endpoint is None:
            self.endpoint = os.environ.get(ENV_ENDPOINT)
        if self.model is None:
            self.model = os.environ.get(ENV_MODEL, "stub-model")
        if self.backend == "http" and not self.endpoint:
            raise ConfigurationError("http backend requires an endpoint "
                                     f"(set {ENV_ENDPOINT} or config)")


def request_fingerprint(request: ChatRequest) -> str:
    """Stable short hash of the rendered prompt, used for fixture matching."""
    blob = "\n".join(f"{role}:{content}" for role, content in request.messages)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]


class Gateway:
    """Chat-completion client with retries, request logging and a stub mode.

    The stub replays a fixture: a JSON array of {fingerprint (optional),
    response} entries. A request is answered by the next unused entry whose
    fingerprint matches; absent a match, by the next entry in the
    unfingerprinted pool (cycling), which keeps arbitrarily long runs fully
    deterministic from a small fixture.
    """

    def __init__(self, config: GatewayConfig):
        self.config = config
        self.call_count = 0
        self._entries = []
        self._fp_cursor = {}
        self._seq_pool = []
        self._seq_cursor = 0
        self._log_file = None
        if config.backend == "stub":
            if not config.fixture_path:
                raise ConfigurationError("stub backend requires fixture_path")
            with open(config.fixture_path, "r", encoding="utf-8") as fh:
                entries = json.load(fh)
            if not isinstance(entries, list) or not entries:
                raise ConfigurationError("fixture must be a non-empty JSON array")
            for entry in entries:
                fp = entry.get("fingerprint")
                response = entry["response"]
                if not isinstance(response, str):
                    response = json.dumps(response)
                self._entries.append((fp, response))
            self._seq_pool = [resp for fp, resp in self._entries if fp is None]

    def complete(self, request: ChatRequest, tags: dict = None) -> str:
        """Send one request and return the reply text; retried on transport
        failure; every prompt/response pair is appended to the request log."""
        if self.config.backend == "stub":
            text = self._complete_stub(request)
        else:
            text = self._complete_http(request)
        self.call_count += 1
        self._log(request, text, tags)
        return text

    def _complete_stub(self, request: ChatRequest) -> str:
        fp = request_fingerprint(request)
        matching = [resp for efp, resp in self._entries if efp == fp]
        if matching:
            cursor = self._fp_cursor.get(fp, 0)
            self._fp_cursor[fp] = cursor + 1
            return matching[cursor % len(matching)]
        if not self._seq_pool:
            raise TransportError("stub fixture has no sequential entries for "
                                 f"unmatched fingerprint {fp}")
        resp = self._seq_pool[self._seq_cursor % len(self._seq_pool)]
        self._seq_cursor += 1
        return resp

    def _complete_http(self, request: ChatRequest) -> str:
        import requests

        body = {
            "model": request.model or self.config.model,
            "messages": [{"role": r, "content": c} for r, c in request.messages],
            "temperature": request.temperature,
            "max_tokens": request.max_tokens,
        }
        headers = {"Content-Type": "application/json"}
        api_key = os.environ.get(ENV_API_KEY)
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        last_err = None
        for attempt in range(self.config.max_retries + 1):
            try:
                resp = requests.post(self.config.endpoint, json=body,
                                     headers=headers, timeout=self.config.timeout)
                resp.raise_for_status()
                payload = resp.json()
                return payload["choices"][0]["message"]["content"]
            except (requests.RequestException, KeyError, IndexError, ValueError) as err:
                last_err = err
                if attempt < self.config.max_retries:
                    time.sleep(self.config.backoff_base * (2 ** attempt))
        raise TransportError(f"chat completion failed after "
                             f"{self.config.max_retries + 1} attempts: {last_err}")

    def _log(self, request: ChatRequest, response: str, tags: dict):
        if not self.config.log_path:
            return
        if self._log_file is None:
            self._log_file = open(self.config.log_path, "a", encoding="utf-8")
        record = {
            "tags": tags or {},
            "fingerprint": request_fingerprint(request),
            "messages": [{"role": r, "content": c} for r, c in request.messages],
            "response": response,
        }
        self._log_file.write(json.dumps(record, sort_keys=True) + "\n")
        self._log_file.flush()

    def close(self):
        if self._log_file is not None:
            self._log_file.close()
            self._log_file = None


_PLACEHOLDER = re.compile(r"\{([a-zA-Z_][a-zA-Z0-9_]*)\}")


def render_prompt(template: str, variables: dict) -> str:
    """Exact placeholder substitution; unresolved names raise TemplateError."""
    names = set(_PLACEHOLDER.findall(template))
    missing = names - set(variables)
    if missing:
        raise TemplateError(missing)
    return _PLACEHOLDER.sub(lambda m: str(variables[m.group(1)]), template)


_FENCED = re.compile(r"```(?:[a-zA-Z0-9_-]*)\s*\n?(.*?)```", re.S)
_INTEGER = re.compile(r"-?\d+")


def extract_structured(text: str):
    """First fenced or bare JSON value in the text, else the first integer.

    Raises SchemaError when nothing extractable is present.
    """
    if text is None:
        raise SchemaError("no text to parse", text=text)
    for block in _FENCED.findall(text):
        try:
            return json.loads(block)
        except ValueError:
            continue
    decoder = json.JSONDecoder()
    for match in re.finditer(r"[\[{]", text):
        try:
            value, _ = decoder.raw_decode(text, match.start())
            return value
        except ValueError:
            continue
    m = _INTEGER.search(text)
    if m:
        return int(m.group(0))
    raise SchemaError("nothing extractable in reply", text=text)
