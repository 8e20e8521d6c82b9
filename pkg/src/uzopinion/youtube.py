"""Minimal client for the YouTube Data API v3 ``commentThreads`` endpoint.

Items are yielded exactly as the API returns them. Labels and POS tags are
added later by annotators; nothing here touches them.
"""

from __future__ import annotations

import json
import urllib.parse
import urllib.request
from typing import Callable, Iterator

ENDPOINT = "https://www.googleapis.com/youtube/v3/commentThreads"


def build_url(video_id: str, api_key: str, page_token: str | None = None, page_size: int = 100) -> str:
    query = {
        "part": "snippet,replies",
        "videoId": video_id,
        "key": api_key,
        "maxResults": str(page_size),
        "textFormat": "plainText",
    }
    if page_token:
        query["pageToken"] = page_token
    return f"{ENDPOINT}?{urllib.parse.urlencode(query)}"


def _default_get(url: str) -> dict:
    with urllib.request.urlopen(url, timeout=30) as resp:
        return json.loads(resp.read().decode("utf-8"))


def fetch_comment_threads(
    video_id: str,
    api_key: str,
    max_pages: int | None = None,
    get: Callable[[str], dict] | None = None,
) -> Iterator[dict]:
    """Yield raw commentThread resources for ``video_id``, following page tokens."""
    get = get or _default_get
    token = None
    pages = 0
    while True:
        payload = get(build_url(video_id, api_key, token))
        yield from payload.get("items", [])
        pages += 1
        token = payload.get("nextPageToken")
        if not token or (max_pages is not None and pages >= max_pages):
            return
