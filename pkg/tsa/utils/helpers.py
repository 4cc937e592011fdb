import hashlib
import logging
import math
import re
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional, Union

import pandas as pd

logger = logging.getLogger(__name__)

ISO_FORMAT = "%Y-%m-%dT%H:%M:%SZ"


def ensure_utc(dt: datetime) -> datetime:
    """Attach UTC to naive datetimes and convert aware ones to UTC"""
    if dt.tzinfo is None:
        return dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc)


def iso_utc(dt: Optional[datetime]) -> str:
    """
    Format a datetime as an ISO-8601 UTC timestamp with a trailing Z

    Sub-second parts are dropped; window boundaries are whole seconds.

    Args:
        dt: DateTime object to format

    Returns:
        Timestamp such as 2024-01-01T00:00:00Z, or an empty string for None
    """
    if dt is None:
        return ""
    return ensure_utc(dt).strftime(ISO_FORMAT)


def parse_iso_utc(text: str) -> datetime:
    """
    Parse an ISO-8601 timestamp into an aware UTC datetime

    Args:
        text: Timestamp text, with or without an offset

    Returns:
        Aware datetime in UTC

    Raises:
        ValueError: if the text is not a timestamp
    """
    stamp = pd.Timestamp(text)
    if stamp is pd.NaT:
        raise ValueError(f"Not a timestamp: {text!r}")
    if stamp.tzinfo is None:
        stamp = stamp.tz_localize("UTC")
    return stamp.tz_convert("UTC").to_pydatetime()


def format_duration(seconds: float) -> str:
    """Render seconds as e.g. '2h 05m 07s'"""
    seconds = int(round(seconds))
    hours, remainder = divmod(seconds, 3600)
    minutes, secs = divmod(remainder, 60)
    if hours:
        return f"{hours}h {minutes:02d}m {secs:02d}s"
    if minutes:
        return f"{minutes}m {secs:02d}s"
    return f"{secs}s"


def format_file_size(size_bytes: int) -> str:
    """
    Format a byte count in human readable form

    Args:
        size_bytes: Size in bytes

    Returns:
        Formatted size string
    """
    if size_bytes <= 0:
        return "0 B"

    size_names = ["B", "KB", "MB", "GB", "TB", "PB"]
    i = min(int(math.floor(math.log(size_bytes, 1024))), len(size_names) - 1)
    scaled = round(size_bytes / math.pow(1024, i), 2)
    return f"{scaled} {size_names[i]}"


def clean_filename(name: str) -> str:
    """
    Make an identifier safe to use as part of a file name

    Args:
        name: Station, satellite or constellation id

    Returns:
        Cleaned name
    """
    if not name:
        return "untitled"

    name = re.sub(r'[<>:"/\\|?*\s]', '_', name)
    name = re.sub(r'[\x00-\x1f\x7f-\x9f]', '', name)

    if not name or name in ('.', '..'):
        return "untitled"
    return name[:200]


def sha256_file(path: Union[str, Path]) -> str:
    """Hex SHA-256 digest of a file's bytes"""
    digest = hashlib.sha256()
    with open(path, 'rb') as handle:
        for block in iter(lambda: handle.read(1 << 16), b''):
            digest.update(block)
    return digest.hexdigest()

