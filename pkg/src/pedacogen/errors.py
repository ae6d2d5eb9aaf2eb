"""Shared error base so API/CLI layers can surface stable error codes."""

from __future__ import annotations

from typing import Any


class DomainError(Exception):
    """Base class for all domain errors.

    `code` is a stable machine-readable token; `detail` carries optional
    structured context (JSON-serializable).
    """

    code = "domain_error"

    def __init__(self, message: str, detail: Any = None):
        super().__init__(message)
        self.detail = detail

    @property
    def message(self) -> str:
        return str(self)
