"""Pre-transmission hardening for HTTP 402 micropayments."""

__version__ = "0.1.0"
