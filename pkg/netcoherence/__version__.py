"""Network coherence toolkit for noisy consensus dynamics."""

__version__ = "0.1.0"
