"""Story comprehension over the STAR domain language.

Parse a domain file, ground its rule schemas, build per-session
comprehension models by prioritized defeasible inference, and serialize the
results as raw text, JSON documents, or rule graphs.
"""

from .lang import parse_domain, validate_domain

__version__ = "0.1.0"

__all__ = ["__version__", "parse_domain", "validate_domain"]
