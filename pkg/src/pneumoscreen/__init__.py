"""Chest X-ray pneumonia screening: tiling pipeline, risk indicators, triage service.

Submodules are imported lazily by the CLI so lightweight verbs (``score``,
``simulate``) start fast; import what you need directly::

    from pneumoscreen import images, classifier, aggregation, indicators
"""

__version__ = "0.1.0"
