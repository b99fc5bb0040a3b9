"""Canonical-correlation spectra of large VARs and their limit laws.

Core modules:

- ``wachter``: Wachter / Marchenko-Pastur limit distributions, moment
  functionals, and the Stieltjes-transform oracle.
- ``cca``: panel -> sorted squared sample canonical correlations.
- ``stats``: LR / Pillai-Bartlett statistics, centerings, Bartlett factors.
- ``mc``: seeded data-generating processes and the Monte Carlo driver.
- ``qq``: Wachter qq-plot construction and SVG/CSV rendering.
- ``ingest``: CSV panel ingestion.
- ``service``: FastAPI wrapper; ``cli``: thin command-line client.
"""

__version__ = "0.1.0"

from . import cca, ingest, mc, qq, stats, wachter  # noqa: E402,F401

__all__ = ["cca", "ingest", "mc", "qq", "stats", "wachter", "__version__"]
