#!/usr/bin/env python3
"""Regenerate the JSON schemas shipped in schemas/ from the wire models.

Run from the repository root after changing service/models.py; the test
suite asserts the shipped files match the models.
"""

from __future__ import annotations

import json
from pathlib import Path

from cointspectra.service import models

SCHEMA_MODELS = {
    "analyze_response": models.AnalyzeResponse,
    "mc_summary": models.McSummaryModel,
    "dist_response": models.DistResponse,
    "centers_response": models.CentersResponse,
    "qq_response": models.QQResponse,
}


def main() -> None:
    out_dir = Path(__file__).resolve().parent.parent / "schemas"
    out_dir.mkdir(exist_ok=True)
    for name, model in SCHEMA_MODELS.items():
        schema = model.model_json_schema()
        path = out_dir / f"{name}.schema.json"
        path.write_text(json.dumps(schema, indent=2, sort_keys=True) + "\n")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
