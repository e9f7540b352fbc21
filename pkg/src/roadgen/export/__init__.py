"""Scenario serialization: canonical JSON, OpenDRIVE subset, and SVG."""

from .opendrive import ROADMARK_STYLE, to_opendrive, validate_opendrive
from .scenario_json import (
    SCHEMA_VERSION,
    ScenarioDocument,
    from_json,
    load_document,
    to_json,
)
from .svg import to_svg

__all__ = [
    "ROADMARK_STYLE",
    "SCHEMA_VERSION",
    "ScenarioDocument",
    "from_json",
    "load_document",
    "to_json",
    "to_opendrive",
    "to_svg",
    "validate_opendrive",
]
