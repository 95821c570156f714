"""JSON Schema loading and validation for written documents."""

import json
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Optional

from jsonschema import Draft7Validator

SCHEMA_DIR = Path(__file__).resolve().parents[2] / "schemas"


@lru_cache(maxsize=None)
def load_schema(name: str = "report", version: int = 1) -> Dict[str, Any]:
    """Load a schema shipped in the package ``schemas`` directory."""
    schema_path = SCHEMA_DIR / f"{name}_v{version}.json"
    if not schema_path.exists():
        raise FileNotFoundError(f"Schema file not found: {schema_path}")
    with open(schema_path, "r", encoding="utf-8") as f:
        return json.load(f)


def get_validator(name: str = "report", version: int = 1) -> Draft7Validator:
    return Draft7Validator(load_schema(name, version))


def validate_document(
    document: Dict[str, Any],
    name: str = "report",
    version: int = 1,
) -> tuple[bool, Optional[list[str]]]:
    """Validate a JSON-compatible document.

    Returns:
        Tuple of (is_valid, list_of_errors)
    """
    errors = sorted(get_validator(name, version).iter_errors(document), key=lambda e: list(e.path))
    if not errors:
        return True, None
    return False, [f"{'/'.join(str(p) for p in e.path) or '<root>'}: {e.message}" for e in errors]
