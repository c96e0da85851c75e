"""Shared utilities for serialization."""
from pathlib import Path
from typing import Any, Dict

import numpy as np
import yaml


def convert_numpy_types(obj):
    """Convert numpy (and path) types to native Python types for serialization."""
    if isinstance(obj, dict):
        return {str(k): convert_numpy_types(v) for k, v in obj.items()}
    elif isinstance(obj, list):
        return [convert_numpy_types(v) for v in obj]
    elif isinstance(obj, tuple):
        return [convert_numpy_types(v) for v in obj]
    elif isinstance(obj, np.bool_):
        return bool(obj)
    elif isinstance(obj, np.integer):
        return int(obj)
    elif isinstance(obj, np.floating):
        return float(obj)
    elif isinstance(obj, np.ndarray):
        return convert_numpy_types(obj.tolist())
    elif isinstance(obj, Path):
        return str(obj)
    else:
        return obj


def dump_yaml(payload: Dict[str, Any], path: Path) -> Path:
    """Write ``payload`` as a flat YAML document."""
    path = Path(path)
    with open(path, "w", encoding="utf-8") as f:
        yaml.safe_dump(convert_numpy_types(payload), f, sort_keys=True, default_flow_style=False)
    return path
