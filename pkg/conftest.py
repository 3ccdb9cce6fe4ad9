"""Puts the project root on ``sys.path`` so tests import ``cli`` and ``pipeline`` like the entry points do."""

from __future__ import annotations

import sys
from pathlib import Path


ROOT = Path(__file__).resolve().parent

if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))
