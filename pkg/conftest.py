"""
conftest.py

Makes shared/ and functions/ importable from tests/ regardless of where
pytest is started.
"""
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent
sys.path.insert(0, str(ROOT))
