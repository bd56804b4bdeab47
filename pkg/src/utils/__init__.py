"""
Utility modules for mp2s-lab.

Provides common functionality including:
- Logging configuration
- Error handling and input validation
- Time measurement for simulation sweeps
- Configuration management
"""

from typing import List

__all__: List[str] = []
