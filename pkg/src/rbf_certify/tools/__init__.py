"""MCP tools for rbf-certify."""

# Tools are registered in their respective modules
from . import certificate
from . import interpolation
from . import verification

__all__ = ['certificate', 'interpolation', 'verification']
