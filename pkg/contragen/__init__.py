"""
Contract-guided search-based test generation for a small subject language.
"""

__version__ = "0.1.0"
