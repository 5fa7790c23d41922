"""OoD sample analysis with ensemble detection and approximate grid layout."""

__version__ = "0.1.0"
