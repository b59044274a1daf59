"""nomhol: permissive-nominal logic, higher-order logic, a translation
between them, and an executable desk-scale semantics."""

__version__ = "0.1.0"
