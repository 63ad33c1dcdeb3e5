"""covform: exact verification of conformally covariant operators on forms."""

__version__ = "0.1.0"
