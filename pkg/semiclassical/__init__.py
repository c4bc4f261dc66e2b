from semiclassical.version import VERSION

__version__ = VERSION
