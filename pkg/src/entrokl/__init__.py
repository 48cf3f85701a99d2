"""entrokl - Kozachenko-Leonenko nearest-neighbor entropy estimation."""

from importlib.metadata import version

__version__ = version("entrokl")
