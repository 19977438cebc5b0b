"""rcclab - regular cycle condition toolkit for automorphisms of finite groups."""

__version__ = "0.1.0"
