"""sexdoc: a documentation compiler for S-expression source trees."""

__version__ = "0.1.0"
