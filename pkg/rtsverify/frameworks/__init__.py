from .builtin import (
    convolution_framework,
    disjunctive_framework,
    trivial_framework,
    union_framework,
    views_framework,
    xor_framework,
)
from .catalog import generate_framework_catalog, parse_framework
from .framework import Framework

__all__ = [
    "Framework",
    "convolution_framework",
    "disjunctive_framework",
    "generate_framework_catalog",
    "parse_framework",
    "trivial_framework",
    "union_framework",
    "views_framework",
    "xor_framework",
]
