"""Combinatorial and exact-algebraic machinery for moduli of maps relative a
normal crossings divisor: stratified divisors, level buildings, decorated map
types, matching conditions, level systems, and dimension formulas."""

__version__ = "0.1.0"
