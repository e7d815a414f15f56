"""hwkit: exact-arithmetic Hodge/weight filtration toolkit for divisor classes
with closed-form filtration data, plus a bounded linear-algebra verification
oracle for every closed form it emits."""

__version__ = "0.1.0"
