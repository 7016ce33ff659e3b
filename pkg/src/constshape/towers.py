"""Numbers too large for floats, stored as iterated powers of ten.

Tower(level, value) stands for 10^10^…^value with ``level`` tens. Values
are kept normalized: a level-0 value stays below 1e300, and a positive
level always carries a value above 300, so comparison is by level first.
Each operation rounds its float result up by a relative 1e-12.
"""

import math
from functools import total_ordering

LIMIT = 300.0
SLACK = 1e-12


def _up(x):
    return x * (1 + SLACK) if x > 0 else x * (1 - SLACK)


@total_ordering
class Tower:
    __slots__ = ("level", "value")

    def __init__(self, level, value):
        level, value = int(level), float(value)
        if math.isnan(value) or math.isinf(value):
            raise OverflowError("tower value is not finite")
        while level == 0 and value >= 10 ** LIMIT:
            value, level = math.log10(value), level + 1
        while level > 0 and value <= LIMIT:
            value, level = 10.0 ** value, level - 1
        self.level, self.value = level, value

    @classmethod
    def of(cls, x):
        if isinstance(x, Tower):
            return x
        if isinstance(x, int) and x.bit_length() > 900:
            return cls(1, math.log10(x))
        return cls(0, float(x))

    def is_float(self):
        return self.level == 0

    def __float__(self):
        if self.level:
            raise OverflowError("tower number does not fit a float")
        return self.value

    def log10(self):
        if self.level:
            return Tower(self.level - 1, self.value)
        if self.value <= 0:
            raise ValueError("log of a non-positive number")
        return Tower(0, math.log10(self.value))

    @classmethod
    def exp10(cls, t):
        t = cls.of(t)
        if t.level:
            return cls(t.level + 1, t.value)
        if t.value > LIMIT:
            return cls(1, t.value)
        return cls(0, _up(10.0 ** t.value))

    def __add__(self, other):
        other = Tower.of(other)
        if self.level == 0 and other.level == 0:
            return Tower(0, _up(self.value + other.value))
        big, small = (self, other) if self >= other else (other, self)
        if small.level == 0 and small.value <= 0:
            return big
        lb, ls = big.log10(), small.log10()
        if lb.level == 0 and ls.level == 0:
            return Tower.exp10(_up(lb.value + math.log10(1 + 10.0 ** (ls.value - lb.value))))
        return big
    __radd__ = __add__

    def __mul__(self, other):
        other = Tower.of(other)
        if self.level == 0 and other.level == 0:
            p = self.value * other.value
            if abs(p) < 10 ** LIMIT:
                return Tower(0, _up(p))
        if min(self, other) <= Tower(0, 0):
            raise ValueError("tower multiplication needs positive factors")
        return Tower.exp10(self.log10() + other.log10())
    __rmul__ = __mul__

    def __pow__(self, e):
        e = Tower.of(e)
        if self.level == 0 and e.level == 0:
            try:
                return Tower(0, _up(self.value ** e.value))
            except OverflowError:
                pass
        lg = self.log10()
        if lg.level == 0 and lg.value <= 0:
            # base at most 1: the power stays at most 1
            return Tower(0, _up(self.value ** float(e))) if e.level == 0 else Tower(0, 0.0)
        return Tower.exp10(lg * e)

    def ceil(self):
        if self.level == 0 and self.value < 2 ** 53:
            return Tower(0, math.ceil(self.value))
        return self

    def __eq__(self, other):
        other = Tower.of(other)
        return (self.level, self.value) == (other.level, other.value)

    def __lt__(self, other):
        other = Tower.of(other)
        return (self.level, self.value) < (other.level, other.value)

    def __hash__(self):
        return hash((self.level, self.value))

    def __repr__(self):
        return f"Tower({self.level}, {self.value!r})"

    def __str__(self):
        return "10^" * self.level + (f"{self.value:.6g}" if self.level else f"{self.value:.10g}")

    def to_doc(self):
        return {"level": self.level, "value": self.value, "text": str(self)}
