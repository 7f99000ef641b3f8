"""Exact scalars: rationals and quadratic extensions Q(sqrt(d)).

Every comparison is decided with integer arithmetic only.  A ``Quad`` is
``a + b*sqrt(d)`` with rational a, b and a fixed square-free d >= 0; d = 0
means the purely rational case (b is forced to 0).  Quads mix freely with
ints and Fractions in arithmetic, which lets the simplex solver run over
either field with the same code.
"""

from fractions import Fraction


def is_squarefree(d):
    if d < 0:
        return False
    if d in (0, 1):
        return True
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            return False
        k += 1
    return True


def _sign_a_plus_b_sqrt_d(a, b, d):
    """Exact sign of a + b*sqrt(d) for rational a, b and square-free d >= 2."""
    if b == 0:
        return (a > 0) - (a < 0)
    if a == 0:
        return (b > 0) - (b < 0)
    if a > 0 and b > 0:
        return 1
    if a < 0 and b < 0:
        return -1
    # Opposite signs: compare |a| with |b|sqrt(d) via squares.
    lhs = a * a
    rhs = b * b * d
    if a > 0:  # b < 0
        if lhs > rhs:
            return 1
        if lhs < rhs:
            return -1
        return 0
    # a < 0, b > 0
    if rhs > lhs:
        return 1
    if rhs < lhs:
        return -1
    return 0


class Quad:
    """Element a + b*sqrt(d) of the real quadratic field Q(sqrt(d))."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b=0, d=0):
        a = Fraction(a)
        b = Fraction(b)
        if d == 0 or d == 1:
            a = a + b * (1 if d == 1 else 0)
            b = Fraction(0)
            d = 0
        self.a = a
        self.b = b
        self.d = d

    def _coerce(self, other):
        if isinstance(other, Quad):
            if other.d == self.d or other.b == 0:
                return Quad(other.a, other.b, self.d)
            if self.b == 0:
                return other
            raise TypeError("mixed quadratic fields")
        if isinstance(other, (int, Fraction)):
            return Quad(other, 0, self.d)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d = self.d or o.d
        return Quad(self.a + o.a, self.b + o.b, d)

    __radd__ = __add__

    def __neg__(self):
        return Quad(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d = self.d or o.d
        return Quad(self.a * o.a + self.b * o.b * d, self.a * o.b + self.b * o.a, d)

    __rmul__ = __mul__

    def inverse(self):
        n = self.a * self.a - self.b * self.b * self.d
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt(d))")
        return Quad(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def sign(self):
        if self.d == 0:
            return (self.a > 0) - (self.a < 0)
        return _sign_a_plus_b_sqrt_d(self.a, self.b, self.d)

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b, self.d if self.b else 0))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __repr__(self):
        if self.b == 0:
            return f"Quad({self.a})"
        return f"Quad({self.a} + {self.b}*sqrt({self.d}))"


def quad_sign(a, b, d):
    """Sign of a + b*sqrt(d) for rational a, b (d square-free, 0 means rational)."""
    if d == 0:
        return (a > 0) - (a < 0)
    return _sign_a_plus_b_sqrt_d(Fraction(a), Fraction(b), d)
