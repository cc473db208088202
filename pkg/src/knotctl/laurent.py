"""Exact one-variable Laurent polynomials over the integers.

Small and purpose-built: enough arithmetic for determinant-based knot
polynomials (add/sub/mul, exact division for fraction-free elimination,
unit normalization, evaluation at integers) plus the ``coeff:exp`` text
form used by fixtures and the CLI.
"""

from __future__ import annotations

from fractions import Fraction


class Laurent:
    """Immutable Laurent polynomial c_k * var^k with integer c_k.

    ``var`` is cosmetic (printing only); arithmetic never checks it and
    takes the left operand's variable.
    """

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs=None, var="t"):
        cleaned = {}
        if coeffs:
            for e, c in coeffs.items():
                if c:
                    cleaned[int(e)] = int(c)
        object.__setattr__(self, "coeffs", cleaned)
        object.__setattr__(self, "var", var)

    def __setattr__(self, *a):
        raise AttributeError("Laurent is immutable")

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, var="t"):
        return cls({}, var)

    @classmethod
    def one(cls, var="t"):
        return cls({0: 1}, var)

    @classmethod
    def term(cls, coeff, exp, var="t"):
        return cls({exp: coeff}, var)

    @classmethod
    def const(cls, n, var="t"):
        return cls({0: n}, var)

    # -- queries --------------------------------------------------------

    def is_zero(self):
        return not self.coeffs

    def min_exp(self):
        return min(self.coeffs)

    def max_exp(self):
        return max(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            other = Laurent.const(other, self.var)
        if not isinstance(other, Laurent):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    # -- arithmetic -----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, int):
            return Laurent.const(other, self.var)
        if isinstance(other, Laurent):
            return other
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return Laurent(out, self.var)

    __radd__ = __add__

    def __neg__(self):
        return Laurent({e: -c for e, c in self.coeffs.items()}, self.var)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                out[e] = out.get(e, 0) + c1 * c2
        return Laurent(out, self.var)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers")
        out = Laurent.one(self.var)
        for _ in range(n):
            out = out * self
        return out

    def shifted(self, k):
        """Multiply by var**k (k may be negative)."""
        return Laurent({e + k: c for e, c in self.coeffs.items()}, self.var)

    # -- exact division (for fraction-free elimination) -----------------

    def divexact(self, other):
        """Exact Laurent division; raises ArithmeticError if not exact."""
        other = self._coerce(other)
        if other is None or other.is_zero():
            raise ArithmeticError("division by zero polynomial")
        if self.is_zero():
            return self
        # shift both to ordinary polynomials, divide, shift back
        sa, sb = self.min_exp(), other.min_exp()
        num = {e - sa: c for e, c in self.coeffs.items()}
        den = {e - sb: c for e, c in other.coeffs.items()}
        dmax = max(den)
        dlead = den[dmax]
        quot = {}
        while num:
            nmax = max(num)
            if nmax < dmax:
                raise ArithmeticError("inexact polynomial division")
            c, r = divmod(num[nmax], dlead)
            if r:
                raise ArithmeticError("inexact polynomial division")
            qe = nmax - dmax
            quot[qe] = c
            for e, dc in den.items():
                k = e + qe
                num[k] = num.get(k, 0) - c * dc
                if num[k] == 0:
                    del num[k]
        return Laurent(quot, self.var).shifted(sa - sb)

    # -- evaluation and normalization -----------------------------------

    def evaluate(self, x):
        """Evaluate at an integer (exact; negative exponents via fractions)."""
        total = Fraction(0)
        for e, c in self.coeffs.items():
            if e >= 0:
                total += c * Fraction(x) ** e
            else:
                total += c / (Fraction(x) ** (-e))
        if total.denominator == 1:
            return int(total)
        return total

    def normalized(self):
        """Shift so the lowest exponent is 0, then make the top coeff positive."""
        if self.is_zero():
            return self
        p = self.shifted(-self.min_exp())
        if p.coeffs[p.max_exp()] < 0:
            p = -p
        return p

    # -- text forms -----------------------------------------------------

    def text(self):
        """Compact ``coeff:exp`` form, ascending exponents; zero is ``0``."""
        if self.is_zero():
            return "0"
        return ",".join(f"{c}:{e}" for e, c in sorted(self.coeffs.items()))

    @classmethod
    def parse(cls, text, var="t"):
        text = text.strip()
        if text == "0":
            return cls.zero(var)
        coeffs = {}
        for chunk in text.split(","):
            try:
                c, e = chunk.split(":")
                coeffs[int(e)] = coeffs.get(int(e), 0) + int(c)
            except ValueError:
                raise ValueError(f"bad polynomial term {chunk!r}") from None
        return cls(coeffs, var)

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for e, c in sorted(self.coeffs.items()):
            if e == 0:
                term = str(abs(c))
            else:
                mag = "" if abs(c) == 1 else f"{abs(c)}*"
                pe = self.var if e == 1 else f"{self.var}^{e}"
                term = mag + pe
            if not parts:
                parts.append(("-" if c < 0 else "") + term)
            else:
                parts.append(("- " if c < 0 else "+ ") + term)
        return " ".join(parts)

    def __repr__(self):
        return f"Laurent({self.text()!r}, var={self.var!r})"
