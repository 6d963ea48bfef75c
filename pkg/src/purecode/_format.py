from decimal import ROUND_HALF_EVEN, Decimal


def format_float(value: float, precision: int | None) -> str:
    """Fixed-point text rounded half-even at ``precision`` decimals.

    ``precision=None`` gives the shortest round-trip repr.
    """
    if precision is None:
        return repr(float(value))
    q = Decimal(1).scaleb(-precision)
    out = Decimal(repr(float(value))).quantize(q, rounding=ROUND_HALF_EVEN)
    if out == 0:
        out = abs(out)
    return str(out)
