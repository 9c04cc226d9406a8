import pytest

from grauert_cert.expr import A, PHI, XI, Expr, SymbolId, symbol
from grauert_cert.grauert import build_model


def gen(kind: str, i: int, n: int = 3) -> Expr:
    """Chain generator ``A_i``/``XI_i`` (or ``PHI_i``) as an Expr."""
    if kind == PHI:
        return Expr.generator(SymbolId(PHI, i), n)
    return symbol(SymbolId(kind, i, i + 1), n)


@pytest.fixture(scope="session")
def model3():
    return build_model(3, 2, 1, 3)


@pytest.fixture(scope="session")
def env3():
    return {"a(1,2)": 2, "a(2,3)": 3, "xi(1,2)": 0.5, "xi(2,3)": -1 / 3}


__all__ = ["gen", "A", "XI", "PHI"]
