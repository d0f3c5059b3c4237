import random
from fractions import Fraction

import pytest
import sympy

from assocalg.algebra import AlgebraTable

PROOF_TABLES = {
    "As_2^1": (2, {(1, 1): {2: 1}}),
    "As_3^1": (3, {(1, 3): {2: 1}, (3, 1): {2: 1}}),
    "As_3^8": (3, {(1, 3): {1: 1}, (2, 3): {2: 1}, (3, 1): {1: 1}, (3, 3): {3: 1}}),
    "As_4^2": (4, {(1, 2): {4: 1}, (3, 1): {4: 1}}),
    "As_4^4": (4, {(1, 2): {3: 1}, (2, 2): {4: 1}, (2, 1): {3: -1}}),
}


def table(name):
    n, prods = PROOF_TABLES[name]
    return AlgebraTable.from_products(n, prods, name)


@pytest.fixture
def as21():
    return table("As_2^1")


@pytest.fixture
def as31():
    return table("As_3^1")


@pytest.fixture
def as38():
    return table("As_3^8")


@pytest.fixture
def as42():
    return table("As_4^2")


@pytest.fixture
def as44():
    return table("As_4^4")


@pytest.fixture(params=sorted(PROOF_TABLES))
def fixture_table(request):
    return table(request.param)


def _upper_triangular(rng, density=0.5):
    m = sympy.zeros(3, 3)
    for i in range(3):
        for j in range(i, 3):
            if rng.random() < density:
                m[i, j] = rng.randint(-2, 2)
    return m


def _flat(m):
    return [m[i, j] for i in range(3) for j in range(3)]


def random_associative_table(seed: int, max_dim: int = 4, conjugate: bool = True) -> AlgebraTable:
    """Subalgebra (without unit) of upper-triangular 3x3 matrices generated by random matrices.

    Structure constants are found with sympy, independently of assocalg's
    linear algebra; optionally followed by a random rational change of basis.
    """
    rng = random.Random(seed)
    while True:
        gens = [_upper_triangular(rng) for _ in range(rng.randint(1, 2))]
        basis = []
        for g in gens:
            if sympy.Matrix([_flat(b) for b in basis + [g]]).rank() > len(basis):
                basis.append(g)
        changed = True
        while changed and len(basis) <= max_dim:
            changed = False
            for x in list(basis):
                for y in list(basis):
                    p = x * y
                    if sympy.Matrix([_flat(b) for b in basis + [p]]).rank() > len(basis):
                        basis.append(p)
                        changed = True
        if 1 <= len(basis) <= max_dim:
            break
    n = len(basis)
    B = sympy.Matrix([_flat(b) for b in basis]).T  # 9 x n
    gamma = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            target = sympy.Matrix(_flat(basis[i] * basis[j]))
            sol, params = B.gauss_jordan_solve(target)
            assert params.shape[0] == 0
            for k in range(n):
                gamma[i][j][k] = Fraction(int(sympy.fraction(sol[k])[0]),
                                          int(sympy.fraction(sol[k])[1]))
    t = AlgebraTable(n, tuple(tuple(tuple(c) for c in r) for r in gamma), f"rand{seed}")
    if conjugate:
        while True:
            p = [[Fraction(rng.randint(-2, 2), rng.randint(1, 3)) for _ in range(n)] for _ in range(n)]
            if sympy.Matrix(p).det() != 0:
                break
        t = t.change_basis(tuple(tuple(r) for r in p))
    return t


RANDOM_SEEDS = list(range(100))


@pytest.fixture(scope="session")
def random_tables():
    return [random_associative_table(s) for s in RANDOM_SEEDS]


@pytest.fixture(scope="session")
def audit_runs(tmp_path_factory):
    """Two full CLI audits (1 and 4 worker threads): (exit codes, stdout texts, record bytes)."""
    import contextlib
    import io

    from assocalg.cli import main

    out = tmp_path_factory.mktemp("audit")
    codes, texts, streams = [], [], []
    for threads in (1, 4):
        path = out / f"records-{threads}.jsonl"
        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            codes.append(main(["audit", "--records", str(path), "--threads", str(threads)]))
        texts.append(buf.getvalue())
        streams.append(path.read_bytes())
    return codes, texts, streams


ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
