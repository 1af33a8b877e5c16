from itertools import permutations

from knapreform.exact import Matrix
from knapreform.generate import GeneratorParams, generate

EXAMPLE_A = (3488, 451, 1231, 6415, 2191)


def cofactor_det(rows):
    """Leibniz expansion; independent of the elimination code."""
    n = len(rows)
    total = 0
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = -1 if inv % 2 else 1
        for i in range(n):
            term *= rows[i][perm[i]]
        total += term
    return total


def hypothesis_pool(count, ns=range(4, 9), vmax=5, seed=2024):
    """Instances with ||a||^2 >= 2^((n+2)n), alternating equality and range constraints."""
    out = []
    ns = list(ns)
    for i in range(count):
        n = ns[i % len(ns)]
        prm = GeneratorParams(n=n, M=2 ** ((n + 2) * n // 2 + 1), vmax=vmax, hypothesis=True,
                              beta="feasible" if i % 2 == 0 else "range")
        inst, _ = next(generate(prm, 1, f"{seed}:{i}"))
        out.append(inst)
    return out


def small_pool(count, ns, M, vmax, seed):
    out = []
    for i in range(count):
        n = ns[i % len(ns)]
        prm = GeneratorParams(n=n, M=M, vmax=vmax, beta="feasible" if i % 3 else "range")
        inst, _ = next(generate(prm, 1, f"{seed}:{i}"))
        out.append(inst)
    return out


def random_matrix(rng, m, n, lo=-9, hi=9):
    return Matrix([[rng.randint(lo, hi) for _ in range(n)] for _ in range(m)])


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
