import random

from malcev import linalg


def test_xgcd():
    for a, b in [(12, 18), (-4, 6), (0, 5), (7, 0), (1, 1), (-3, -9)]:
        x, y, g = linalg.xgcd(a, b)
        assert x * a + y * b == g
        assert g >= 0


def test_hnf_known():
    assert linalg.hnf([[2, 0], [0, 3], [1, 1]]) == [(1, 0), (0, 1)]
    assert linalg.hnf([[2, 4], [1, 2]]) == [(1, 2)]
    assert linalg.hnf([[0, 0], [0, 0]]) == []


def test_hnf_transform_and_kernel():
    rng = random.Random(1)
    for _ in range(50):
        m = rng.randint(1, 4)
        n = rng.randint(1, 4)
        rows = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(m)]
        H, U = linalg.hnf(rows, transform=True)
        # U * rows == H padded with zero rows
        for i in range(m):
            combo = [sum(U[i][t] * rows[t][j] for t in range(m))
                     for j in range(n)]
            expected = list(H[i]) if i < len(H) else [0] * n
            assert combo == expected
        for ker in linalg.left_kernel(rows):
            assert all(sum(ker[t] * rows[t][j] for t in range(m)) == 0
                       for j in range(n))


def test_hnf_idempotent():
    rng = random.Random(2)
    for _ in range(30):
        rows = [[rng.randint(-6, 6) for _ in range(4)] for _ in range(3)]
        H = linalg.hnf(rows)
        assert linalg.hnf(H) == H


def test_snf_invariants():
    assert linalg.snf_invariants([[2, 0], [0, 2]]) == [2, 2]
    assert linalg.snf_invariants([[2, 0], [0, 1]]) == [2]
    assert linalg.snf_invariants([[1, 0], [0, 1]]) == []
    # divisibility chain on random matrices
    rng = random.Random(3)
    for _ in range(40):
        rows = [[rng.randint(-9, 9) for _ in range(3)] for _ in range(3)]
        inv = linalg.snf_invariants(rows)
        for a, b in zip(inv, inv[1:]):
            assert b % a == 0


def test_snf_transforms():
    rng = random.Random(4)
    for _ in range(40):
        m = rng.randint(1, 4)
        n = rng.randint(1, 4)
        rows = [[rng.randint(-7, 7) for _ in range(n)] for _ in range(m)]
        diag, U, V = linalg.snf_with_transforms(rows, n)
        prod = linalg.mat_mul(linalg.mat_mul(U, rows), V) if rows else ()
        for i in range(m):
            for j in range(n):
                expected = diag[i] if i == j and i < len(diag) else 0
                assert prod[i][j] == expected
        assert abs(linalg.det(U)) == 1
        assert abs(linalg.det(V)) == 1


def test_saturation():
    # row span of [[2, 0]] saturates to itself; [[2, 4]] saturates to [[1, 2]]
    assert linalg.saturate_rows([[2, 4]], 2) == [[1, 2]]
    sat = linalg.saturate_rows([[2, 0], [0, 2]], 2)
    assert linalg.hnf(sat) == [(1, 0), (0, 1)]


def test_solve_coords():
    basis = [(1, 0, 1), (0, 1, 1)]
    assert linalg.solve_coords(basis, (2, 3, 5)) == (2, 3)
    assert linalg.solve_coords(basis, (0, 0, 1)) is None
