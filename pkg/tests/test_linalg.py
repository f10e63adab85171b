from fractions import Fraction

from hypothesis import given, settings, strategies as st

from ainfty.linalg import (
    GradedMap,
    GradedVectorSpace,
    SubspaceSlice,
    choose_complement_slice,
    full_slice,
    image,
    kernel,
    reduce_vector,
    rref,
    solve_linear,
    solve_preimage,
    vec_add,
    vec_clean,
    vec_scale,
    vec_sparse,
)

fracs = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 4))


@st.composite
def matrices(draw, max_rows=4, max_cols=4):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    return [[draw(fracs) for _ in range(c)] for _ in range(r)]


@given(matrices())
def test_rref_is_idempotent(rows):
    red, pivots = rref([list(r) for r in rows])
    again, pivots2 = rref([list(r) for r in red])
    assert red == again and pivots == pivots2
    for k, p in enumerate(pivots):
        assert red[k][p] == 1
        assert all(red[j][p] == 0 for j in range(len(red)) if j != k)


@given(matrices())
def test_rref_preserves_row_span(rows):
    red, pivots = rref([list(r) for r in rows])
    for r in rows:
        assert not any(reduce_vector(red, pivots, list(r)))


def _map_from_columns(cols, source_dim, target_dim):
    space = GradedVectorSpace(
        1, {0: [f"s{i}" for i in range(source_dim)], 1: [f"t{i}" for i in range(target_dim)]}
    )
    columns = {0: [vec_sparse(c) for c in cols]}
    return GradedMap(space, space, 1, columns)


@given(matrices())
def test_rank_nullity(cols):
    n = len(cols)
    m = len(cols[0])
    f = _map_from_columns(cols, n, m)
    assert kernel(f, 0).dim + image(f, 0).dim == n


@given(matrices())
def test_kernel_vectors_map_to_zero(cols):
    f = _map_from_columns(cols, len(cols), len(cols[0]))
    for v in kernel(f, 0).basis_vectors():
        _, fv = f.apply(0, v)
        assert not fv


@given(matrices(), st.lists(st.integers(-3, 3), min_size=1, max_size=4))
def test_solve_linear_solutions_check_out(cols, coeffs):
    # build a guaranteed-solvable right-hand side, then verify the solution
    m = len(cols[0])
    b = [Fraction(0)] * m
    for c, col in zip(coeffs, cols):
        for i in range(m):
            b[i] += c * col[i]
    dense_cols = [list(c) for c in cols]
    x = solve_linear(dense_cols, b)
    assert x is not None
    back = [Fraction(0)] * m
    for xi, col in zip(x, cols):
        for i in range(m):
            back[i] += xi * col[i]
    assert back == b


@given(matrices())
def test_complement_splits_ambient(cols):
    n = len(cols)
    sub = SubspaceSlice.from_vectors([vec_sparse(c) for c in cols], len(cols[0]))
    inside = full_slice(len(cols[0]))
    comp = choose_complement_slice(sub, inside)
    assert sub.dim + comp.dim == inside.dim
    assert sub.sum(comp) == inside


@given(matrices())
def test_preimage_solves(cols):
    f = _map_from_columns(cols, len(cols), len(cols[0]))
    im = image(f, 0)
    for b in im.basis_vectors():
        x = solve_preimage(f, 1, b)
        assert x is not None
        _, fx = f.apply(0, x)
        assert vec_clean(vec_add(fx, vec_scale(Fraction(-1), b))) == {}


def test_subspace_equality_is_basis_independent():
    a = SubspaceSlice.from_vectors(
        [{0: Fraction(1), 1: Fraction(1)}, {1: Fraction(1)}], 3
    )
    b = SubspaceSlice.from_vectors(
        [{0: Fraction(2)}, {0: Fraction(1), 1: Fraction(-5)}], 3
    )
    assert a == b
    assert a.contains({0: Fraction(7), 1: Fraction(-2)})
    assert not a.contains({2: Fraction(1)})
