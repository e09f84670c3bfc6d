from hypothesis import strategies as st


def letters(params, allow_x=True):
    """Hypothesis strategy for one algebra letter of Y(d, m, n)."""
    n, d = params.n, params.d
    opts = [st.tuples(st.just("t"), st.integers(1, n), st.integers(0, d - 1))]
    if n > 1:
        opts.append(st.tuples(st.just("g"), st.integers(1, n - 1), st.sampled_from((1, -1))))
    if allow_x:
        opts.append(st.tuples(st.just("X"), st.just(1), st.sampled_from((1, -1))))
    return st.one_of(opts)


def words(params, max_size=6, allow_x=True):
    return st.lists(letters(params, allow_x), max_size=max_size)
