from fractions import Fraction

from hypothesis import strategies as st


def fraction_text(value):
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


# (answer text, exact value) pairs built side by side
_leaves = st.integers(min_value=0, max_value=50).map(lambda n: (str(n), Fraction(n)))


def _extend(children):
    return st.one_of(
        st.tuples(children, children).map(lambda p: (f"({p[0][0]}) + ({p[1][0]})", p[0][1] + p[1][1])),
        st.tuples(children, children).map(lambda p: (f"({p[0][0]}) - ({p[1][0]})", p[0][1] - p[1][1])),
        st.tuples(children, children).map(lambda p: (f"({p[0][0]}) \\cdot ({p[1][0]})", p[0][1] * p[1][1])),
        st.tuples(children, children)
        .filter(lambda p: p[1][1] != 0)
        .map(lambda p: (f"\\frac{{{p[0][0]}}}{{{p[1][0]}}}", p[0][1] / p[1][1])),
        children.map(lambda c: (f"-({c[0]})", -c[1])),
        st.tuples(children, st.integers(min_value=0, max_value=3)).map(
            lambda p: (f"({p[0][0]})^{{{p[1]}}}", p[0][1] ** p[1])
        ),
    )


rational_expressions = st.recursive(_leaves, _extend, max_leaves=8)


# Answer texts mixing integers with pi, e and surds. No quotients, so every
# expression evaluates without a sign check on a denominator.
_mixed_leaves = st.one_of(
    st.integers(min_value=0, max_value=50).map(str),
    st.sampled_from(['\\pi', 'e', '\\sqrt{2}', '\\sqrt{3}', '\\sqrt{5}', '\\sqrt{7}']),
)


def _extend_mixed(children):
    return st.one_of(
        st.tuples(children, children).map(lambda p: f"({p[0]}) + ({p[1]})"),
        st.tuples(children, children).map(lambda p: f"({p[0]}) - ({p[1]})"),
        st.tuples(children, children).map(lambda p: f"({p[0]}) \\cdot ({p[1]})"),
        children.map(lambda c: f"-({c})"),
        st.tuples(children, st.integers(min_value=0, max_value=3)).map(lambda p: f"({p[0]})^{{{p[1]}}}"),
    )


mixed_expressions = st.recursive(_mixed_leaves, _extend_mixed, max_leaves=8)
