from fractions import Fraction

from hypothesis import strategies as st

from nilrad.fermat import FermatReal
from nilrad.weil import WeilAlgebra

# dyadic values with few bits: sums and products of these stay exact in binary64
dyadics = st.integers(-16, 16).map(lambda n: n / 4)
nonzero_dyadics = dyadics.filter(lambda x: x != 0)
exponents = st.integers(1, 6).flatmap(
    lambda den: st.integers(1, den).map(lambda num: Fraction(num, den)))


@st.composite
def fermat_reals(draw, std=dyadics, max_terms=4):
    terms = draw(st.dictionaries(exponents, nonzero_dyadics, max_size=max_terms))
    return FermatReal.from_terms(draw(std), terms)


@st.composite
def infinitesimals(draw, max_terms=4, min_terms=1):
    terms = draw(st.dictionaries(exponents, nonzero_dyadics, min_size=min_terms, max_size=max_terms))
    return FermatReal.from_terms(0, terms)


@st.composite
def exact_fermat_reals(draw):
    """Rational coefficients, so every identity holds with no rounding at all."""
    rationals = st.builds(Fraction, st.integers(-60, 60), st.integers(1, 12))
    nonzero = st.builds(Fraction, st.integers(1, 60), st.integers(1, 12)).flatmap(
        lambda f: st.sampled_from([f, -f]))
    terms = draw(st.dictionaries(exponents, nonzero, max_size=4))
    return FermatReal.from_terms(draw(rationals), terms)


@st.composite
def algebras(draw, max_n=3, max_k=4):
    n = draw(st.integers(1, max_n))
    ks = [draw(st.integers(1, max_k)) for _ in range(n)]
    alphas = [tuple(k if i == j else 0 for i in range(n)) for j, k in enumerate(ks)]
    extra = draw(st.lists(st.tuples(*(st.integers(0, k) for k in ks)), max_size=3))
    return WeilAlgebra(tuple(alphas + extra))


@st.composite
def weil_elements(draw, algebra):
    basis = algebra.basis()
    coeffs = draw(st.dictionaries(st.sampled_from(basis), nonzero_dyadics, max_size=len(basis)))
    return algebra.element(draw(dyadics), coeffs)
