"""Shared hypothesis strategies."""

import numpy as np
from hypothesis import assume
from hypothesis import strategies as st

finite = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False, allow_infinity=False)
complex_amp = st.builds(complex, finite, finite)


@st.composite
def states(draw, dim=2):
    amps = np.array(draw(st.lists(complex_amp, min_size=dim, max_size=dim)))
    assume(np.linalg.norm(amps) > 1e-3)
    return amps


@st.composite
def nonzero_scalars(draw):
    lam = draw(complex_amp)
    assume(abs(lam) > 1e-3)
    return lam


plane = st.builds(complex, finite, finite)
