import numpy as np
import pytest

from evogrid import (
    Automorphism,
    GridEvolutionSpace,
    GridPointMap,
    PureRepresentation,
    RepresentationSpace,
    TimeFrame,
    WStarAlgebra,
    named_contraction,
)

FLIP = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128) / np.sqrt(2.0)

# filled by the acceptance tests; echoed after capture ends so the
# one-line-per-criterion verdicts always appear in the terminal output
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def m2():
    return WStarAlgebra((2,))


@pytest.fixture
def m23():
    return WStarAlgebra((2, 3))


@pytest.fixture
def flip(m2):
    return Automorphism.conjugation(m2, [FLIP])


@pytest.fixture
def small_space(m2, flip):
    # two times, grid sizes 2 and 2: identity/flip at time 1,
    # identity/trace-average at time 2; four full points total
    frame = TimeFrame(("1", "2"), (1.0, 1.0))
    grids = (
        (GridPointMap.identity(m2), GridPointMap.from_automorphism(flip)),
        (GridPointMap.identity(m2), named_contraction("trace_average", m2)),
    )
    return GridEvolutionSpace(frame, grids)


@pytest.fixture
def rep4(small_space):
    return PureRepresentation(RepresentationSpace(small_space))


@pytest.fixture
def weighted_space(m2, flip):
    # weights 0.5, 2.0, 0.0 and a null time make measure-zero subsets real
    frame = TimeFrame(("1", "2", "3"), (0.5, 2.0, 0.0))
    grids = (
        (GridPointMap.identity(m2), GridPointMap.from_automorphism(flip)),
        (GridPointMap.identity(m2), named_contraction("trace_average", m2)),
        (GridPointMap.identity(m2), GridPointMap.from_automorphism(flip)),
    )
    return GridEvolutionSpace(frame, grids)


@pytest.fixture
def rep8(weighted_space):
    return PureRepresentation(RepresentationSpace(weighted_space))
