import sys
from pathlib import Path

from hypothesis import settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from lacunae.words import Word, reduce  # noqa: E402

settings.register_profile("default", max_examples=80, deadline=None)
settings.load_profile("default")


def syllables(rank, max_len=6, max_exp=3):
    exps = st.integers(-max_exp, max_exp).filter(bool)
    return st.lists(st.tuples(st.integers(1, rank), exps), max_size=max_len)


def words(rank=2, max_len=6, max_exp=3):
    return syllables(rank, max_len, max_exp).map(lambda s: reduce(rank, s))


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: (int(s.split()[1].rstrip("ab:")), s)):
            terminalreporter.write_line(line)
