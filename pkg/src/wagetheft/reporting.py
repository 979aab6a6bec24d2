"""Tiny structured pass/fail report shared by the verification surfaces."""

from dataclasses import dataclass


@dataclass(frozen=True)
class CheckLine:
    name: str
    passed: bool
    deviation: float

    def render(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{self.name}: {status} (max deviation {self.deviation:.3e})"


@dataclass(frozen=True)
class CheckReport:
    """An ordered bundle of named checks; passes only if every line does."""

    lines: tuple[CheckLine, ...]

    @property
    def passed(self) -> bool:
        return all(line.passed for line in self.lines)

    def render(self) -> str:
        return "\n".join(line.render() for line in self.lines)
