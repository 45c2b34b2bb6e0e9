from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterator


@dataclass(frozen=True)
class LawResult:
    name: str
    passed: bool
    counterexample: Any = None

    def __str__(self):
        if self.passed:
            return f"PASS\t{self.name}"
        return f"FAIL\t{self.name}\t{self.counterexample!r}"


@dataclass
class LawReport:
    """Ordered collection of law verdicts.

    A law appears once; the first failing case found is kept as its
    counterexample.
    """

    results: list[LawResult] = field(default_factory=list)

    def add(self, name: str, passed: bool, counterexample: Any = None) -> None:
        self.results.append(LawResult(name, passed, None if passed else counterexample))

    def extend(self, other: "LawReport", prefix: str = "") -> None:
        for r in other.results:
            self.results.append(LawResult(prefix + r.name, r.passed, r.counterexample))

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    def __getitem__(self, name: str) -> LawResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(r.name == name for r in self.results)

    def __iter__(self) -> Iterator[LawResult]:
        return iter(self.results)

    def __len__(self) -> int:
        return len(self.results)

    def failures(self) -> list[LawResult]:
        return [r for r in self.results if not r.passed]

    def render(self) -> str:
        return "\n".join(str(r) for r in self.results)


class _Law:
    """Accumulates cases for a single law, remembering the first failure."""

    def __init__(self, name):
        self.name = name
        self.passed = True
        self.counterexample = None

    def check(self, cond, case):
        if not cond and self.passed:
            self.passed = False
            self.counterexample = case
        return cond


def law(name: str) -> _Law:
    return _Law(name)


def collect(*laws: _Law) -> LawReport:
    report = LawReport()
    for lw in laws:
        report.add(lw.name, lw.passed, lw.counterexample)
    return report
