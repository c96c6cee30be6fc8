"""
Scan Diagnostics

Tallies of what an estimator scan evaluated, skipped and how long it took.
Updated by the orchestrating thread only, after worker results are collected.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Any, Dict

logger = logging.getLogger(__name__)


@dataclass
class ScanDiagnostics:
    """Counters for one estimator run."""

    estimator: str
    triples: int = 0
    skipped_denominators: int = 0
    skipped_numerators: int = 0
    mass_queries: int = 0
    notes: Dict[str, Any] = field(default_factory=dict)
    started_at: float = field(default_factory=time.perf_counter)
    finished_at: float = 0.0

    def add_triple(self) -> None:
        self.triples += 1

    def skip_denominator(self) -> None:
        self.skipped_denominators += 1

    def skip_numerator(self) -> None:
        self.skipped_numerators += 1

    def add_queries(self, count: int) -> None:
        self.mass_queries += count

    def finish(self) -> "ScanDiagnostics":
        self.finished_at = time.perf_counter()
        if self.skipped_denominators:
            logger.debug(
                f"{self.estimator}: skipped {self.skipped_denominators} of {self.triples} triples with zero denominator"
            )
        return self

    @property
    def elapsed_ms(self) -> float:
        end = self.finished_at or time.perf_counter()
        return (end - self.started_at) * 1000.0

    @property
    def evaluated(self) -> int:
        return self.triples - self.skipped_denominators - self.skipped_numerators

    def to_dict(self) -> Dict[str, Any]:
        """Counters as a plain dict (timings excluded)."""
        return {
            "estimator": self.estimator,
            "triples": self.triples,
            "skipped_denominators": self.skipped_denominators,
            "skipped_numerators": self.skipped_numerators,
            "mass_queries": self.mass_queries,
            **self.notes,
        }
