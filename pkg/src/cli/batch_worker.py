import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Generic, List, Optional, Sequence, TypeVar

from pydantic import BaseModel

from src.config.settings import DEFAULT_WORKERS

logger = logging.getLogger(__name__)

Item = TypeVar('Item')


@dataclass
class BatchResult:
    label: str
    records: List[BaseModel] = field(default_factory=list)
    error: Optional[Exception] = None


class BatchWorker(Generic[Item]):
    """
    Run one task per batch item and hand back results in input order.

    Records are buffered per item, so output never depends on which
    worker finished first.

    Args:
        task: Maps an item to its records
        label_of: Name of an item for progress messages
        workers: Number of threads
    """

    def __init__(self,
                 task: Callable[[Item], List[BaseModel]],
                 label_of: Callable[[Item], str] = str,
                 workers: int = DEFAULT_WORKERS):
        self.task = task
        self.label_of = label_of
        self.workers = max(1, workers)

    def _run_one(self, item: Item) -> BatchResult:
        label = self.label_of(item)
        logger.info(f"Running {label}...")
        try:
            records = self.task(item)
        except Exception as e:
            logger.error(f"{label} failed: {e}")
            return BatchResult(label, error=e)
        logger.info(f"{label} done ({len(records)} record(s))")
        return BatchResult(label, records)

    def run(self, items: Sequence[Item]) -> List[BatchResult]:
        if self.workers == 1 or len(items) <= 1:
            return [self._run_one(item) for item in items]
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            # map keeps input order
            return list(pool.map(self._run_one, items))
