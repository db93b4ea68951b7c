import heapq
import logging
import multiprocessing
import sys
from concurrent.futures import Executor, ProcessPoolExecutor, ThreadPoolExecutor
from typing import Callable, Iterable, List, Sequence, TypeVar

from tqdm import tqdm

logger = logging.getLogger(__name__)

Job = TypeVar('Job')
Result = TypeVar('Result')

WORKER_CONTEXT = multiprocessing.get_context('spawn')


def progress_enabled() -> bool:
    """Progress bars go to stderr, and only when a person is watching it."""
    return sys.stderr.isatty() and logging.getLogger().getEffectiveLevel() < logging.WARNING


def run_chunks(
    func: Callable[[Job], Result],
    jobs: Sequence[Job],
    threads: int = 1,
    desc: str = 'chunks',
    use_processes: bool = True,
) -> List[Result]:
    """Run func over independent jobs; results come back in job order.

    With threads == 1 everything runs in the calling process, otherwise in a
    pool. Job order fixes result order, so the output does not depend on the
    worker count.
    """
    jobs = list(jobs)
    bar = tqdm(total=len(jobs), desc=desc, file=sys.stderr, disable=not progress_enabled())
    results: List[Result] = []
    try:
        if threads <= 1 or len(jobs) <= 1:
            for job in jobs:
                results.append(func(job))
                bar.update(1)
            return results

        pool: Executor
        if use_processes:
            # fork() is unsafe once numba's OpenMP runtime is loaded
            pool = ProcessPoolExecutor(max_workers=threads, mp_context=WORKER_CONTEXT)
        else:
            pool = ThreadPoolExecutor(max_workers=threads)
        logger.debug(f"Dispatching {len(jobs)} {desc} to {threads} workers")
        with pool:
            for result in pool.map(func, jobs):
                results.append(result)
                bar.update(1)
        return results
    finally:
        bar.close()


def merge_sorted(parts: Iterable[Iterable]) -> list:
    """Deterministic k-way merge of individually sorted chunk outputs."""
    return list(heapq.merge(*parts))
