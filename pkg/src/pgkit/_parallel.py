"""Fan-out helpers.  Work is always cut into the same chunks (one per first
index), so merged results cannot depend on the number of workers."""
from __future__ import annotations

import os
from concurrent.futures import Executor, ProcessPoolExecutor


def resolve_jobs(jobs: int | None = None) -> int:
    if jobs is None:
        env = os.environ.get("PGKIT_JOBS")
        jobs = int(env) if env else (os.cpu_count() or 1)
    if jobs < 1:
        raise ValueError(f"jobs must be >= 1, got {jobs}")
    return jobs


def make_executor(jobs: int) -> Executor | None:
    return ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None


def run(executor: Executor | None, fn, arglists):
    """Apply ``fn(*args)`` to each argument tuple, in order."""
    if executor is None:
        return [fn(*args) for args in arglists]
    futures = [executor.submit(fn, *args) for args in arglists]
    return [f.result() for f in futures]
