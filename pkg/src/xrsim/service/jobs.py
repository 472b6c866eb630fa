"""In-memory job registry for long-running sweeps."""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field


@dataclass
class Job:
    job_id: str
    state: str = "queued"  # queued | running | done | failed
    done: int = 0
    total: int = 0
    error: str | None = None
    result: dict | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)


class JobRegistry:
    def __init__(self):
        self._jobs: dict[str, Job] = {}
        self._lock = threading.Lock()

    def create(self) -> Job:
        job = Job(job_id=uuid.uuid4().hex)
        with self._lock:
            self._jobs[job.job_id] = job
        return job

    def get(self, job_id: str) -> Job | None:
        with self._lock:
            return self._jobs.get(job_id)

    def start(self, job: Job, target, *args) -> None:
        def runner():
            with job.lock:
                job.state = "running"
            try:
                result = target(*args)
            except Exception as e:
                with job.lock:
                    job.state = "failed"
                    job.error = f"{type(e).__name__}: {e}"
                return
            with job.lock:
                job.state = "done"
                job.result = result

        threading.Thread(target=runner, daemon=True).start()

    def progress_cb(self, job: Job):
        def cb(done: int, total: int):
            with job.lock:
                job.done = done
                job.total = total

        return cb


registry = JobRegistry()
