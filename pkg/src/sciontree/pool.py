"""A small work-stealing task pool built on threads.

Each worker owns a deque: it pushes and pops new tasks at the right end
(depth-first) and, when its own deque runs dry, steals from the left end of
another worker's deque.  ``run`` returns once no task is pending.
"""

from __future__ import annotations

import threading
from collections import deque
from typing import Any, Callable, List


class WorkStealingPool:
    def __init__(self, workers: int):
        if workers < 1:
            raise ValueError("a pool needs at least one worker")
        self.workers = workers
        self.task_counts: List[int] = [0] * workers

    def run(self, root: Any, handler: Callable[[Any, Callable[[Any], None], int], None]) -> None:
        """Process ``root`` and every task spawned from it.

        ``handler(task, spawn, worker_id)`` may call ``spawn(task)`` any number
        of times.  The first exception raised by a handler stops the pool and
        is re-raised here.
        """
        n = self.workers
        self._deques = [deque() for _ in range(n)]
        self._deques[0].append(root)
        self._pending = 1
        self._idle = 0
        self._error: BaseException | None = None
        self._cond = threading.Condition(threading.Lock())
        self.task_counts = [0] * n
        threads = [
            threading.Thread(target=self._work, args=(i, handler), name=f"sciontree-worker-{i}", daemon=True)
            for i in range(n)
        ]
        for th in threads:
            th.start()
        for th in threads:
            th.join()
        if self._error is not None:
            raise self._error

    def _take(self, wid: int):
        try:
            return self._deques[wid].pop()
        except IndexError:
            pass
        n = self.workers
        for step in range(1, n):
            try:
                return self._deques[(wid + step) % n].popleft()
            except IndexError:
                continue
        return None

    def _work(self, wid: int, handler) -> None:
        own = self._deques[wid]
        cond = self._cond

        def spawn(task):
            with cond:
                self._pending += 1
                own.append(task)
                if self._idle:
                    cond.notify()

        while True:
            task = self._take(wid)
            if task is None:
                with cond:
                    while True:
                        if self._pending == 0 or self._error is not None:
                            return
                        if any(self._deques):
                            break
                        self._idle += 1
                        cond.wait()
                        self._idle -= 1
                continue
            try:
                handler(task, spawn, wid)
                self.task_counts[wid] += 1
            except BaseException as exc:  # noqa: BLE001 - re-raised by run()
                with cond:
                    if self._error is None:
                        self._error = exc
                    self._pending -= 1
                    cond.notify_all()
                return
            with cond:
                self._pending -= 1
                if self._pending == 0:
                    cond.notify_all()
