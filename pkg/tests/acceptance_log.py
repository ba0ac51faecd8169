"""Collects one line per acceptance criterion for the terminal summary."""
import time
from contextlib import contextmanager

LINES: list[str] = []


@contextmanager
def criterion(num: int, name: str, budget_s: float):
    """Times the block; a criterion passes only if its checks hold within budget."""
    t0 = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        dt = time.perf_counter() - t0
        late = dt > budget_s
        status = "PASS" if ok and not late else "FAIL"
        note = f" (budget {budget_s:g}s exceeded)" if late else ""
        LINES.append(f"[{status}] criterion {num:2d}: {name}  {dt:.2f}s{note}")
        print(LINES[-1])
    assert not late, f"criterion {num} took {dt:.1f}s, budget {budget_s}s"
