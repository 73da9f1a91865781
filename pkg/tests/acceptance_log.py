"""Collects one pass/fail line per acceptance criterion."""

LINES = []


def record(number: int, ok: bool, detail: str):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {detail}"
    LINES.append((number, line))
    print(line)
    return ok
