"""Collects one result line per acceptance criterion."""

_RESULTS: dict[int, str] = {}


def report(number: int, title: str, ok: bool, detail: str, seconds: float) -> str:
    line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail} [{seconds:.2f}s]"
    _RESULTS[number] = line
    print(line, flush=True)
    return line


def lines() -> list[str]:
    return [_RESULTS[k] for k in sorted(_RESULTS)]
