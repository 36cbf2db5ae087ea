"""One result line per acceptance criterion, printed by conftest."""

LINES: dict = {}


def record(number: int, title: str, passed: bool, elapsed: float, limit: float, detail: str = ""):
    status = "PASS" if passed and elapsed < limit else "FAIL"
    line = f"criterion {number} [{status}] {title}: {detail} ({elapsed:.1f}s, limit {limit:.0f}s)"
    LINES[number] = line
    print(line)
    return status == "PASS"
