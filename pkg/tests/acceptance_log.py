"""Collects one PASS/FAIL line per acceptance criterion for the terminal summary."""

LINES = []


def record(label: str, ok: bool, detail: str = "", seconds: float | None = None) -> str:
    line = "%s criterion %s" % ("PASS" if ok else "FAIL", label)
    if detail:
        line += ": " + detail
    if seconds is not None:
        line += " [%.1fs]" % seconds
    LINES.append(line)
    print(line)
    return line
