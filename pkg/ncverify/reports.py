"""Writing check reports out as JSON and as a text table."""
import json
import logging
from pathlib import Path
from typing import List, Optional, Union

import pandas as pd

from .checks import CheckReport
from .config import VERSION
from .hopf import elect_convention


def reports_to_dict(reports: List[CheckReport], convention: Optional[str] = None) -> dict:
    """Top level {version, convention_elected, checks}, with fields always in the same order."""
    if convention is None:
        convention = elect_convention().winner
    return {
        "version": VERSION,
        "convention_elected": convention,
        "checks": [report.as_dict() for report in reports],
    }


def write_json(reports: List[CheckReport], path: Union[Path, str], convention: Optional[str] = None):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as file:
        json.dump(reports_to_dict(reports, convention), file, indent=2, ensure_ascii=False)
        file.write("\n")
    logging.info(f"wrote {len(reports)} check reports to {path}")


def reports_to_dataframe(reports: List[CheckReport]) -> pd.DataFrame:
    return pd.DataFrame({
        "id": [report.id for report in reports],
        "status": [report.status for report in reports],
        "time_ms": [round(report.wall_time_ms) for report in reports],
        "claim": [report.claim for report in reports],
    })


def summary_text(reports: List[CheckReport]) -> str:
    """A table of every check, then the details of anything that failed or is only reported."""
    if not reports:
        return "no checks were run"
    table = reports_to_dataframe(reports)
    counts = table["status"].value_counts()
    lines = [table.to_string(index=False), ""]
    lines.append(", ".join(f"{counts.get(status, 0)} {status}" for status in ("pass", "fail", "report")))

    for report in reports:
        if report.status != "pass":
            lines.append("")
            lines.append(f"{report.id} [{report.status}]: {report.claim}")
            lines.extend(f"  {detail}" for detail in report.details)
    return "\n".join(lines)
