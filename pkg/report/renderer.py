"""
Jinja2-based rendering of command output.
"""
from __future__ import annotations

from pathlib import Path
from typing import Optional, Sequence

from jinja2 import Environment, FileSystemLoader, select_autoescape

from algebra.field import FieldElement, element_hex
from model.decoding import DecodingPoly, ServerCounts
from model.messages import CostModel, Transcript
from model.mvf import MvFamily, MvfViolation
from model.params import PirParams
from protocol.pir import AuditReport, BenchRow

BENCH_COLUMNS = (
    "trial",
    "tau",
    "up_elements",
    "down_elements",
    "formula_up",
    "formula_down",
    "baseline_down",
    "up_bytes",
    "down_bytes",
    "frame_bytes",
    "matches",
)


def elem_filter(a: FieldElement) -> str:
    """Element as polynomial text followed by its wire hex."""
    return f"{a} [{element_hex(a)}]"


def hex_filter(a: FieldElement) -> str:
    return element_hex(a)


def vector_filter(values: Sequence[int]) -> str:
    return "(" + ", ".join(str(x) for x in values) + ")"


class ReportRenderer:
    """Renders reports for the command-line tools."""

    def __init__(self, template_dir: Optional[Path] = None):
        if template_dir is None:
            template_dir = Path(__file__).parent / "templates"

        self.env = Environment(
            loader=FileSystemLoader(template_dir),
            autoescape=select_autoescape(),
            trim_blocks=True,
            lstrip_blocks=True,
            keep_trailing_newline=True,
        )
        self.env.filters["elem"] = elem_filter
        self.env.filters["hex"] = hex_filter
        self.env.filters["vector"] = vector_filter

    def _render(self, name: str, **context) -> str:
        return self.env.get_template(name).render(**context)

    def render_setup(self, params: PirParams, cost: CostModel, bundle_path: Path) -> str:
        return self._render("setup.txt.j2", params=params, cost=cost, bundle_path=bundle_path)

    def render_query(
        self,
        tau: int,
        value: FieldElement,
        transcript: Transcript,
        cost: CostModel,
        mode: str,
    ) -> str:
        return self._render(
            "query.txt.j2",
            tau=tau,
            value=value,
            transcript=transcript,
            cost=cost,
            mode=mode,
            matches=cost.matches(transcript),
        )

    def render_audit(self, report: AuditReport) -> str:
        return self._render("audit.txt.j2", report=report)

    def render_bench(self, rows: Sequence[BenchRow], cost: CostModel, csv: bool = False) -> str:
        name = "bench.csv.j2" if csv else "bench.txt.j2"
        table = [[getattr(row, column) for column in BENCH_COLUMNS] for row in rows]
        return self._render(
            name,
            table=table,
            cost=cost,
            columns=BENCH_COLUMNS,
            all_match=all(row.matches for row in rows),
        )

    def render_decoder(self, P: Optional[DecodingPoly], m: int, t_max: int, fixture: str = "") -> str:
        return self._render("decoder.txt.j2", P=P, m=m, t_max=t_max, fixture=fixture)

    def render_mvf_check(self, family: MvFamily, violation: Optional[MvfViolation], source: str) -> str:
        return self._render("mvf_check.txt.j2", family=family, violation=violation, source=source)

    def render_server_table(self, rows: Sequence[ServerCounts]) -> str:
        return self._render("server_table.txt.j2", rows=rows)
