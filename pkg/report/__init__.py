from .renderer import BENCH_COLUMNS, ReportRenderer

__all__ = ["BENCH_COLUMNS", "ReportRenderer"]
