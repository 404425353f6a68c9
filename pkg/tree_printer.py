import logging
from contextlib import contextmanager
from typing import Optional, Sequence

from colors import Colors, degree_color
from conjugacy import ReductionTrace
from expressions import format_element
from hecke_cocenter import ReductionNode
from polynomials import format_degree


class TreePrinter:
    """Human-readable verb output: sections, items and nested levels, written through logging."""

    def __init__(self):
        self.indent_level = 0
        self.active_sections: list[str] = []
        self.logger = logging.getLogger(__class__.__qualname__)

    def _get_indent(self, level: int = 0) -> str:
        base_level = self.indent_level + level
        if base_level == 0:
            return ""
        return "  " * base_level

    def _format_message(self, icon: str, message: str, color: str = "") -> str:
        colored_icon = f"{color}{icon}{Colors.END}" if color else icon
        return f"{colored_icon} {message}"

    def section(self, title: str, color: str = Colors.BRIGHT_CYAN) -> None:
        indent = self._get_indent()
        self.logger.info(f"{indent}⏺ {color}{title}{Colors.END}")
        self.active_sections.append(title)

    def item(self, icon: str, message: str, color: str = "") -> None:
        indent = self._get_indent()
        self.logger.info(f"{indent}  ⎿  {self._format_message(icon, message, color)}")

    def success(self, message: str) -> None:
        self.item("✓", message, Colors.BRIGHT_GREEN)

    def error(self, message: str) -> None:
        self.item("✗", message, Colors.BRIGHT_RED)

    def info(self, message: str) -> None:
        self.item("•", message, Colors.BRIGHT_BLUE)

    def warning(self, message: str) -> None:
        self.item("⚠", message, Colors.BRIGHT_YELLOW)

    def progress(self, message: str) -> None:
        self.item("→", message, Colors.BRIGHT_CYAN)

    @contextmanager
    def nested(self, title: Optional[str] = None):
        if title:
            self.section(title)

        self.indent_level += 1
        try:
            yield self
        finally:
            self.indent_level -= 1
            if title and self.active_sections:
                self.active_sections.pop()

    def table(self, header: Sequence[str], rows: Sequence[Sequence[str]]) -> None:
        widths = [max(len(str(cell)) for cell in column) for column in zip(header, *rows)]
        self.info("  ".join(str(h).ljust(w) for h, w in zip(header, widths)))
        for row in rows:
            self.info("  ".join(str(cell).ljust(w) for cell, w in zip(row, widths)))

    def reduction_trace(self, trace: ReductionTrace) -> None:
        self.info(f"{format_element(trace.start)}  (length {trace.start.length})")
        for step in trace.steps:
            self.progress(f"{step.conjugator}: {format_element(step.element)}  (length {step.length})")
        self.success(f"minimal: {format_element(trace.terminal)}, {trace.strict_descents} strict descents")

    def reduction_tree(self, node: ReductionNode, weight: str = "") -> None:
        prefix = f"[{weight}] " if weight else ""
        color = degree_color(node.degree)
        self.item("◆" if node.children else "◇",
                  f"{prefix}{format_element(node.element)}  length {node.length}, "
                  f"deg {color}{format_degree(node.degree)}{Colors.END}")
        with self.nested():
            for child_weight, child in node.children:
                self.reduction_tree(child, child_weight)


tree = TreePrinter()
