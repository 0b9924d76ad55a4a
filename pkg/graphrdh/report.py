"""
Jinja2 rendered text reports for embedding results and sweeps. Templates are given as string or,
if path is set, as template file name below path.
"""
from dataclasses import dataclass
import math
from typing import TYPE_CHECKING, Any, Dict, List, Optional

from jinja2 import Environment, FileSystemLoader

if TYPE_CHECKING:
    from graphrdh.bench import SweepRow
    from graphrdh.codec import EmbedReport

EMBED_REPORT_TEMPLATE = """\
predictor: {{ report.predictor }}
message bits: {{ report.message_bits }}
PSNR: {{ report.psnr | db }}
location map bits: {{ report.lm_sizes | join(" ") }} (total {{ report.lm_sizes | sum }})
{% for layer in report.layers -%}
layer {{ layer.layer_index }}: tau={{ "%.2f" | format(layer.tau) }} \
payload={{ layer.payload_bits }} \
lm_entries={{ layer.lm_entries }} lm_bits={{ layer.lm_bits }} gate_pixels={{ layer.gate_pixels }}
{% endfor -%}
"""

SWEEP_SUMMARY_TEMPLATE = """\
{% for row in rows -%}
{{ row.image }} {{ row.predictor }} {{ row.capacity_bits }}: \
{% if row.ok %}{{ row.psnr_db | db }}{% else %}failed ({{ row.error }}){% endif %}
{% endfor -%}
{% if gaps %}
PSNR gain over rhombus:
{% for key, gap in gaps.items() -%}
{{ key | join(" ") }}: {{ "%+.4f" | format(gap) }} dB
{% endfor -%}
{% endif -%}
"""


def format_db(value: float) -> str:
    if math.isinf(value):
        return "inf"
    return f"{ value:.4f} dB"


@dataclass
class TemplateReport:
    """Base class of Jinja2 text reports. The filter db formats a PSNR value."""

    template: str
    path: Optional[str] = None
    autoescape: bool = False

    def __post_init__(self):
        loader = None if self.path is None else FileSystemLoader(self.path)
        env = Environment(autoescape=self.autoescape, loader=loader)
        env.filters["db"] = format_db
        if self.path is None:
            self.j2template = env.from_string(self.template)
        else:
            self.j2template = env.get_template(self.template)

    def render_context(self, **context: Any) -> str:
        return self.j2template.render(**context)


@dataclass
class EmbedReportTemplate(TemplateReport):
    """Renders an EmbedReport, available as variable report."""

    template: str = EMBED_REPORT_TEMPLATE

    def render(self, report: "EmbedReport") -> str:
        return self.render_context(report=report)


@dataclass
class SweepSummaryTemplate(TemplateReport):
    """
    Renders sweep rows (variable rows) and the PSNR gaps of the graph predictors over the rhombus
    baseline (variable gaps, keyed by image, capacity and predictor).
    """

    template: str = SWEEP_SUMMARY_TEMPLATE

    def render(self, rows: List["SweepRow"], gaps: Dict[Any, float]) -> str:
        return self.render_context(rows=rows, gaps=gaps)
