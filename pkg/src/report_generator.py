import csv
import datetime
import logging
from datetime import timezone
from pathlib import Path
from typing import Dict, List, Optional

from reportlab.lib import colors
from reportlab.lib.pagesizes import A4, letter
from reportlab.lib.styles import ParagraphStyle, getSampleStyleSheet
from reportlab.lib.units import inch
from reportlab.platypus import Paragraph, SimpleDocTemplate, Spacer, Table, TableStyle

from src.config import DEFAULTS
from src.verifier import ERROR, FAIL, PASS, Report, reports_to_json, summarize

logger = logging.getLogger(__name__)

PAGE_SIZES = {"letter": letter, "a4": A4}
COLUMNS = ["Identity", "Status", "Mode", "Order / samples", "First mismatch", "Delta (numeric)", "ms"]
STATUS_COLORS = {PASS: colors.lightgreen, FAIL: colors.pink, ERROR: colors.lightyellow}


def _report_row(report: Report) -> List[str]:
    d = report.to_dict()
    if report.mode == "exact":
        where = d.get("order") or ""
    else:
        where = f"{len(d.get('samples') or [])} samples"
    mismatch = d["first_mismatch"]
    return [
        report.id,
        report.status if report.expected == "pass" else f"{report.status} ({report.expected})",
        report.mode,
        where,
        f"q^{mismatch['exponent']}" if mismatch else "",
        mismatch["delta_numeric"] if mismatch else "",
        str(d["wall_ms"]),
    ]


def _output_path(path: Optional[str], config: Dict, suffix: str) -> Path:
    if path:
        out = Path(path)
    else:
        stamp = datetime.datetime.now(timezone.utc).strftime("%Y%m%d_%H%M%S")
        out = Path(config["reports"]["directory"]) / f"verification_{stamp}.{suffix}"
    out.parent.mkdir(parents=True, exist_ok=True)
    return out


def write_json_report(reports: List[Report], path: Optional[str] = None, config: Optional[Dict] = None) -> Path:
    config = config or DEFAULTS
    output_path = _output_path(path, config, "json")
    output_path.write_text(reports_to_json(reports) + "\n", encoding="utf-8")
    print(f"Created JSON report: {output_path}")
    return output_path


def compile_reports_to_pdf(reports: List[Report], path: Optional[str] = None, config: Optional[Dict] = None,
                           title: str = "q-series identity verification") -> Path:
    """
    PDF summary:
      - title block with profile and timestamp
      - totals line
      - one table row per identity, status coloured
    """
    config = config or DEFAULTS
    pdf_cfg = config["reports"]["pdf"]
    margins = pdf_cfg["margins"]
    fonts = pdf_cfg["fonts"]
    output_path = _output_path(path, config, "pdf")

    styles = getSampleStyleSheet()
    header_style = ParagraphStyle("HeaderStyle", parent=styles["Normal"], fontName=fonts["header"],
                                  fontSize=9, textColor=colors.whitesmoke, alignment=1)
    cell_style = ParagraphStyle("CellStyle", parent=styles["Normal"], fontName=fonts["body"],
                                fontSize=8, leading=10, wordWrap="CJK")
    title_style = ParagraphStyle("TitleStyle", parent=styles["Title"], fontName=fonts["title"])

    doc = SimpleDocTemplate(str(output_path), pagesize=PAGE_SIZES.get(str(pdf_cfg["page_size"]).lower(), letter),
                            rightMargin=margins["right"], leftMargin=margins["left"],
                            topMargin=margins["top"], bottomMargin=margins["bottom"])
    elements = [Paragraph(title, title_style)]

    generated = datetime.datetime.now(timezone.utc).strftime("%Y-%m-%d %H:%M UTC")
    profile = config.get("verify_all", {}).get("profile", "full")
    elements.append(Paragraph(f"<b>Profile:</b> {profile}", styles["Normal"]))
    elements.append(Paragraph(f"<b>Generated:</b> {generated}", styles["Normal"]))
    counts = summarize(reports)
    elements.append(Paragraph(
        f"<b>Totals:</b> {counts['total']} identities, {counts[PASS]} passed, {counts[FAIL]} failed, "
        f"{counts[ERROR]} errors ({counts['expected_failures']} documented readings)", styles["Normal"]))
    elements.append(Spacer(1, 14))

    rows = [[Paragraph(c, header_style) for c in COLUMNS]]
    for report in reports:
        rows.append([Paragraph(cell, cell_style) for cell in _report_row(report)])

    table = Table(rows, colWidths=[1.9 * inch, 0.8 * inch, 0.6 * inch, 0.8 * inch, 0.8 * inch, 1.3 * inch, 0.5 * inch],
                  repeatRows=1)
    style = TableStyle([
        ("BACKGROUND", (0, 0), (-1, 0), colors.grey),
        ("TEXTCOLOR", (0, 0), (-1, 0), colors.whitesmoke),
        ("ALIGN", (0, 0), (-1, 0), "CENTER"),
        ("VALIGN", (0, 0), (-1, -1), "TOP"),
        ("GRID", (0, 0), (-1, -1), 1, colors.black),
        ("LEFTPADDING", (0, 0), (-1, -1), 4),
        ("RIGHTPADDING", (0, 0), (-1, -1), 4),
        ("TOPPADDING", (0, 0), (-1, -1), 2),
        ("BOTTOMPADDING", (0, 0), (-1, -1), 2),
    ])
    for i, report in enumerate(reports, start=1):
        style.add("BACKGROUND", (1, i), (1, i), STATUS_COLORS[report.status])
    table.setStyle(style)
    elements.append(table)

    doc.build(elements)
    logger.info("wrote %d reports to %s", len(reports), output_path)
    print(f"Created PDF report: {output_path}")
    return output_path


def compile_reports_to_csv(reports: List[Report], path: Optional[str] = None, config: Optional[Dict] = None) -> Path:
    config = config or DEFAULTS
    csv_cfg = config["reports"]["csv"]
    output_path = _output_path(path, config, "csv")
    with open(output_path, "w", newline="", encoding=csv_cfg["encoding"]) as fh:
        w = csv.writer(fh, delimiter=csv_cfg["delimiter"])
        w.writerow(COLUMNS)
        for report in reports:
            w.writerow(_report_row(report))
    print(f"Created CSV report: {output_path}")
    return output_path
