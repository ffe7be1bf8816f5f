import csv
import io
import json
from typing import Dict, List

from config import Config
from utils import get_logger

# list of row dicts rendered as the table of each command
TABLE_KEYS = {
    "eval": None,
    "table": "rows",
    "gauss": "d",
    "transform": "invariance",
    "analyze": "rho_samples",
    "presets": "presets",
    "verify": "checks",
}


class ReportWriter:
    """Renders command results (plain dicts of strings) as text, JSON, CSV or markdown"""

    def __init__(self, fmt: str = "text"):
        if fmt not in Config.OUTPUT_FORMATS:
            raise ValueError(f"unknown format {fmt!r}; expected one of {Config.OUTPUT_FORMATS}")
        self.fmt = fmt
        self.logger = get_logger(__name__)

    def render(self, result: Dict) -> str:
        if self.fmt == "json":
            return json.dumps(result, ensure_ascii=False, indent=2) + "\n"
        if self.fmt == "csv":
            return self._render_csv(self._rows(result))
        if self.fmt == "markdown":
            return self._render_markdown(result)
        return getattr(self, f"_text_{result['command']}")(result)

    def save(self, content: str, output_path: str):
        """Mirror the rendered report into a file"""
        try:
            with open(output_path, "w", encoding="utf-8", newline="") as f:
                f.write(content)
            self.logger.info(f"Saved {self.fmt} report to: {output_path}")
        except OSError as e:
            self.logger.error(f"Error saving report to {output_path}: {e}")
            raise

    # tabular helpers

    def _rows(self, result: Dict) -> List[Dict]:
        key = TABLE_KEYS.get(result["command"])
        if key is None:
            return [{k: v for k, v in result.items() if not isinstance(v, (list, dict))}]
        return result.get(key, [])

    def _render_csv(self, rows: List[Dict]) -> str:
        buffer = io.StringIO()
        if rows:
            writer = csv.DictWriter(buffer, fieldnames=list(rows[0]), lineterminator="\r\n")
            writer.writeheader()
            writer.writerows(rows)
        return buffer.getvalue()

    def _markdown_table(self, rows: List[Dict]) -> List[str]:
        if not rows:
            return ["*(no rows)*"]
        columns = list(rows[0])
        lines = ["| " + " | ".join(columns) + " |",
                 "|" + "|".join("---" for _ in columns) + "|"]
        for row in rows:
            lines.append("| " + " | ".join(self._cell(row.get(c)) for c in columns) + " |")
        return lines

    def _render_markdown(self, result: Dict) -> str:
        parts = [f"# polycf {result['command']}", ""]
        for key, value in result.items():
            if key == "command" or isinstance(value, (list, dict)):
                continue
            parts.append(f"- **{key}:** {self._cell(value)}")
        for key, value in result.items():
            if isinstance(value, list) and value and isinstance(value[0], dict):
                parts.extend(["", f"## {key}", ""])
                parts.extend(self._markdown_table(value))
            elif isinstance(value, list):
                parts.extend(["", f"## {key}", ""])
                parts.extend(f"- {self._cell(item)}" for item in value)
            elif isinstance(value, dict):
                parts.extend(["", f"## {key}", ""])
                parts.extend(f"- **{k}:** {self._cell(v)}" for k, v in value.items())
        return "\n".join(parts) + "\n"

    @staticmethod
    def _cell(value) -> str:
        if value is None:
            return "undef"
        if isinstance(value, bool):
            return "yes" if value else "no"
        if isinstance(value, list):
            return ", ".join(ReportWriter._cell(v) for v in value)
        return str(value)

    def _aligned(self, rows: List[Dict], columns: List[str]) -> List[str]:
        cells = [[self._cell(row.get(c)) for c in columns] for row in rows]
        widths = [max([len(c)] + [len(r[i]) for r in cells]) for i, c in enumerate(columns)]
        lines = ["  ".join(c.rjust(w) for c, w in zip(columns, widths)).rstrip()]
        lines.append("  ".join("-" * w for w in widths))
        for r in cells:
            lines.append("  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip())
        return lines

    # text renderers, one per command

    def _text_eval(self, result: Dict) -> str:
        return f"{result['value']}\ndepth: {result['depth']}\n"

    def _text_table(self, result: Dict) -> str:
        parts = [f"{result['label']} against {result['reference']}"]
        if result["rows"]:
            parts.extend(self._aligned(result["rows"], list(result["rows"][0])))
        for flag in result.get("flags", []):
            parts.append(f"FLAG: {flag}")
        return "\n".join(parts) + "\n"

    def _text_gauss(self, result: Dict) -> str:
        parts = [f"Gauss fraction {result['parameters']} ({result['convention']} convention)"]
        parts.extend(f"  d_{row['n']} = {row['d']}" for row in result["d"])
        parts.append(f"spec: {result['spec']}")
        parts.append(f"truncated at depth {result['depth']}: {result['truncated_value']}")
        if result["stabilized"]:
            parts.append(f"value: {result['value']} (stabilized at depth {result['stabilization_depth']})")
        else:
            parts.append(f"no stabilization to {result['digits']} digits within depth {result['depth']}")
        for flag in result.get("flags", []):
            parts.append(f"FLAG: {flag}")
        return "\n".join(parts) + "\n"

    def _text_transform(self, result: Dict) -> str:
        parts = [f"source:      {result['source']}",
                 f"scaling:     {result['scaling']}",
                 f"transformed: {result['transformed']}"]
        for row in result["head"]:
            parts.append(f"  a~_{row['n']} = {row['a']}    b~_{row['n']} = {row['b']}")
        for row in result["invariance"]:
            verdict = "EQUAL" if row["values_equal"] else "DIFFERENT"
            pairs = "pairs equal" if row["pairs_equal"] else "pairs differ"
            parts.append(f"  n = {row['n']}: {verdict} ({pairs})")
        parts.append("all convergent values equal" if result["all_equal"]
                     else "convergent values differ")
        return "\n".join(parts) + "\n"

    def _text_analyze(self, result: Dict) -> str:
        parts = [
            f"label:          {result['label']}",
            f"rho(n):         {self._cell(result['rho_closed_form'])}",
            f"L:              {self._cell(result['L'])}",
            f"classification: {result['classification']}",
            f"sigma:          {self._cell(result['sigma'])}",
            f"char. ratio:    {self._cell(result['characteristic_ratio'])}",
            f"digits per 10:  {self._cell(result['digits_per_10'])}",
        ]
        expansion = result.get("rho_expansion")
        if expansion:
            parts.append(f"rho expansion:  n^{expansion['top_degree']}: "
                         + ", ".join(expansion["coefficients"]))
        expansion = result.get("numerator_expansion")
        if expansion:
            parts.append(f"a(n) expansion: n^{expansion['top_degree']}: "
                         + ", ".join(expansion["coefficients"]))
        empirical = result.get("empirical")
        if empirical and empirical["n"]:
            parts.append(f"fitted digits per 10: {self._cell(empirical['fitted_digits_per_10'])}")
            rows = [{"n": n, "error": e, "ratio": r}
                    for n, e, r in zip(empirical["n"], empirical["error"], empirical["ratio"])]
            parts.extend(self._aligned(rows, ["n", "error", "ratio"]))
        for flag in result["flags"]:
            parts.append(f"FLAG: {flag}")
        return "\n".join(parts) + "\n"

    def _text_presets(self, result: Dict) -> str:
        parts = []
        for row in result["presets"]:
            parts.append(f"{row['name']} ({row['kind']}): {row['description']}")
            parts.append(f"    {row['spec']}")
        return "\n".join(parts) + "\n"

    def _text_verify(self, result: Dict) -> str:
        parts = ["=" * 60, "VERIFICATION", "=" * 60]
        for row in result["checks"]:
            detail = f": {row['detail']}" if row["detail"] else ""
            parts.append(f"[{row['status']}] {row['name']}{detail}")
        parts.append("=" * 60)
        parts.append(f"{result['passed']} passed, {result['flagged']} flagged, {result['failed']} failed")
        return "\n".join(parts) + "\n"
