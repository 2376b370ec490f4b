from pydantic import BaseModel

from app.models.schemas import (
    Bound,
    BoundInterval,
    BoundsReport,
    BoundSummary,
    DerivationEntry,
    OracleResult,
    OrdinalResult,
    WitnessListing,
    WitnessReport,
)

_RELATION_LABELS = {"classical": "R", "topological": "R^top", "closed": "R^cl"}


class ReportFormatter:
    """Formats engine, oracle and witness results as text or JSON."""

    def summarize_bound(self, bound: Bound) -> BoundSummary:
        return BoundSummary(
            value=str(bound.value),
            kind=bound.kind,
            draft=bound.draft,
            derivation=[
                DerivationEntry(rule=step.rule, cite=step.cite, value=str(step.value))
                for step in bound.derivation
            ],
        )

    def format_bounds(self, interval: BoundInterval) -> BoundsReport:
        """
        Flatten a BoundInterval into the stable report schema.

        Args:
            interval: Best bounds for one query

        Returns:
            BoundsReport with ordinals rendered in canonical text
        """
        query = interval.query
        return BoundsReport(
            relation=query.relation,
            alpha=str(query.alpha),
            k=query.k,
            lower=self.summarize_bound(interval.lower),
            upper=self.summarize_bound(interval.upper) if interval.upper else None,
            exact=interval.exact,
        )

    def to_json(self, model: BaseModel | list[BaseModel]) -> str:
        if isinstance(model, list):
            return "[\n" + ",\n".join(item.model_dump_json(indent=2) for item in model) + "\n]"
        return model.model_dump_json(indent=2)

    def to_text(self, model: BaseModel | list[BaseModel]) -> str:
        if isinstance(model, list):
            return "\n".join(self.to_text(item) for item in model)
        if isinstance(model, BoundsReport):
            return self._bounds_text(model)
        if isinstance(model, OracleResult):
            return self._oracle_text(model)
        if isinstance(model, WitnessReport):
            return self._witness_text(model)
        if isinstance(model, WitnessListing):
            return f"{model.name}: {model.description} ({model.classes} classes, {model.edges} edges)"
        if isinstance(model, OrdinalResult):
            return model.result if model.cite is None else f"{model.result}  [{model.cite}]"
        return str(model)

    def _bounds_text(self, report: BoundsReport) -> str:
        label = f"{_RELATION_LABELS[report.relation]}({report.alpha}, {report.k})"
        if report.exact:
            lines = [f"{label} = {report.lower.value}"]
            lines.extend(self._derivation_lines(report.lower))
            return "\n".join(lines)

        upper = report.upper.value if report.upper else "?"
        lines = [f"{report.lower.value} <= {label} <= {upper}", "lower:"]
        lines.extend(self._derivation_lines(report.lower))
        if report.upper:
            lines.append("upper:" + ("  (draft)" if report.upper.draft else ""))
            lines.extend(self._derivation_lines(report.upper))
        return "\n".join(lines)

    @staticmethod
    def _derivation_lines(summary: BoundSummary) -> list[str]:
        return [f"  {entry.cite} [{entry.rule}] -> {entry.value}" for entry in summary.derivation]

    @staticmethod
    def _oracle_text(result: OracleResult) -> str:
        name = "R" if result.quantity == "ramsey" else "R(K*_m, L_k)"
        line = f"{name} with m={result.m}, k={result.k}: {result.value} ({result.provenance})"
        if result.lower_witness is not None:
            line += f"\nlower witness on {result.lower_witness.vertex_count} vertices"
        return line

    @staticmethod
    def _witness_text(report: WitnessReport) -> str:
        lines = [
            f"{report.witness}: {report.verdict}",
            f"  trials={report.trials} sample_size={report.sample_size} seed={report.seed}",
        ]
        lines.extend(f"  {violation}" for violation in report.violations)
        return "\n".join(lines)


report_formatter = ReportFormatter()
