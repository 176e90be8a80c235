from typing import Any, Dict, List
from fastapi import HTTPException
from app.models.experiment_models import ErrorResponse, ExperimentResponse, MetricsRow


class ResponseFormatter:
    """Formats API responses for experiment runs."""

    @staticmethod
    def format_success_response(rows: List[MetricsRow], summary: Dict[str, Dict[str, Any]]) -> ExperimentResponse:
        """Format a finished experiment.

        Args:
            rows: Metric rows in query order
            summary: Per-algorithm summary from summarize_metrics

        Returns:
            Formatted ExperimentResponse object
        """
        return ExperimentResponse(rows=rows, summary=summary)

    @staticmethod
    def format_error_response(message: str, status_code: int = 400) -> HTTPException:
        """Format error response as HTTPException.

        Args:
            message: Error message
            status_code: HTTP status code

        Returns:
            HTTPException with formatted error
        """
        error_response = ErrorResponse(message=message)
        return HTTPException(
            status_code=status_code,
            detail=error_response.model_dump()
        )

    @staticmethod
    def format_server_error(message: str) -> HTTPException:
        """Format server error response."""
        return ResponseFormatter.format_error_response(message, 500)
