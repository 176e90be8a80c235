from fastapi import HTTPException
from app.models.experiment_models import Algorithm, ExperimentResponse, MetricsRow
from app.utils.response_formatter import ResponseFormatter


class TestResponseFormatter:
    """Test cases for ResponseFormatter class."""

    def setup_method(self):
        """Set up test fixtures."""
        self.rows = [
            MetricsRow(t=100, algo=Algorithm.BATCH, cost=4.5, points_stored=100, distance_evals=9000)
        ]
        self.summary = {"batch": {"queries": 1, "median_cost": 4.5}}

    def test_format_success_response(self):
        """Test successful response formatting."""
        result = ResponseFormatter.format_success_response(self.rows, self.summary)

        assert isinstance(result, ExperimentResponse)
        assert result.status == "success"
        assert result.rows[0].cost == 4.5
        assert result.summary["batch"]["queries"] == 1

    def test_format_error_response_default_status(self):
        """Test error response formatting with default status code."""
        message = "Test error message"

        result = ResponseFormatter.format_error_response(message)

        assert isinstance(result, HTTPException)
        assert result.status_code == 400
        assert result.detail["status"] == "error"
        assert result.detail["message"] == message

    def test_format_error_response_custom_status(self):
        """Test error response formatting with custom status code."""
        result = ResponseFormatter.format_error_response("Custom error", 503)

        assert result.status_code == 503
        assert result.detail["message"] == "Custom error"

    def test_format_server_error(self):
        """Test server error formatting."""
        result = ResponseFormatter.format_server_error("Internal error")

        assert result.status_code == 500
        assert result.detail["message"] == "Internal error"
