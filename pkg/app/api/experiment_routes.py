from typing import List
from fastapi import APIRouter, HTTPException
from fastapi.concurrency import run_in_threadpool
from app.models.experiment_models import ExperimentRequest, ExperimentResponse, MetricsRow
from app.services.evaluation import summarize_metrics
from app.services.experiment_runner import run_experiment
from app.utils.errors import SlidingKError
from app.utils.response_formatter import ResponseFormatter
from app.utils.logger_config import get_logger

logger = get_logger(__name__)
router = APIRouter()


@router.post("/api/experiment", response_model=ExperimentResponse)
async def start_experiment(request: ExperimentRequest) -> ExperimentResponse:
    """Run a benchmark experiment and return its metric rows.

    Args:
        request: Experiment parameters and stream source

    Returns:
        Metric rows with a per-algorithm summary

    Raises:
        HTTPException: 400 for experiment failures, 500 for unexpected errors
    """
    logger.info(f"Received experiment request: w={request.window}, k={request.k}")

    try:
        rows: List[MetricsRow] = await run_in_threadpool(run_experiment, request)
        summary = summarize_metrics(rows, request.window)
        return ResponseFormatter.format_success_response(rows, summary)

    except HTTPException:
        raise
    except (SlidingKError, ValueError, FileNotFoundError) as e:
        raise ResponseFormatter.format_error_response(str(e), 400)
    except Exception as e:
        logger.error(f"Experiment endpoint error: {str(e)}")
        raise ResponseFormatter.format_server_error(
            "Internal server error occurred"
        )
