from .experiment import (
    ESTIMATORS, ExperimentSpec, ReportRow, report_value, run_mc, write_report
)
from .figure import CostFigure, reproduce_cost_figure
