"""
Pandera schemas for sweep tables
Every table is validated before it is written out
"""
import pandas as pd
import pandera as pa  # noqa
from pandera import Check, Column, DataFrameSchema

from src.sweeps.spec import SweepSpec

FIRST_LAW_RTOL = 1e-9
FIRST_LAW_ATOL_FRACTION = 1e-10
SIGMA_FLOOR = -1e-12


def first_law_tolerance(spec: SweepSpec) -> float:
    """Absolute floor for the first-law check: a small fraction of the largest gamma * omega_R"""
    largest = max(
        max(params.gamma_H, params.gamma_R, params.gamma_C) * params.omega_R
        for params in spec.lines
    )
    return FIRST_LAW_ATOL_FRACTION * largest


class SweepSchemas:
    """Collection of Pandera schemas for sweep output"""

    @staticmethod
    def current_column(description: str) -> Column:
        return Column(float, nullable=False, description=description)

    @staticmethod
    def sweep_table_schema(spec: SweepSpec) -> DataFrameSchema:
        """
        Schema for the internal sweep table

        Args:
            spec: Sweep the table was produced from

        Returns:
            Pandera DataFrameSchema with a frame-level first-law check
        """
        atol = first_law_tolerance(spec)

        def first_law_holds(df: pd.DataFrame) -> pd.Series:
            currents = df[["Qdot_H", "Qdot_R", "Qdot_C"]]
            bound = FIRST_LAW_RTOL * currents.abs().max(axis=1) + atol
            return currents.sum(axis=1).abs() <= bound

        columns = {
            "line": Column(
                int,
                checks=[Check.in_range(0, max(len(spec.lines) - 1, 0))],
                nullable=False,
                description="Index of the g line",
            ),
            "g": Column(
                float,
                checks=[Check.greater_than(0)],
                nullable=False,
                description="Three-body coupling strength",
            ),
        }
        if spec.variable != "g":
            columns[spec.variable] = Column(
                float,
                checks=[Check.in_range(spec.start, spec.stop)],
                nullable=False,
                description=f"Swept {spec.variable}",
            )
        columns.update(
            {
                "Qdot_H": SweepSchemas.current_column("Heat current from the hot bath"),
                "Qdot_R": SweepSchemas.current_column("Heat current from the room bath"),
                "Qdot_C": SweepSchemas.current_column("Heat current from the cold bath"),
                "eta": Column(float, nullable=True, description="Qdot_C / Qdot_H"),
                "sigma": Column(
                    float,
                    checks=[Check.greater_than_or_equal_to(SIGMA_FLOOR)],
                    nullable=False,
                    description="Entropy production rate",
                ),
                "T_v": Column(float, nullable=False, description="Virtual temperature"),
                "refrigerator": Column(bool, nullable=False, description="Qdot_C > 0"),
                "first_law_residual": Column(float, nullable=False),
                "stationarity_residual": Column(
                    float,
                    checks=[Check.greater_than_or_equal_to(0)],
                    nullable=False,
                ),
            }
        )
        return DataFrameSchema(
            columns=columns,
            checks=[Check(first_law_holds, error="Qdot_H + Qdot_R + Qdot_C != 0")],
            strict=True,
            coerce=True,
        )


class SweepValidator:
    """Validator class using Pandera schemas"""

    def __init__(self):
        self.schemas = SweepSchemas()

    def validate_table(self, table: pd.DataFrame, spec: SweepSpec) -> pd.DataFrame:
        """
        Validate a sweep table against its schema

        Args:
            table: Internal sweep table
            spec: Sweep the table was produced from

        Returns:
            The validated (coerced) table

        Raises:
            pa.errors.SchemaError: If validation fails
        """
        schema = self.schemas.sweep_table_schema(spec)
        return schema.validate(table, lazy=False)
