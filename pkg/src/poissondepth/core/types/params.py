"""Global affine alignment parameters."""

from pydantic import BaseModel, ConfigDict, Field, computed_field


class AffineParams(BaseModel):
    """Scale/shift mapping relative depth to meters: ``D = alpha * D_r + beta``."""

    model_config = ConfigDict(frozen=True)

    alpha: float = Field(..., gt=0, allow_inf_nan=False, description="Meters per relative unit")
    beta: float = Field(..., allow_inf_nan=False, description="Shift in meters")

    @computed_field  # type: ignore[prop-decorator]
    @property
    def gamma(self) -> float:
        """Shift expressed in relative units, beta / alpha."""
        return self.beta / self.alpha
