"""
Unified configuration management for mirrorfdr using pydantic-settings.
Scenario, model and optimiser settings are plain pydantic models that can be
loaded from a JSON benchmark config; process-level settings (worker count,
logging) come from the environment and .env files.
"""

import json
import logging
from pathlib import Path
from typing import Annotated, List, Literal, Optional, Union

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from .errors import ConfigurationError

Family = Literal["linear", "random_intercept", "logistic", "poisson"]
FAMILIES = ("linear", "random_intercept", "logistic", "poisson")
GAUSSIAN_FAMILIES = ("linear", "random_intercept")

METHODS = ("bayesms", "ds", "knockoff", "bh")


class ScenarioConfig(BaseModel):
    """Simulation scenario (one of the four data generating processes)."""
    family: Family = Field(default="linear", description="Outcome family")
    n: int = Field(default=300, ge=1, description="Number of subjects")
    p: int = Field(default=1000, ge=1, description="Number of covariates")
    p1: int = Field(default=50, ge=0, description="Number of active covariates")
    rho: float = Field(default=0.5, ge=0.0, lt=1.0, description="Toeplitz correlation factor")
    coefficients: List[float] = Field(
        default_factory=lambda: [-2.0, -1.0, 1.0, 2.0],
        description="Pool the active coefficients are drawn from",
    )
    sigma_y: float = Field(default=1.0, gt=0.0, description="Residual standard deviation")
    sigma_b0R: float = Field(default=2.0, gt=0.0, description="Random intercept standard deviation")
    M: int = Field(default=1, ge=1, description="Repeated measurements per subject")
    beta0: float = Field(default=0.0, description="Intercept")
    seed: int = Field(default=0, description="Replicate seed")

    @model_validator(mode="after")
    def check_dimensions(self):
        if self.p1 > self.p:
            raise ValueError(f"p1={self.p1} exceeds p={self.p}")
        if self.M > 1 and self.family != "random_intercept":
            raise ValueError("repeated measurements (M > 1) require the random_intercept family")
        return self

    @property
    def block_sizes(self) -> List[int]:
        """Covariance blocks: the active block first, then the null block."""
        return [size for size in (self.p1, self.p - self.p1) if size > 0]

    @property
    def scenario_id(self) -> str:
        return f"{self.family}_n{self.n}_p{self.p}_p1{self.p1}"


class HorseshoePrior(BaseModel):
    """beta_j ~ N(0, lambda_j tau), lambda_j ~ C+(0, 1), tau ~ C+(sigma_tau)."""
    kind: Literal["horseshoe"] = "horseshoe"
    sigma_tau: float = Field(default=1.0, gt=0.0)


class ProductPrior(BaseModel):
    """beta_j = eta_j * lambda_j, eta_j ~ N(0, lambda_j tau), lambda_j ~ Beta(a, b)."""
    kind: Literal["product"] = "product"
    a: float = Field(default=1.0, gt=0.0)
    b: float = Field(default=1.0, gt=0.0)
    sigma_tau: float = Field(default=1.0, gt=0.0)


class NormalPrior(BaseModel):
    """Independent N(0, scale) coefficients; the conjugate reference model."""
    kind: Literal["normal"] = "normal"
    scale: float = Field(default=10.0, gt=0.0)


PriorConfig = Annotated[
    Union[HorseshoePrior, ProductPrior, NormalPrior], Field(discriminator="kind")
]


class ModelSpec(BaseModel):
    """Likelihood family plus prior configuration. Scales are standard deviations."""
    family: Family = Field(default="linear")
    prior: PriorConfig = Field(default_factory=ProductPrior)
    intercept_prior_scale: float = Field(default=5.0, gt=0.0)
    sigma_y_prior_scale: float = Field(default=1.0, gt=0.0)
    random_intercept_prior_scale: float = Field(default=3.0, gt=0.0)
    sigma_y_fixed: Optional[float] = Field(
        default=None, gt=0.0, description="Known residual sd; drops sigma_y from the layout"
    )

    @property
    def has_sigma_y(self) -> bool:
        return self.family in GAUSSIAN_FAMILIES and self.sigma_y_fixed is None


class AdviConfig(BaseModel):
    """Mean-field ADVI and decayed adaptive gradient settings."""
    n_mc: int = Field(default=4, ge=1, description="Monte-Carlo draws per gradient step")
    iterations: int = Field(default=4000, ge=0, description="Fixed optimisation budget")
    step_size: float = Field(default=0.1, gt=0.0)
    decay_rate: float = Field(default=0.1, gt=0.0, le=1.0)
    epsilon: float = Field(default=1e-8, gt=0.0)
    seed: int = Field(default=0)
    init_location_scale: float = Field(
        default=0.0, ge=0.0, description="Sd of the random jitter on initial locations"
    )
    init_log_scale: float = Field(default=-2.0)
    smoothing: float = Field(default=0.05, gt=0.0, le=1.0, description="ELBO EMA weight")
    log_every: int = Field(default=500, ge=1)


class LoggingConfig(BaseModel):
    """Logging configuration."""
    level: str = Field(default="INFO", description="Log level")
    format: str = Field(default="%(name)s - %(message)s", description="Log format")
    file_path: Optional[str] = Field(default=None, description="Log file path")


class BenchmarkConfig(BaseModel):
    """A full benchmark run: what to simulate, how to fit, how to select."""
    name: Optional[str] = Field(default=None, description="Scenario id used in reports")
    scenario: ScenarioConfig = Field(default_factory=ScenarioConfig)
    model: Optional[ModelSpec] = Field(
        default=None, description="Defaults to a product-prior model of the scenario family"
    )
    advi: AdviConfig = Field(default_factory=AdviConfig)
    alpha: float = Field(default=0.1, gt=0.0, lt=1.0)
    replicates: int = Field(default=30, ge=1)
    base_seed: int = Field(default=42)
    methods: List[str] = Field(default_factory=lambda: ["bayesms"])
    draws: int = Field(default=2000, ge=4, description="Posterior draws (2N) for BayesMS")

    @field_validator("methods")
    @classmethod
    def check_methods(cls, v):
        unknown = [m for m in v if m not in METHODS]
        if unknown:
            raise ValueError(f"unknown methods {unknown}; choose from {list(METHODS)}")
        return v

    @field_validator("draws")
    @classmethod
    def check_draws(cls, v):
        if v % 2:
            raise ValueError("draws must be even (pairs of posterior draws)")
        return v

    @model_validator(mode="after")
    def fill_model(self):
        if self.model is None:
            self.model = ModelSpec(family=self.scenario.family)
        elif self.model.family != self.scenario.family:
            raise ValueError(
                f"model family {self.model.family} does not match scenario family {self.scenario.family}"
            )
        return self

    @property
    def scenario_id(self) -> str:
        return self.name or self.scenario.scenario_id


class MirrorFdrSettings(BaseSettings):
    """
    Process-level settings.
    Loaded from MIRRORFDR_* environment variables and .env files.
    """

    model_config = SettingsConfigDict(
        env_prefix="MIRRORFDR_",
        env_file=[".env", Path(__file__).parent.parent / ".env"],
        env_file_encoding="utf-8",
        env_nested_delimiter="__",
        case_sensitive=False,
        extra="ignore",
    )

    app_name: str = Field(default="mirrorfdr")
    version: str = Field(default="0.1.0")
    workers: int = Field(default=1, ge=1, description="Replicate worker processes")
    results_dir: str = Field(default="results")
    logging: LoggingConfig = Field(default_factory=LoggingConfig)

    @field_validator("workers", mode="before")
    @classmethod
    def validate_workers(cls, v):
        """Accept blank values from .env files as the default."""
        if v is None or (isinstance(v, str) and not v.strip()):
            return 1
        return v


# Global settings instance
_settings: Optional[MirrorFdrSettings] = None


def get_settings() -> MirrorFdrSettings:
    """Get global settings instance (singleton pattern)."""
    global _settings
    if _settings is None:
        from dotenv import load_dotenv
        load_dotenv()
        _settings = MirrorFdrSettings()
    return _settings


def reload_settings() -> MirrorFdrSettings:
    """Reload settings from environment/files."""
    global _settings
    from dotenv import load_dotenv
    load_dotenv()
    _settings = MirrorFdrSettings()
    return _settings


def load_benchmark_config(path: Union[str, Path]) -> BenchmarkConfig:
    """Read and validate a JSON benchmark config file."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    try:
        return BenchmarkConfig.model_validate(raw)
    except ValidationError as exc:
        raise ConfigurationError(f"invalid config {path}:\n{exc}") from exc


def load_model_spec(path: Union[str, Path]) -> ModelSpec:
    """Read a model spec, either bare or under the `model` key of a config."""
    raw = _read_json(path)
    try:
        return ModelSpec.model_validate(raw.get("model", raw))
    except ValidationError as exc:
        raise ConfigurationError(f"invalid model spec {path}:\n{exc}") from exc


def load_advi_config(path: Union[str, Path]) -> AdviConfig:
    """Read ADVI settings, either bare or under the `advi` key of a config."""
    raw = _read_json(path)
    try:
        return AdviConfig.model_validate(raw.get("advi", raw))
    except ValidationError as exc:
        raise ConfigurationError(f"invalid advi config {path}:\n{exc}") from exc


def _read_json(path: Union[str, Path]) -> dict:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"cannot read {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigurationError(f"{path} must contain a JSON object")
    return raw


def configure_logging(config: Optional[LoggingConfig] = None) -> None:
    """Install the rich console handler (and optional file handler) on the package logger."""
    from rich.logging import RichHandler

    config = config or get_settings().logging
    root = logging.getLogger("mirrorfdr")
    root.setLevel(config.level.upper())
    root.handlers.clear()
    console = RichHandler(rich_tracebacks=True, show_path=False)
    console.setFormatter(logging.Formatter(config.format))
    root.addHandler(console)
    if config.file_path:
        file_handler = logging.FileHandler(config.file_path, encoding="utf-8")
        file_handler.setFormatter(
            logging.Formatter("%(asctime)s - %(name)s - %(levelname)s - %(message)s")
        )
        root.addHandler(file_handler)


def validate_configuration(path: Optional[Union[str, Path]] = None) -> bool:
    """
    Validate process settings and, optionally, a benchmark config file.

    Returns:
        True if configuration is valid, False otherwise
    """
    from rich.console import Console

    console = Console()
    try:
        settings = get_settings()
        if path is not None:
            load_benchmark_config(path)
    except (ConfigurationError, ValidationError) as exc:
        console.print(f"[bold red]Configuration error:[/bold red] {exc}")
        return False
    console.print(f"[green]Configuration validation passed[/green] (workers={settings.workers})")
    return True


def load_scenario_config(path: Union[str, Path]) -> ScenarioConfig:
    """Read a scenario, either bare or under the `scenario` key of a config."""
    raw = _read_json(path)
    try:
        return ScenarioConfig.model_validate(raw.get("scenario", raw))
    except ValidationError as exc:
        raise ConfigurationError(f"invalid scenario {path}:\n{exc}") from exc
