"""Run configuration for the command-line front end.

Values are layered from lowest to highest precedence: field defaults, the
YAML file named by MIXEDHODGE_CONFIG, MIXEDHODGE_<FIELD> environment
variables and finally command-line flags.
"""

import os
from collections.abc import Mapping
from pathlib import Path
from typing import Annotated, Any, ClassVar, Final, Literal, Self

import yaml
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .generators import SeedValue
from .scalars import Backend

ENV_PREFIX: Final = "MIXEDHODGE_"
CONFIG_ENV_VAR: Final = "MIXEDHODGE_CONFIG"

CommandName = Literal[
    "validate",
    "split",
    "rsplit",
    "dual",
    "twist",
    "ext-class",
    "taj",
    "verify-identity",
    "generate",
    "curve-verify",
]
SINGLE_DOCUMENT_COMMANDS: Final = frozenset(
    {"validate", "split", "rsplit", "dual", "twist", "ext-class", "taj"},
)
SWEEP_COMMANDS: Final = frozenset({"verify-identity", "curve-verify"})
PositiveFloat = Annotated[float, Field(gt=0, allow_inf_nan=False)]


class RunConfig(BaseModel):
    model_config: ClassVar[ConfigDict] = ConfigDict(
        extra="forbid",
        frozen=True,
        hide_input_in_errors=True,
    )

    command: CommandName
    inputs: tuple[Path, ...] = ()
    backend: Backend = Backend.EXACT
    tol_rank: PositiveFloat | None = None
    tol_torus: PositiveFloat = 1e-7
    seed: SeedValue | None = None
    trials: Annotated[int, Field(ge=1)] = 1
    out: Path | None = None
    twist: int = 1
    integral_class: tuple[int, ...] | None = None
    workers: Annotated[int, Field(ge=1)] = 1
    clearance: Annotated[float, Field(gt=0, lt=0.5)] = 0.05
    tori: Annotated[int, Field(ge=1)] = 1
    divisors_per_torus: Annotated[int, Field(ge=1)] | None = None
    max_rank: Annotated[int, Field(ge=3)] | None = None

    @model_validator(mode="after")
    def require_consistent_run(self) -> Self:
        if self.tol_rank is not None and self.backend is not Backend.FLOAT:
            msg = "tol_rank only applies to the float backend"
            raise ValueError(msg)
        if self.command == "generate" and self.seed is None:
            msg = "generate requires a seed"
            raise ValueError(msg)
        if self.command in SWEEP_COMMANDS and not self.inputs and self.seed is None:
            msg = f"{self.command} without input documents requires a seed"
            raise ValueError(msg)
        if self.command in SINGLE_DOCUMENT_COMMANDS and len(self.inputs) != 1:
            msg = f"{self.command} takes exactly one input document"
            raise ValueError(msg)
        if self.command == "taj" and self.integral_class is None:
            msg = "taj requires an integral class"
            raise ValueError(msg)
        return self

    @property
    def curve_divisors(self) -> int:
        """Divisors per torus for curve sweeps; trials stands in when unset."""
        return self.trials if self.divisors_per_torus is None else self.divisors_per_torus


def _environment_values(environ: Mapping[str, str]) -> dict[str, Any]:
    values: dict[str, Any] = {}
    for name in RunConfig.model_fields:
        raw = environ.get(f"{ENV_PREFIX}{name.upper()}")
        if raw is None or raw == "":
            continue
        if name == "inputs":
            values[name] = tuple(part for part in raw.split(os.pathsep) if part)
        elif name == "integral_class":
            values[name] = tuple(part.strip() for part in raw.split(",") if part.strip())
        else:
            values[name] = raw
    return values


def load_defaults(path: Path) -> dict[str, Any]:
    with path.open(encoding="utf-8") as config_file:
        data = yaml.safe_load(config_file)
    if data is None:
        return {}
    if not isinstance(data, dict):
        msg = f"{path} must contain a mapping of run options"
        raise ValueError(msg)
    return data


def load_run_config(flags: Mapping[str, Any], environ: Mapping[str, str] | None = None) -> RunConfig:
    """Merge the defaults file, environment overrides and flags into a RunConfig.

    Flags set to None are treated as absent so that lower layers show through.
    """
    environment = os.environ if environ is None else environ
    merged: dict[str, Any] = {}
    defaults_path = environment.get(CONFIG_ENV_VAR)
    if defaults_path:
        merged.update(load_defaults(Path(defaults_path)))
    merged.update(_environment_values(environment))
    merged.update({key: value for key, value in flags.items() if value is not None})
    return RunConfig.model_validate(merged)
