import os
from pathlib import Path

import pytest
from pydantic import ValidationError

from mixedhodge.configuration import CONFIG_ENV_VAR, RunConfig, load_defaults, load_run_config
from mixedhodge.scalars import Backend


def test_flags_alone_build_a_config() -> None:
    # When
    config = load_run_config({"command": "split", "inputs": [Path("a.yaml")], "seed": None}, environ={})

    # Then
    assert config.command == "split"
    assert config.inputs == (Path("a.yaml"),)
    assert config.backend is Backend.EXACT
    assert config.seed is None
    assert config.tol_torus == 1e-7
    assert config.workers == 1


def test_environment_overrides_defaults_file_and_flags_override_environment(tmp_path: Path) -> None:
    # Given
    defaults = tmp_path / "defaults.yaml"
    defaults.write_text("trials: 10\nworkers: 3\nseed: 1\n", encoding="utf-8")
    environ = {
        CONFIG_ENV_VAR: str(defaults),
        "MIXEDHODGE_TRIALS": "20",
        "MIXEDHODGE_SEED": "5",
    }

    # When
    config = load_run_config({"command": "verify-identity", "seed": 9, "trials": None}, environ=environ)

    # Then
    assert config.workers == 3
    assert config.trials == 20
    assert config.seed == 9


def test_environment_lists_are_split(tmp_path: Path) -> None:
    # Given
    environ = {
        "MIXEDHODGE_INPUTS": os.pathsep.join([str(tmp_path / "a.yaml"), str(tmp_path / "b.yaml")]),
        "MIXEDHODGE_INTEGRAL_CLASS": "1, -2",
    }

    # When
    config = load_run_config({"command": "verify-identity"}, environ=environ)

    # Then
    assert config.inputs == (tmp_path / "a.yaml", tmp_path / "b.yaml")
    assert config.integral_class == (1, -2)


def test_empty_environment_values_are_ignored() -> None:
    # When
    config = load_run_config({"command": "generate", "seed": 0}, environ={"MIXEDHODGE_BACKEND": ""})

    # Then
    assert config.backend is Backend.EXACT


@pytest.mark.parametrize(
    ("values", "message"),
    [
        ({"command": "split", "inputs": ()}, "exactly one input document"),
        ({"command": "split", "inputs": ("a", "b")}, "exactly one input document"),
        ({"command": "generate"}, "generate requires a seed"),
        ({"command": "curve-verify"}, "requires a seed"),
        ({"command": "taj", "inputs": ("a",)}, "taj requires an integral class"),
        ({"command": "generate", "seed": 1, "tol_rank": 1e-6}, "only applies to the float backend"),
        ({"command": "generate", "seed": -1}, "greater than or equal to 0"),
        ({"command": "generate", "seed": 1, "trials": 0}, "greater than or equal to 1"),
        ({"command": "generate", "seed": 1, "clearance": 0.5}, "less than 0.5"),
        ({"command": "generate", "seed": 1, "tol_torus": 0}, "greater than 0"),
        ({"command": "integrate"}, "Input should be"),
        ({"command": "generate", "seed": 1, "verbose": True}, "Extra inputs are not permitted"),
        ({"command": "curve-verify", "seed": 1, "tori": 0}, "greater than or equal to 1"),
        ({"command": "curve-verify", "seed": 1, "divisors_per_torus": 0}, "greater than or equal to 1"),
        ({"command": "verify-identity", "max_rank": 2}, "greater than or equal to 3"),
    ],
)
def test_run_config_rejects_inconsistent_runs(values: dict[str, object], message: str) -> None:
    # When / Then
    with pytest.raises(ValidationError, match=message):
        RunConfig.model_validate(values)


def test_curve_divisors_fall_back_to_trials() -> None:
    # When
    unset = RunConfig(command="curve-verify", seed=1, trials=7, tori=3)
    pinned = RunConfig(command="curve-verify", seed=1, trials=7, tori=3, divisors_per_torus=50)

    # Then
    assert (unset.tori, unset.curve_divisors) == (3, 7)
    assert (pinned.tori, pinned.curve_divisors) == (3, 50)


def test_sweep_shape_comes_from_the_environment() -> None:
    # Given
    environ = {"MIXEDHODGE_TORI": "5", "MIXEDHODGE_DIVISORS_PER_TORUS": "50", "MIXEDHODGE_MAX_RANK": "6"}

    # When
    config = load_run_config({"command": "curve-verify", "seed": 2}, environ=environ)

    # Then
    assert (config.tori, config.curve_divisors, config.max_rank) == (5, 50, 6)


def test_float_backend_accepts_rank_tolerance() -> None:
    # When
    config = RunConfig(command="generate", seed=1, backend=Backend.FLOAT, tol_rank=1e-6)

    # Then
    assert config.tol_rank == 1e-6


def test_load_defaults_accepts_empty_file(tmp_path: Path) -> None:
    # Given
    path = tmp_path / "empty.yaml"
    path.write_text("", encoding="utf-8")

    # When / Then
    assert load_defaults(path) == {}


def test_load_defaults_rejects_non_mapping(tmp_path: Path) -> None:
    # Given
    path = tmp_path / "list.yaml"
    path.write_text("- 1\n- 2\n", encoding="utf-8")

    # When / Then
    with pytest.raises(ValueError, match="mapping of run options"):
        load_defaults(path)


def test_missing_defaults_file_raises(tmp_path: Path) -> None:
    # When / Then
    with pytest.raises(FileNotFoundError):
        load_run_config({"command": "generate", "seed": 1}, environ={CONFIG_ENV_VAR: str(tmp_path / "missing.yaml")})
