from dataclasses import asdict, dataclass, fields, replace
from typing import Any, Dict, Optional

import yaml

from graphrdh.exceptions import RdhConfigurationError


@dataclass(frozen=True)
class PredictorParams:
    """
    All knobs of the graph predictors. Defaults are the published parameter choice:
    sigma_l = sigma_x = 0.5, gamma = 0.5, rho = 5, t = 0.1 and a 31x31 search window.
    """

    sigma_l: float = 0.5
    sigma_x: float = 0.5
    gamma: float = 0.5
    rho: float = 5.0
    step_t: float = 0.1
    window: int = 31
    admm_max_iters: int = 200
    pg_max_iters: int = 50
    pg_tol: float = 1e-7
    primal_tol: float = 1e-5
    x_tol: float = 1e-6

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise RdhConfigurationError(f"Parameter '{ f.name }' must be numeric")
            if not value > 0:
                raise RdhConfigurationError(
                    f"Parameter '{ f.name }' must be positive, got { value }"
                )
        if self.window % 2 != 1:
            raise RdhConfigurationError(f"Search window size must be odd, got { self.window }")

    @property
    def window_radius(self) -> int:
        return self.window // 2

    @classmethod
    def from_dict(cls, d: Optional[Dict[str, Any]]) -> "PredictorParams":
        """Instantiate parameters from dict, missing keys keep their defaults."""
        if d is not None and not isinstance(d, dict):
            raise RdhConfigurationError("Predictor parameters must be a mapping")
        d = dict(d or {})
        known = {f.name: f.type for f in fields(cls)}
        unknown = set(d) - set(known)
        if unknown:
            raise RdhConfigurationError(
                f"Unknown predictor parameter(s): { ', '.join(sorted(unknown)) }"
            )
        for k in ("window", "admm_max_iters", "pg_max_iters"):
            if k in d:
                value = d[k]
                if (
                    isinstance(value, bool)
                    or not isinstance(value, (int, float))
                    or not float(value).is_integer()
                ):
                    raise RdhConfigurationError(f"Parameter '{ k }' must be an integer")
                d[k] = int(d[k])
        for k in set(d) - {"window", "admm_max_iters", "pg_max_iters"}:
            try:
                d[k] = float(d[k])
            except (TypeError, ValueError):
                raise RdhConfigurationError(f"Parameter '{ k }' must be numeric")
        return cls(**d)

    @classmethod
    def from_yaml(cls, params: str) -> "PredictorParams":
        try:
            d = yaml.safe_load(params)
        except yaml.YAMLError as e:
            raise RdhConfigurationError(f"Predictor parameters are not valid YAML: { e }")
        return cls.from_dict(d)

    def with_overrides(self, **overrides: Any) -> "PredictorParams":
        """Copy with all overrides applied that are not None."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
