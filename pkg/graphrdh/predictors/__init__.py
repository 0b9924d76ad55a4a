from typing import Dict, Optional, Type

from graphrdh.config import PredictorParams
from graphrdh.exceptions import RdhConfigurationError
from graphrdh.predictors.base import GraphPredictor, Predictor
from graphrdh.predictors.gtv import GtvGraphPredictor
from graphrdh.predictors.quadratic import QuadraticGraphPredictor
from graphrdh.predictors.rhombus import RhombusPredictor

predictors: Dict[str, Type[Predictor]] = {
    "quad": QuadraticGraphPredictor,
    "gtv": GtvGraphPredictor,
    "rhombus": RhombusPredictor,
}


def make_predictor(name: str, params: Optional[PredictorParams] = None) -> Predictor:
    """Instantiate the predictor registered under name."""
    try:
        predictor_class = predictors[name]
    except KeyError:
        raise RdhConfigurationError(
            f"Unknown predictor '{ name }', choose one of { ', '.join(predictors) }"
        )
    return predictor_class.from_params(params)


__all__ = [
    "GraphPredictor",
    "GtvGraphPredictor",
    "Predictor",
    "QuadraticGraphPredictor",
    "RhombusPredictor",
    "make_predictor",
    "predictors",
]
