"""Server state management for the rbf-certify MCP server."""

import itertools
from collections import OrderedDict
from typing import List, Optional, Tuple

from .interp import SplineModel

MAX_MODELS = 100


class ServerState:
    """Maintains fitted models between tool calls.

    At most ``max_models`` models are kept; storing one more evicts the
    oldest.
    """

    def __init__(self, max_models: int = MAX_MODELS):
        self.max_models = max_models
        self.models: "OrderedDict[str, SplineModel]" = OrderedDict()
        self._ids = itertools.count(1)

    def add_model(self, model: SplineModel) -> str:
        model_id = f"m{next(self._ids)}"
        self.models[model_id] = model
        while len(self.models) > self.max_models:
            self.models.popitem(last=False)
        return model_id

    def get_model(self, model_id: str) -> Optional[SplineModel]:
        return self.models.get(model_id)

    def list_models(self) -> List[Tuple[str, SplineModel]]:
        return list(self.models.items())

    def clear(self) -> int:
        count = len(self.models)
        self.models.clear()
        return count


# Global state instance
state = ServerState()
