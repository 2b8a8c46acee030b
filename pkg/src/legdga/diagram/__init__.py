from __future__ import annotations

from .front import Event, FrontDiagram, resolve_front
from .lagrangian import Crossing, LagrangianDiagram
