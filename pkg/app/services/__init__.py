"""
Service layer

Each module keeps its computations as functions of the weight table; the
service classes bind one table and are what RunService and the sweep
tasks call.
"""
from .clt_service import CltService
from .permstat_service import PermStatService
from .voronoi_service import VoronoiService

__all__ = ["VoronoiService", "PermStatService", "CltService"]
